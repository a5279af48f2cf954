#include "cpforge/cp_model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace cpforge {

using geom::Vec2;
using nlohmann::ordered_json;

std::optional<Assignment> assignment_from_char(char c) {
    switch (c) {
        case 'B': return Assignment::B;
        case 'M': return Assignment::M;
        case 'V': return Assignment::V;
        case 'F': return Assignment::F;
        case 'U': return Assignment::U;
        default: return std::nullopt;
    }
}

Assignment CreasePattern::assignment_of(int edge) const {
    if (edges_assignment.empty()) return Assignment::U;
    return edges_assignment[static_cast<size_t>(edge)];
}

geom::Polygon CreasePattern::face_polygon(int face) const {
    geom::Polygon poly;
    for (int vi : faces_vertices[static_cast<size_t>(face)]) {
        poly.push_back(vertices_coords[static_cast<size_t>(vi)]);
    }
    return poly;
}

std::vector<int> CreasePattern::incident_edges(int vertex) const {
    std::vector<int> out;
    for (int e = 0; e < edge_count(); ++e) {
        const auto& [a, b] = edges_vertices[static_cast<size_t>(e)];
        if (a == vertex || b == vertex) out.push_back(e);
    }
    return out;
}

int CreasePattern::other_endpoint(int edge, int vertex) const {
    const auto& [a, b] = edges_vertices[static_cast<size_t>(edge)];
    return a == vertex ? b : a;
}

bool CreasePattern::is_boundary_vertex(int vertex) const {
    for (int e : incident_edges(vertex)) {
        if (assignment_of(e) == Assignment::B) return true;
    }
    return false;
}

namespace {

std::pair<int, int> line_col_of(std::string_view text, size_t byte) {
    int line = 1, col = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

void push_error(std::vector<Diagnostic>& diags, std::string code, std::string msg,
                std::map<std::string, nlohmann::json> params = {}) {
    diags.emplace_back(std::move(code), std::move(msg), std::move(params));
}

}  // namespace

ParseResult parse_cp(std::string_view text) {
    ParseResult result;
    std::vector<Diagnostic> errors;
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, col] = line_col_of(text, e.byte > 0 ? e.byte - 1 : 0);
        push_error(errors, "E_CP_SYNTAX_UNEXPECTED_TOKEN", e.what(),
                   {{"line_number", line}, {"col_number", col},
                    {"faulty_cp_code_line_numbers", nlohmann::json::array({line})}});
        result.diagnostics = std::move(errors);
        return result;
    }
    if (!doc.is_object()) {
        push_error(errors, "E_CP_SYNTAX_UNEXPECTED_TOKEN",
                   "CP document must be an object with the CP top-level keys");
        result.diagnostics = std::move(errors);
        return result;
    }

    CreasePattern cp;

    if (doc.contains("vertices_coords")) {
        const auto& vc = doc["vertices_coords"];
        if (!vc.is_array()) {
            push_error(errors, "E_CP_SYNTAX_INVALID_PARAM_TYPE",
                       "vertices_coords must be an array of [x, y] pairs");
        } else {
            for (size_t i = 0; i < vc.size(); ++i) {
                const auto& item = vc[i];
                if (!item.is_array() || item.size() != 2) {
                    push_error(errors, "E_CP_SYNTAX_INVALID_PARAM_COUNT",
                               "vertex " + std::to_string(i) + " must have exactly 2 coordinates",
                               {{"expected", 2},
                                {"got", item.is_array() ? static_cast<int>(item.size()) : 0},
                                {"vertex", static_cast<int>(i)}});
                    continue;
                }
                if (!item[0].is_number() || !item[1].is_number()) {
                    push_error(errors, "E_CP_SYNTAX_INVALID_PARAM_TYPE",
                               "vertex " + std::to_string(i) + " has a non-numeric coordinate",
                               {{"vertex", static_cast<int>(i)}, {"value", item.dump()}});
                    continue;
                }
                cp.vertices_coords.push_back(
                    Vec2{item[0].get<double>(), item[1].get<double>()});
            }
        }
    }

    if (doc.contains("edges_vertices")) {
        const auto& ev = doc["edges_vertices"];
        if (!ev.is_array()) {
            push_error(errors, "E_CP_SYNTAX_INVALID_PARAM_TYPE",
                       "edges_vertices must be an array of [i, j] pairs");
        } else {
            for (size_t i = 0; i < ev.size(); ++i) {
                const auto& item = ev[i];
                if (!item.is_array() || item.size() != 2) {
                    push_error(errors, "E_CP_SYNTAX_INVALID_PARAM_COUNT",
                               "edge " + std::to_string(i) + " must have exactly 2 endpoints",
                               {{"expected", 2},
                                {"got", item.is_array() ? static_cast<int>(item.size()) : 0},
                                {"faulty_crease_ids", nlohmann::json::array({i})}});
                    continue;
                }
                if (!item[0].is_number_integer() || !item[1].is_number_integer()) {
                    push_error(errors, "E_CP_SYNTAX_INVALID_PARAM_TYPE",
                               "edge " + std::to_string(i) + " has a non-integer vertex index",
                               {{"faulty_crease_ids", nlohmann::json::array({i})},
                                {"value", item.dump()}});
                    continue;
                }
                const int a = item[0].get<int>();
                const int b = item[1].get<int>();
                bool ok = true;
                for (const int v : {a, b}) {
                    if (v < 0 || v >= cp.vertex_count()) {
                        push_error(errors, "E_CP_SYNTAX_INVALID_LINE_REFERENCE",
                                   "edge " + std::to_string(i) +
                                       " references nonexistent vertex " + std::to_string(v),
                                   {{"point_id", v},
                                    {"faulty_crease_ids", nlohmann::json::array({i})}});
                        ok = false;
                    }
                }
                if (ok) cp.edges_vertices.emplace_back(a, b);
            }
        }
    }

    if (doc.contains("edges_assignment")) {
        const auto& ea = doc["edges_assignment"];
        if (!ea.is_array()) {
            push_error(errors, "E_CP_SYNTAX_INVALID_PARAM_TYPE",
                       "edges_assignment must be an array of one-character strings");
        } else {
            if (!ea.empty() && errors.empty() && ea.size() != cp.edges_vertices.size()) {
                push_error(errors, "E_CP_SYNTAX_INVALID_PARAM_COUNT",
                           "edges_assignment length must match edges_vertices",
                           {{"expected", static_cast<int>(cp.edges_vertices.size())},
                            {"got", static_cast<int>(ea.size())}});
            }
            for (size_t i = 0; i < ea.size(); ++i) {
                const auto& item = ea[i];
                std::optional<Assignment> a;
                if (item.is_string()) {
                    const std::string s = item.get<std::string>();
                    if (s.size() == 1) a = assignment_from_char(s[0]);
                }
                if (!a) {
                    push_error(errors, "E_CP_SYNTAX_INVALID_PARAM_TYPE",
                               "edge " + std::to_string(i) + " assignment " + item.dump() +
                                   " is not one of B, M, V, F, U",
                               {{"value", item.dump()},
                                {"faulty_crease_ids", nlohmann::json::array({i})}});
                    continue;
                }
                cp.edges_assignment.push_back(*a);
            }
        }
    }

    if (doc.contains("faces_vertices")) {
        const auto& fv = doc["faces_vertices"];
        if (!fv.is_array()) {
            push_error(errors, "E_CP_SYNTAX_INVALID_PARAM_TYPE",
                       "faces_vertices must be an array of vertex-index arrays");
        } else {
            for (size_t i = 0; i < fv.size(); ++i) {
                const auto& item = fv[i];
                if (!item.is_array() || item.size() < 3) {
                    push_error(errors, "E_CP_SYNTAX_INVALID_PARAM_COUNT",
                               "face " + std::to_string(i) + " must list at least 3 vertices",
                               {{"expected", 3},
                                {"got", item.is_array() ? static_cast<int>(item.size()) : 0}});
                    continue;
                }
                std::vector<int> cycle;
                bool ok = true;
                for (const auto& vi : item) {
                    if (!vi.is_number_integer()) {
                        push_error(errors, "E_CP_SYNTAX_INVALID_PARAM_TYPE",
                                   "face " + std::to_string(i) + " has a non-integer vertex index",
                                   {{"value", vi.dump()}});
                        ok = false;
                        break;
                    }
                    const int v = vi.get<int>();
                    if (v < 0 || v >= cp.vertex_count()) {
                        push_error(errors, "E_CP_SYNTAX_INVALID_LINE_REFERENCE",
                                   "face " + std::to_string(i) +
                                       " references nonexistent vertex " + std::to_string(v),
                                   {{"point_id", v}});
                        ok = false;
                        break;
                    }
                    cycle.push_back(v);
                }
                if (ok) cp.faces_vertices.push_back(std::move(cycle));
            }
        }
    }

    for (const auto& [key, value] : doc.items()) {
        if (key != "vertices_coords" && key != "edges_vertices" &&
            key != "edges_assignment" && key != "faces_vertices") {
            cp.extras.emplace_back(key, value);
        }
    }
    std::sort(cp.extras.begin(), cp.extras.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    if (!errors.empty()) {
        result.diagnostics = std::move(errors);
        return result;
    }

    // Canonical orientation: reorient clockwise face cycles.
    std::vector<Diagnostic> notes;
    for (size_t f = 0; f < cp.faces_vertices.size(); ++f) {
        geom::Polygon poly;
        for (int vi : cp.faces_vertices[f]) poly.push_back(cp.vertices_coords[static_cast<size_t>(vi)]);
        if (geom::signed_area(poly) < 0) {
            std::reverse(cp.faces_vertices[f].begin(), cp.faces_vertices[f].end());
            notes.emplace_back("E_CP_SYNTAX_VALUE_OUT_OF_RANGE",
                               "face " + std::to_string(f) +
                                   " was clockwise and has been reoriented counterclockwise",
                               std::map<std::string, nlohmann::json>{{"value", static_cast<int>(f)}},
                               Severity::Warning);
        }
    }

    result.cp = std::move(cp);
    result.diagnostics = std::move(notes);
    return result;
}

std::string serialize_cp(const CreasePattern& cp) {
    std::string out = "{\"vertices_coords\":[";
    for (size_t i = 0; i < cp.vertices_coords.size(); ++i) {
        if (i) out += ',';
        out += '[';
        out += geom::format_double(cp.vertices_coords[i].x);
        out += ',';
        out += geom::format_double(cp.vertices_coords[i].y);
        out += ']';
    }
    out += "],\"edges_vertices\":[";
    for (size_t i = 0; i < cp.edges_vertices.size(); ++i) {
        if (i) out += ',';
        out += '[';
        out += std::to_string(cp.edges_vertices[i].first);
        out += ',';
        out += std::to_string(cp.edges_vertices[i].second);
        out += ']';
    }
    out += ']';
    if (cp.has_assignments()) {
        out += ",\"edges_assignment\":[";
        for (size_t i = 0; i < cp.edges_assignment.size(); ++i) {
            if (i) out += ',';
            out += '"';
            out += static_cast<char>(cp.edges_assignment[i]);
            out += '"';
        }
        out += ']';
    }
    out += ",\"faces_vertices\":[";
    for (size_t i = 0; i < cp.faces_vertices.size(); ++i) {
        if (i) out += ',';
        out += '[';
        for (size_t k = 0; k < cp.faces_vertices[i].size(); ++k) {
            if (k) out += ',';
            out += std::to_string(cp.faces_vertices[i][k]);
        }
        out += ']';
    }
    out += ']';
    for (const auto& [key, value] : cp.extras) {
        out += ",\"";
        out += key;
        out += "\":";
        out += value.dump();
    }
    out += "}\n";
    return out;
}

nlohmann::ordered_json validation_report_to_json(const ValidationReport& r) {
    ordered_json j;
    j["valid"] = r.valid;
    ordered_json ds = ordered_json::array();
    for (const auto& d : r.diagnostics) ds.push_back(diagnostic_to_json(d));
    j["diagnostics"] = std::move(ds);
    return j;
}

ValidationReport validate_structure(const CreasePattern& cp) {
    ValidationReport report;
    auto& diags = report.diagnostics;

    // Field presence.
    if (cp.vertices_coords.empty()) {
        push_error(diags, "E_CP_SYNTAX_MISSING_DELIMITER",
                   "required element vertices_coords is missing or empty",
                   {{"faulty_token_or_command", "vertices_coords"}});
    }
    if (cp.edges_vertices.empty()) {
        push_error(diags, "E_CP_SYNTAX_MISSING_DELIMITER",
                   "required element edges_vertices is missing or empty",
                   {{"faulty_token_or_command", "edges_vertices"}});
    }
    if (cp.faces_vertices.empty()) {
        push_error(diags, "E_CP_SYNTAX_MISSING_DELIMITER",
                   "required element faces_vertices is missing or empty",
                   {{"faulty_token_or_command", "faces_vertices"}});
    }

    // Coordinate finiteness.
    for (int v = 0; v < cp.vertex_count(); ++v) {
        const Vec2 p = cp.vertices_coords[static_cast<size_t>(v)];
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            push_error(diags, "E_CP_SYNTAX_VALUE_OUT_OF_RANGE",
                       "vertex " + std::to_string(v) + " has a non-finite coordinate",
                       {{"vertex", v}});
        }
    }

    // Edge sanity.
    bool edge_refs_ok = true;
    for (int e = 0; e < cp.edge_count(); ++e) {
        const auto& [a, b] = cp.edges_vertices[static_cast<size_t>(e)];
        if (a < 0 || a >= cp.vertex_count() || b < 0 || b >= cp.vertex_count()) {
            push_error(diags, "E_CP_SYNTAX_INVALID_LINE_REFERENCE",
                       "edge " + std::to_string(e) + " references a nonexistent vertex",
                       {{"faulty_crease_ids", nlohmann::json::array({e})}});
            edge_refs_ok = false;
            continue;
        }
        if (a == b) {
            push_error(diags, "E_CP_SYNTAX_VALUE_OUT_OF_RANGE",
                       "edge " + std::to_string(e) + " must join two distinct vertices",
                       {{"faulty_crease_ids", nlohmann::json::array({e})}});
        }
    }

    // Assignment alphabet and length.
    if (cp.has_assignments() &&
        cp.edges_assignment.size() != cp.edges_vertices.size()) {
        push_error(diags, "E_CP_SYNTAX_INVALID_PARAM_COUNT",
                   "edges_assignment length must match edges_vertices",
                   {{"expected", cp.edge_count()},
                    {"got", static_cast<int>(cp.edges_assignment.size())}});
    }
    for (size_t i = 0; i < cp.edges_assignment.size(); ++i) {
        if (!assignment_from_char(static_cast<char>(cp.edges_assignment[i]))) {
            push_error(diags, "E_CP_SYNTAX_INVALID_PARAM_TYPE",
                       "edge " + std::to_string(i) + " assignment is not one of B, M, V, F, U",
                       {{"faulty_crease_ids", nlohmann::json::array({i})}});
        }
    }

    // Face sanity.
    bool face_refs_ok = true;
    for (int f = 0; f < cp.face_count(); ++f) {
        const auto& cycle = cp.faces_vertices[static_cast<size_t>(f)];
        if (cycle.size() < 3) {
            push_error(diags, "E_CP_SYNTAX_INVALID_PARAM_COUNT",
                       "face " + std::to_string(f) + " must list at least 3 vertices",
                       {{"expected", 3}, {"got", static_cast<int>(cycle.size())}});
            face_refs_ok = false;
            continue;
        }
        std::set<int> seen;
        for (int vi : cycle) {
            if (vi < 0 || vi >= cp.vertex_count()) {
                push_error(diags, "E_CP_SYNTAX_INVALID_LINE_REFERENCE",
                           "face " + std::to_string(f) + " references nonexistent vertex " +
                               std::to_string(vi),
                           {{"point_id", vi}});
                face_refs_ok = false;
            } else if (!seen.insert(vi).second) {
                push_error(diags, "E_CP_SYNTAX_VALUE_OUT_OF_RANGE",
                           "face " + std::to_string(f) + " repeats vertex " + std::to_string(vi),
                           {{"point_id", vi}});
            }
        }
    }

    // Duplicate undirected edges.
    std::map<std::pair<int, int>, std::vector<int>> edge_ids;
    if (edge_refs_ok) {
        for (int e = 0; e < cp.edge_count(); ++e) {
            const auto& [a, b] = cp.edges_vertices[static_cast<size_t>(e)];
            edge_ids[std::minmax(a, b)].push_back(e);
        }
        for (const auto& [key, ids] : edge_ids) {
            if (ids.size() > 1) {
                push_error(diags, "E_CP_SYNTAX_VALUE_OUT_OF_RANGE",
                           "duplicate undirected edge between vertices " +
                               std::to_string(key.first) + " and " + std::to_string(key.second),
                           {{"faulty_crease_ids", nlohmann::json(ids)}});
            }
        }
    }

    // Face coverage: every face side must be an edge; boundary edges belong to
    // exactly one face, interior edges to exactly two.
    if (edge_refs_ok && face_refs_ok && !cp.faces_vertices.empty()) {
        std::map<std::pair<int, int>, int> usage;
        bool sides_ok = true;
        for (int f = 0; f < cp.face_count(); ++f) {
            const auto& cycle = cp.faces_vertices[static_cast<size_t>(f)];
            for (size_t k = 0; k < cycle.size(); ++k) {
                const int a = cycle[k];
                const int b = cycle[(k + 1) % cycle.size()];
                const auto key = std::minmax(a, b);
                if (!edge_ids.count(key)) {
                    push_error(diags, "E_CP_SYNTAX_INVALID_LINE_REFERENCE",
                               "face " + std::to_string(f) + " uses segment (" +
                                   std::to_string(a) + ", " + std::to_string(b) +
                                   ") which is not a listed edge",
                               {{"line_id", nlohmann::json::array({a, b})}});
                    sides_ok = false;
                } else {
                    ++usage[key];
                }
            }
        }
        if (sides_ok) {
            for (int e = 0; e < cp.edge_count(); ++e) {
                const auto& [a, b] = cp.edges_vertices[static_cast<size_t>(e)];
                const int used = usage.count(std::minmax(a, b)) ? usage[std::minmax(a, b)] : 0;
                const Assignment assign = cp.assignment_of(e);
                const bool boundary = cp.has_assignments() && assign == Assignment::B;
                // U edges may sit on the boundary (tolerated as B).
                const bool flexible = !cp.has_assignments() || assign == Assignment::U;
                const int expect_min = boundary || flexible ? 1 : 2;
                const int expect_max = boundary ? 1 : 2;
                if (used < expect_min || used > expect_max) {
                    push_error(diags, "E_CP_SYNTAX_VALUE_OUT_OF_RANGE",
                               "edge " + std::to_string(e) + " is covered by " +
                                   std::to_string(used) + " face cycles, expected " +
                                   (expect_min == expect_max
                                        ? std::to_string(expect_min)
                                        : std::to_string(expect_min) + ".." +
                                              std::to_string(expect_max)),
                               {{"faulty_crease_ids", nlohmann::json::array({e})},
                                {"expected", expect_min}, {"got", used}});
                }
            }
        }
    }

    // Euler characteristic with the unbounded outer face counted.
    if (!cp.vertices_coords.empty() && !cp.edges_vertices.empty() &&
        !cp.faces_vertices.empty()) {
        const int euler = cp.vertex_count() - cp.edge_count() + cp.face_count() + 1;
        if (euler != 2) {
            push_error(diags, "E_CP_SYNTAX_VALUE_OUT_OF_RANGE",
                       "Euler characteristic violated: V - E + F = " + std::to_string(euler) +
                           ", expected 2 (outer face included)",
                       {{"expected", 2}, {"got", euler}});
        }
    }

    report.valid = !has_error(diags);
    return report;
}

}  // namespace cpforge
