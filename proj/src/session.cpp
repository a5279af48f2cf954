#include "cpforge/session.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "cpforge/folder.hpp"

namespace cpforge {

using geom::Vec2;

std::string_view to_string(ActionType t) {
    switch (t) {
        case ActionType::AddCrease: return "add_crease";
        case ActionType::RemoveCrease: return "remove_crease";
        case ActionType::SetAssignment: return "set_assignment";
        case ActionType::Compile: return "compile";
        case ActionType::Finish: return "finish";
    }
    return "compile";
}

double compute_reward(std::optional<double> prev_partial, double new_partial,
                      bool compile_ok, const SessionConfig& config) {
    if (!compile_ok) return -config.p_fail - config.c_step;
    const double prev = prev_partial.value_or(0.0);
    return (new_partial - prev) + config.b_success - config.c_step;
}

namespace {

struct Seg {
    Vec2 a, b;
    Assignment assign;
};

bool midpoint_on(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 d = b - a;
    const double len2 = geom::dot(d, d);
    if (len2 <= geom::kEps) return false;
    const double t = geom::dot(p - a, d) / len2;
    if (t < -geom::kEps || t > 1.0 + geom::kEps) return false;
    const Vec2 proj = a + d * t;
    return geom::dist(p, proj) <= 1e-7;
}

// Re-subdivides the segment soup and re-extracts faces; assignments carry
// over by midpoint containment, earlier segments taking precedence.
CreasePattern rebuild_cp(const std::vector<Seg>& segments) {
    geom::PlanarSubdivision sub;
    for (const Seg& s : segments) sub.add_segment(s.a, s.b);
    CreasePattern cp;
    cp.vertices_coords = sub.points();
    for (const auto& [u, v] : sub.edges()) {
        cp.edges_vertices.emplace_back(u, v);
        const Vec2 mid = (sub.points()[static_cast<size_t>(u)] +
                          sub.points()[static_cast<size_t>(v)]) * 0.5;
        Assignment assign = Assignment::U;
        for (const Seg& s : segments) {
            if (midpoint_on(mid, s.a, s.b)) {
                assign = s.assign;
                break;
            }
        }
        cp.edges_assignment.push_back(assign);
    }
    cp.faces_vertices = sub.bounded_faces();
    return cp;
}

std::vector<Seg> cp_segments(const CreasePattern& cp) {
    std::vector<Seg> segs;
    for (int e = 0; e < cp.edge_count(); ++e) {
        const auto& [a, b] = cp.edges_vertices[static_cast<size_t>(e)];
        segs.push_back({cp.vertices_coords[static_cast<size_t>(a)],
                        cp.vertices_coords[static_cast<size_t>(b)], cp.assignment_of(e)});
    }
    return segs;
}

// The sheet outline: boundary edges chained into a polygon.
std::optional<geom::Polygon> boundary_polygon(const CreasePattern& cp) {
    std::map<int, std::vector<std::pair<int, int>>> next;  // vertex -> (other, edge)
    int start = -1;
    for (int e = 0; e < cp.edge_count(); ++e) {
        if (cp.assignment_of(e) != Assignment::B) continue;
        const auto& [a, b] = cp.edges_vertices[static_cast<size_t>(e)];
        next[a].push_back({b, e});
        next[b].push_back({a, e});
        if (start < 0) start = a;
    }
    if (start < 0) return std::nullopt;
    geom::Polygon poly;
    std::set<int> used;
    int cur = start, prev = -1;
    for (size_t guard = 0; guard <= next.size() + 1; ++guard) {
        poly.push_back(cp.vertices_coords[static_cast<size_t>(cur)]);
        const auto it = next.find(cur);
        if (it == next.end() || it->second.size() != 2) return std::nullopt;
        int chosen = -1;
        for (const auto& [other, edge] : it->second) {
            if (other != prev || it->second[0].first == it->second[1].first) {
                chosen = other;
            }
        }
        if (it->second[0].first == prev) chosen = it->second[1].first;
        else chosen = it->second[0].first;
        prev = cur;
        cur = chosen;
        if (cur == start) break;
    }
    if (cur != start || poly.size() < 3) return std::nullopt;
    if (geom::signed_area(poly) < 0) std::reverse(poly.begin(), poly.end());
    return poly;
}

}  // namespace

SessionCreateResult Session::create(CreasePattern reference, SessionConfig config) {
    SessionCreateResult result;
    const ValidationReport vr = validate_structure(reference);
    if (!vr.valid) {
        result.diagnostics = vr.diagnostics;
        return result;
    }
    FoldResult fr = fold(reference, config.eval.fold);
    if (!fr.ok()) {
        result.diagnostics = fr.diagnostics;
        return result;
    }
    // Bare sheet: the reference boundary only.
    std::vector<Seg> boundary;
    for (const Seg& s : cp_segments(reference)) {
        if (s.assign == Assignment::B) boundary.push_back(s);
    }
    CreasePattern draft = rebuild_cp(boundary);
    for (auto& a : draft.edges_assignment) a = Assignment::B;
    result.session = Session(std::move(draft), std::move(reference), std::move(config));
    return result;
}

Feedback Session::edit_feedback(const Action& action, std::vector<Diagnostic> diagnostics) {
    Feedback fb;
    fb.diagnostics = std::move(diagnostics);
    fb.reward = -config_.c_step;
    finish_round(std::string(to_string(action.type)), fb.reward, fb.diagnostics.empty());
    fb.rounds_remaining = config_.round_cap - round_;
    fb.done = done_;
    return fb;
}

void Session::finish_round(const std::string& action, double reward, bool ok) {
    ++round_;
    ledger_.push_back({round_, action, reward, ok});
    if (round_ >= config_.round_cap) done_ = true;
}

Feedback Session::apply(const Action& action) {
    if (done_) {
        Feedback fb;
        fb.done = true;
        fb.rounds_remaining = 0;
        fb.diagnostics.emplace_back(
            "E_CP_SYNTAX_UNKNOWN_COMMAND",
            "session is finished; no further actions are accepted",
            std::map<std::string, nlohmann::json>{
                {"command", std::string(to_string(action.type))}});
        return fb;
    }

    switch (action.type) {
        case ActionType::AddCrease: {
            const auto sheet = boundary_polygon(draft_);
            if (!sheet) {
                return edit_feedback(action, {Diagnostic(
                    "E_GEOM_CREASE_PLACEMENT_INVALID",
                    "draft has no closed boundary to place creases in")});
            }
            const auto clipped = geom::clip_segment_to_polygon(action.a, action.b, *sheet);
            if (!clipped) {
                return edit_feedback(action, {Diagnostic(
                    "E_GEOM_CREASE_PLACEMENT_INVALID",
                    "crease lies outside the sheet or along its boundary",
                    {{"problematic_coordinates_or_regions",
                      nlohmann::json::array({action.a.x, action.a.y, action.b.x, action.b.y})}})});
            }
            std::vector<Seg> segs = cp_segments(draft_);
            segs.push_back({clipped->first, clipped->second, action.assign});
            draft_ = rebuild_cp(segs);
            return edit_feedback(action, {});
        }
        case ActionType::RemoveCrease: {
            if (action.edge < 0 || action.edge >= draft_.edge_count()) {
                return edit_feedback(action, {Diagnostic(
                    "E_CP_SYNTAX_INVALID_LINE_REFERENCE",
                    "remove_crease references nonexistent edge " + std::to_string(action.edge),
                    {{"line_id", action.edge}})});
            }
            if (draft_.assignment_of(action.edge) == Assignment::B) {
                return edit_feedback(action, {Diagnostic(
                    "E_GEOM_CREASE_PLACEMENT_INVALID",
                    "boundary edges cannot be removed",
                    {{"faulty_crease_ids", nlohmann::json::array({action.edge})}})});
            }
            // Drop the edge, cascade away dangling interior chains, rebuild.
            std::vector<std::pair<std::pair<int, int>, Assignment>> edges;
            for (int e = 0; e < draft_.edge_count(); ++e) {
                if (e == action.edge) continue;
                edges.push_back({draft_.edges_vertices[static_cast<size_t>(e)],
                                 draft_.assignment_of(e)});
            }
            bool changed = true;
            while (changed) {
                changed = false;
                std::map<int, int> degree;
                for (const auto& [ev, a] : edges) {
                    ++degree[ev.first];
                    ++degree[ev.second];
                }
                for (size_t i = 0; i < edges.size(); ++i) {
                    if (edges[i].second == Assignment::B) continue;
                    if (degree[edges[i].first.first] < 2 || degree[edges[i].first.second] < 2) {
                        edges.erase(edges.begin() + static_cast<long>(i));
                        changed = true;
                        break;
                    }
                }
            }
            std::vector<Seg> segs;
            for (const auto& [ev, a] : edges) {
                segs.push_back({draft_.vertices_coords[static_cast<size_t>(ev.first)],
                                draft_.vertices_coords[static_cast<size_t>(ev.second)], a});
            }
            draft_ = rebuild_cp(segs);
            return edit_feedback(action, {});
        }
        case ActionType::SetAssignment: {
            if (action.edge < 0 || action.edge >= draft_.edge_count()) {
                return edit_feedback(action, {Diagnostic(
                    "E_CP_SYNTAX_INVALID_LINE_REFERENCE",
                    "set_assignment references nonexistent edge " + std::to_string(action.edge),
                    {{"line_id", action.edge}})});
            }
            const bool was_boundary = draft_.assignment_of(action.edge) == Assignment::B;
            const bool to_boundary = action.assign == Assignment::B;
            if (was_boundary != to_boundary) {
                return edit_feedback(action, {Diagnostic(
                    "E_CP_SYNTAX_VALUE_OUT_OF_RANGE",
                    "boundary and interior assignments cannot be exchanged",
                    {{"faulty_crease_ids", nlohmann::json::array({action.edge})}})});
            }
            draft_.edges_assignment[static_cast<size_t>(action.edge)] = action.assign;
            return edit_feedback(action, {});
        }
        case ActionType::Compile: {
            Feedback fb;
            const ValidationReport vr = validate_structure(draft_);
            bool ok = vr.valid;
            fb.diagnostics = vr.diagnostics;
            if (ok) {
                FoldResult fr = fold(draft_, config_.eval.fold);
                ok = fr.ok();
                fb.diagnostics.insert(fb.diagnostics.end(), fr.diagnostics.begin(),
                                      fr.diagnostics.end());
            }
            const ScoreReport partial = score_total(draft_, reference_, config_.eval);
            fb.partial_score = partial.total;
            fb.reward = compute_reward(prev_partial_, partial.total, ok, config_);
            prev_partial_ = partial.total;
            finish_round("compile", fb.reward, ok);
            fb.rounds_remaining = config_.round_cap - round_;
            fb.done = done_;
            return fb;
        }
        case ActionType::Finish: {
            Feedback fb;
            done_ = true;
            const FinalResult fin = final_score();
            fb.partial_score = fin.reward;
            fb.reward = fin.reward;
            finish_round("finish", fb.reward, true);
            done_ = true;
            fb.rounds_remaining = config_.round_cap - round_;
            fb.done = true;
            return fb;
        }
    }
    return {};
}

Session::FinalResult Session::final_score() const {
    FinalResult out;
    out.report = score_total(draft_, reference_, config_.eval);
    out.reward = out.report.total;
    return out;
}

ActionParse action_from_json(const nlohmann::ordered_json& j) {
    ActionParse out;
    if (!j.is_object() || !j.contains("action") || !j.at("action").is_string()) {
        out.error = "request must be an object with an \"action\" string";
        return out;
    }
    const std::string name = j.at("action").get<std::string>();
    Action a;
    if (j.contains("note") && j.at("note").is_string()) a.note = j.at("note").get<std::string>();
    if (name == "add_crease") {
        a.type = ActionType::AddCrease;
        if (!j.contains("segment") || !j.at("segment").is_array() ||
            j.at("segment").size() != 2) {
            out.error = "add_crease needs \"segment\": [[x1,y1],[x2,y2]]";
            return out;
        }
        const auto& seg = j.at("segment");
        if (!seg[0].is_array() || seg[0].size() != 2 || !seg[1].is_array() ||
            seg[1].size() != 2) {
            out.error = "add_crease segment endpoints must be [x, y] pairs";
            return out;
        }
        a.a = {seg[0][0].get<double>(), seg[0][1].get<double>()};
        a.b = {seg[1][0].get<double>(), seg[1][1].get<double>()};
        std::string code = j.value("assignment", "U");
        const auto assign = code.size() == 1 ? assignment_from_char(code[0]) : std::nullopt;
        if (!assign || *assign == Assignment::B) {
            out.error = "add_crease assignment must be one of M, V, F, U";
            return out;
        }
        a.assign = *assign;
    } else if (name == "remove_crease") {
        a.type = ActionType::RemoveCrease;
        if (!j.contains("edge") || !j.at("edge").is_number_integer()) {
            out.error = "remove_crease needs an integer \"edge\"";
            return out;
        }
        a.edge = j.at("edge").get<int>();
    } else if (name == "set_assignment") {
        a.type = ActionType::SetAssignment;
        if (!j.contains("edge") || !j.at("edge").is_number_integer()) {
            out.error = "set_assignment needs an integer \"edge\"";
            return out;
        }
        a.edge = j.at("edge").get<int>();
        const std::string code = j.value("code", "");
        const auto assign = code.size() == 1 ? assignment_from_char(code[0]) : std::nullopt;
        if (!assign) {
            out.error = "set_assignment needs \"code\" in {B, M, V, F, U}";
            return out;
        }
        a.assign = *assign;
    } else if (name == "compile") {
        a.type = ActionType::Compile;
    } else if (name == "finish") {
        a.type = ActionType::Finish;
    } else {
        out.error = "unknown action \"" + name + "\"";
        return out;
    }
    out.action = a;
    return out;
}

nlohmann::ordered_json action_to_json(const Action& a) {
    nlohmann::ordered_json j;
    j["action"] = std::string(to_string(a.type));
    switch (a.type) {
        case ActionType::AddCrease:
            j["segment"] = nlohmann::ordered_json::array(
                {nlohmann::ordered_json::array({a.a.x, a.a.y}),
                 nlohmann::ordered_json::array({a.b.x, a.b.y})});
            j["assignment"] = std::string(1, static_cast<char>(a.assign));
            break;
        case ActionType::RemoveCrease:
            j["edge"] = a.edge;
            break;
        case ActionType::SetAssignment:
            j["edge"] = a.edge;
            j["code"] = std::string(1, static_cast<char>(a.assign));
            break;
        default:
            break;
    }
    if (!a.note.empty()) j["note"] = a.note;
    return j;
}

nlohmann::ordered_json feedback_to_json(const Feedback& f) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json ds = nlohmann::ordered_json::array();
    for (const auto& d : f.diagnostics) ds.push_back(diagnostic_to_json(d));
    j["diagnostics"] = std::move(ds);
    if (f.partial_score) j["partial_score"] = *f.partial_score;
    j["reward"] = f.reward;
    j["rounds_remaining"] = f.rounds_remaining;
    j["done"] = f.done;
    return j;
}

}  // namespace cpforge
