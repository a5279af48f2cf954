#include "cpforge/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cpforge {

namespace {

const std::vector<std::string>& code_catalog() {
    static const std::vector<std::string> catalog = {
        // CSE
        "E_CP_SYNTAX_INVALID_PARAM_COUNT",
        "E_CP_SYNTAX_UNKNOWN_COMMAND",
        "E_CP_SYNTAX_INVALID_PARAM_TYPE",
        "E_CP_SYNTAX_VALUE_OUT_OF_RANGE",
        "E_CP_SYNTAX_UNEXPECTED_TOKEN",
        "E_CP_SYNTAX_MISSING_DELIMITER",
        "E_CP_SYNTAX_INVALID_LINE_REFERENCE",
        // GIF
        "E_GEOM_TOO_MANY_LAYERS",
        "E_GEOM_ANGLE_CONSTRAINT_VIOLATION",
        "E_GEOM_CREASE_PLACEMENT_INVALID",
        "E_GEOM_LENGTH_CONSTRAINT_VIOLATION",
        // PSI
        "E_PHYS_SELF_INTERSECTION",
        "E_PHYS_INTERSECTION_DURING_MOTION",
        "E_PHYS_BOUNDARY_VIOLATION",
        // AFS
        "E_AMBIGUOUS_STATE",
        "E_AMBIGUOUS_LAYER_ORDER",
        "E_AMBIGUOUS_TUCK_CHOICE",
        "E_AMBIGUOUS_MOUNTAIN_VALLEY_ASSIGNMENT",
    };
    return catalog;
}

const std::set<std::string, std::less<>>& param_vocabulary() {
    static const std::set<std::string, std::less<>> vocab = {
        "faulty_cp_code_line_numbers",
        "faulty_token_or_command",
        "faulty_crease_ids",
        "faulty_vertex_ids_or_point_coordinates",
        "problematic_coordinates_or_regions",
        "conflicting_crease_ids_and_angles",
        "max_allowable_layers",
        "calculated_layers_at_point",
        "intersecting_layer_ids",
        "intersecting_facet_ids",
        "penetration_depth",
        "ambiguous_crease_ids_or_vertex_ids",
        "number_of_possible_states",
        "suggested_disambiguation",
        // placeholders lifted from the catalog's message templates
        "line_number",
        "col_number",
        "command",
        "param_name",
        "expected_type",
        "actual_type",
        "value",
        "expected",
        "got",
        "min_val",
        "max_val",
        "line_id",
        "point_id",
        "crease_id",
        "vertex_id",
        "vertex",
        "reason",
        "theta_target",
        "vertex_coordinates",
        "layer_a_id",
        "layer_b_id",
        "facet_a_id",
        "facet_b_id",
    };
    return vocab;
}

}  // namespace

std::string_view to_string(Category c) {
    switch (c) {
        case Category::CSE: return "CSE";
        case Category::GIF: return "GIF";
        case Category::PSI: return "PSI";
        case Category::AFS: return "AFS";
    }
    return "CSE";
}

std::string_view to_string(Severity s) {
    switch (s) {
        case Severity::Error: return "error";
        case Severity::Warning: return "warning";
        case Severity::Note: return "note";
    }
    return "error";
}

bool is_known_code(std::string_view code) {
    const auto& cat = code_catalog();
    return std::find(cat.begin(), cat.end(), code) != cat.end();
}

Category category_of_code(std::string_view code) {
    if (code.rfind("E_CP_SYNTAX_", 0) == 0) return Category::CSE;
    if (code.rfind("E_GEOM_", 0) == 0) return Category::GIF;
    if (code.rfind("E_PHYS_", 0) == 0) return Category::PSI;
    if (code.rfind("E_AMBIGUOUS_", 0) == 0) return Category::AFS;
    throw std::invalid_argument("unknown diagnostic code prefix: " + std::string(code));
}

const std::vector<std::string>& all_codes() { return code_catalog(); }

bool is_documented_param(std::string_view key) {
    return param_vocabulary().count(key) > 0;
}

Diagnostic::Diagnostic(std::string code_, std::string message_,
                       std::map<std::string, nlohmann::json> params_, Severity severity_)
    : code(std::move(code_)), message(std::move(message_)),
      params(std::move(params_)), severity(severity_) {
    if (!is_known_code(code)) {
        throw std::invalid_argument("unknown diagnostic code: " + code);
    }
    for (const auto& [k, v] : params) {
        if (!is_documented_param(k)) {
            throw std::invalid_argument("undocumented diagnostic parameter: " + k);
        }
    }
    category = category_of_code(code);
}

namespace {

std::string param_value_text(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

}  // namespace

std::string render_diagnostic(const Diagnostic& d) {
    std::string out;
    out += to_string(d.category);
    out += '/';
    out += d.code;
    out += ": ";
    out += d.message;
    if (!d.params.empty()) {
        out += " {";
        bool first = true;
        for (const auto& [k, v] : d.params) {  // std::map iterates in key order
            if (!first) out += ", ";
            first = false;
            out += k;
            out += '=';
            out += param_value_text(v);
        }
        out += '}';
    }
    return out;
}

nlohmann::ordered_json diagnostic_to_json(const Diagnostic& d) {
    nlohmann::ordered_json j;
    j["category"] = std::string(to_string(d.category));
    j["code"] = d.code;
    j["severity"] = std::string(to_string(d.severity));
    j["message"] = d.message;
    nlohmann::ordered_json p = nlohmann::ordered_json::object();
    for (const auto& [k, v] : d.params) p[k] = v;
    j["params"] = std::move(p);
    j["rendered"] = render_diagnostic(d);
    return j;
}

Diagnostic diagnostic_from_json(const nlohmann::ordered_json& j) {
    std::map<std::string, nlohmann::json> params;
    if (j.contains("params")) {
        for (const auto& [k, v] : j.at("params").items()) params[k] = v;
    }
    Severity sev = Severity::Error;
    if (j.contains("severity")) {
        const std::string s = j.at("severity").get<std::string>();
        if (s == "warning") sev = Severity::Warning;
        else if (s == "note") sev = Severity::Note;
    }
    return Diagnostic(j.at("code").get<std::string>(), j.at("message").get<std::string>(),
                      std::move(params), sev);
}

bool has_error(const std::vector<Diagnostic>& ds) {
    return std::any_of(ds.begin(), ds.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

bool has_category(const std::vector<Diagnostic>& ds, Category c) {
    return std::any_of(ds.begin(), ds.end(), [c](const Diagnostic& d) {
        return d.category == c && d.severity == Severity::Error;
    });
}

}  // namespace cpforge
