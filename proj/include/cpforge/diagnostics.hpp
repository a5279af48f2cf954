#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace cpforge {

// The four diagnostic categories: syntax, geometry, physical, ambiguity.
enum class Category { CSE, GIF, PSI, AFS };

enum class Severity { Error, Warning, Note };

std::string_view to_string(Category c);
std::string_view to_string(Severity s);

// A single structured error/warning/note. Codes come from a fixed catalog;
// constructing a Diagnostic with an unknown code or an undocumented
// parameter key throws std::invalid_argument.
struct Diagnostic {
    Category category = Category::CSE;
    std::string code;
    std::string message;
    std::map<std::string, nlohmann::json> params;
    Severity severity = Severity::Error;

    Diagnostic() = default;
    Diagnostic(std::string code, std::string message,
               std::map<std::string, nlohmann::json> params = {},
               Severity severity = Severity::Error);

    bool operator==(const Diagnostic&) const = default;
};

// Catalog queries.
bool is_known_code(std::string_view code);
Category category_of_code(std::string_view code);
const std::vector<std::string>& all_codes();
bool is_documented_param(std::string_view key);

// One-line rendering: "CATEGORY/CODE: message {k1=v1, k2=v2}", params in
// sorted key order. Deterministic.
std::string render_diagnostic(const Diagnostic& d);

// Machine-readable record used by the session feedback protocol.
nlohmann::ordered_json diagnostic_to_json(const Diagnostic& d);
Diagnostic diagnostic_from_json(const nlohmann::ordered_json& j);

bool has_error(const std::vector<Diagnostic>& ds);
bool has_category(const std::vector<Diagnostic>& ds, Category c);

}  // namespace cpforge
