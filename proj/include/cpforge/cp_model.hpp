#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cpforge/diagnostics.hpp"
#include "cpforge/geometry.hpp"

namespace cpforge {

enum class Assignment : char { B = 'B', M = 'M', V = 'V', F = 'F', U = 'U' };

std::optional<Assignment> assignment_from_char(char c);

// A parsed crease pattern. Face cycles are counterclockwise.
// edges_assignment is either empty (document had none) or one entry per edge.
// Unknown top-level document keys are preserved in `extras` for round-trip.
struct CreasePattern {
    std::vector<geom::Vec2> vertices_coords;
    std::vector<std::pair<int, int>> edges_vertices;
    std::vector<Assignment> edges_assignment;
    std::vector<std::vector<int>> faces_vertices;
    std::vector<std::pair<std::string, nlohmann::json>> extras;

    int vertex_count() const { return static_cast<int>(vertices_coords.size()); }
    int edge_count() const { return static_cast<int>(edges_vertices.size()); }
    int face_count() const { return static_cast<int>(faces_vertices.size()); }
    bool has_assignments() const { return !edges_assignment.empty(); }

    Assignment assignment_of(int edge) const;
    geom::Polygon face_polygon(int face) const;
    // Incident edge ids, unsorted.
    std::vector<int> incident_edges(int vertex) const;
    int other_endpoint(int edge, int vertex) const;
    bool is_boundary_vertex(int vertex) const;

    bool operator==(const CreasePattern&) const = default;
};

struct ParseResult {
    std::optional<CreasePattern> cp;
    std::vector<Diagnostic> diagnostics;  // errors when !cp, otherwise notes
    bool ok() const { return cp.has_value(); }
};

// Parses a CP document. Total: never throws on malformed input; failures are
// CSE diagnostics. Clockwise face cycles are reoriented with a warning.
ParseResult parse_cp(std::string_view text);

// Canonical serialization: fixed key order, shortest round-trip numbers,
// UTF-8, newline-terminated. parse_cp(serialize_cp(cp)) == cp.
std::string serialize_cp(const CreasePattern& cp);

struct ValidationReport {
    bool valid = true;
    std::vector<Diagnostic> diagnostics;
};

nlohmann::ordered_json validation_report_to_json(const ValidationReport& r);

// Structural validation per the CP contract: field presence, coordinate
// finiteness, edge/face sanity, assignment alphabet, duplicate edges, face
// coverage of every edge, and the Euler characteristic V - E + (F+1) = 2.
// Reports every violated check.
ValidationReport validate_structure(const CreasePattern& cp);

}  // namespace cpforge
