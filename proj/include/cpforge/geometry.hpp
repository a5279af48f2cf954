#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cpforge::geom {

// Global tolerances: point coincidence and angles (radians).
inline constexpr double kEps = 1e-9;
inline constexpr double kAngleEps = 1e-6;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Vec2&) const = default;
};

double dot(Vec2 a, Vec2 b);
double cross(Vec2 a, Vec2 b);
double norm(Vec2 a);
double dist(Vec2 a, Vec2 b);

// Rigid motion of the plane: p -> linear * p + translation. parity caches the
// determinant sign of the (orthogonal) linear part.
struct PlanarIsometry {
    // Row-major 2x2.
    std::array<double, 4> linear = {1.0, 0.0, 0.0, 1.0};
    Vec2 translation = {0.0, 0.0};
    int parity = 1;

    Vec2 apply(Vec2 p) const {
        return {linear[0] * p.x + linear[1] * p.y + translation.x,
                linear[2] * p.x + linear[3] * p.y + translation.y};
    }

    static PlanarIsometry identity() { return {}; }
    // this ∘ other (apply other first).
    PlanarIsometry compose(const PlanarIsometry& other) const;
    bool approx_equal(const PlanarIsometry& other, double tol = kEps) const;
    bool is_orthogonal(double tol = kEps) const;
};

// Reflection across the line through `point` with direction `dir`.
// Throws std::invalid_argument on zero direction.
PlanarIsometry reflect_across(Vec2 point, Vec2 dir);

using Polygon = std::vector<Vec2>;

double signed_area(const Polygon& poly);
Vec2 centroid(const Polygon& poly);
bool is_simple_polygon(const Polygon& poly);
// Strictly inside; points within kEps of the boundary count as not inside.
bool point_strictly_inside(const Polygon& poly, Vec2 p);
// A point guaranteed to lie in the interior of a simple CCW polygon.
Vec2 interior_point(const Polygon& poly);

// Area of intersection of two simple CCW polygons. Shared boundaries count
// as zero. Throws std::invalid_argument on self-intersecting input.
double polygon_overlap(const Polygon& a, const Polygon& b);

// Clip segment [a,b] against a simple CCW polygon; returns the sub-segment
// inside (nullopt when the inside portion has length <= kEps).
std::optional<std::pair<Vec2, Vec2>> clip_segment_to_polygon(Vec2 a, Vec2 b,
                                                             const Polygon& poly);

// Planar straight-line graph with snapping; grows by inserting segments and
// splitting at intersections. Face extraction walks half-edges keeping the
// interior on the left; the outer face (negative area) is dropped.
class PlanarSubdivision {
public:
    explicit PlanarSubdivision(double snap = kEps) : snap_(snap) {}

    int add_point(Vec2 p);
    void add_segment(Vec2 a, Vec2 b);

    const std::vector<Vec2>& points() const { return points_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    // Bounded faces as CCW vertex cycles.
    std::vector<std::vector<int>> bounded_faces() const;

private:
    int find_point(Vec2 p) const;
    void insert_edge(int a, int b);

    double snap_;
    std::vector<Vec2> points_;
    std::vector<std::pair<int, int>> edges_;
};

// One cell of the arrangement of a set of polygons: the cell outline plus the
// indices of the input polygons covering its interior.
struct ArrangementCell {
    Polygon outline;
    std::vector<int> covering;
};

// Overlay a set of simple polygons and report every bounded cell covered by
// at least one of them.
std::vector<ArrangementCell> arrange_polygons(const std::vector<Polygon>& polys);

// Shortest decimal form that round-trips through double.
std::string format_double(double v);

// Quantize to a multiple of `step` (used for canonical constraint footprints).
double quantize(double v, double step);

}  // namespace cpforge::geom
