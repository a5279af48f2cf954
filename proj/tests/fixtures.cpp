#include "fixtures.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cpforge::fixtures {

using geom::Polygon;
using geom::Vec2;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

bool on_segment(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 d = b - a;
    const double len2 = geom::dot(d, d);
    if (len2 <= geom::kEps) return false;
    const double t = geom::dot(p - a, d) / len2;
    if (t < -geom::kEps || t > 1.0 + geom::kEps) return false;
    const Vec2 proj = a + d * t;
    return geom::dist(p, proj) <= 1e-7;
}

// Ray from the square center at bearing degrees to the unit-square boundary.
Vec2 square_boundary_hit(double bearing_deg) {
    const Vec2 c{0.5, 0.5};
    const Vec2 d{std::cos(bearing_deg * kDeg), std::sin(bearing_deg * kDeg)};
    double best = 1e30;
    for (const auto& [a, b] : {std::pair<Vec2, Vec2>{{0, 0}, {1, 0}},
                               std::pair<Vec2, Vec2>{{1, 0}, {1, 1}},
                               std::pair<Vec2, Vec2>{{1, 1}, {0, 1}},
                               std::pair<Vec2, Vec2>{{0, 1}, {0, 0}}}) {
        const Vec2 e = b - a;
        const double denom = geom::cross(d, e);
        if (std::abs(denom) < 1e-12) continue;
        const double t = geom::cross(a - c, e) / denom;
        const double s = geom::cross(a - c, d) / denom;
        if (t > 1e-9 && s > -1e-9 && s < 1.0 + 1e-9) best = std::min(best, t);
    }
    return c + d * best;
}

}  // namespace

CreasePattern build_cp(const Polygon& boundary, const std::vector<CreaseSpec>& creases) {
    geom::PlanarSubdivision sub;
    const size_t n = boundary.size();
    for (size_t i = 0; i < n; ++i) {
        sub.add_segment(boundary[i], boundary[(i + 1) % n]);
    }
    for (const auto& c : creases) sub.add_segment(c.a, c.b);

    CreasePattern cp;
    cp.vertices_coords = sub.points();
    for (const auto& [u, v] : sub.edges()) {
        cp.edges_vertices.emplace_back(u, v);
        const Vec2 mid = (sub.points()[static_cast<size_t>(u)] +
                          sub.points()[static_cast<size_t>(v)]) * 0.5;
        Assignment assign = Assignment::B;
        bool matched = false;
        for (const auto& c : creases) {
            if (on_segment(mid, c.a, c.b)) {
                assign = c.assign;
                matched = true;
                break;
            }
        }
        if (!matched) {
            bool on_boundary = false;
            for (size_t i = 0; i < n; ++i) {
                if (on_segment(mid, boundary[i], boundary[(i + 1) % n])) on_boundary = true;
            }
            if (!on_boundary) throw std::runtime_error("fixture edge matches no input segment");
        }
        cp.edges_assignment.push_back(assign);
    }
    cp.faces_vertices = sub.bounded_faces();
    return cp;
}

CreasePattern unit_square() {
    return build_cp({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {});
}

CreasePattern square_with_diagonal(Assignment a) {
    return build_cp({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{{0, 0}, {1, 1}, a}});
}

CreasePattern half_fold_vertical(Assignment a) {
    return build_cp({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{{0.5, 0}, {0.5, 1}, a}});
}

CreasePattern half_fold_horizontal(Assignment a) {
    return build_cp({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{{0, 0.5}, {1, 0.5}, a}});
}

CreasePattern accordion(int panels, const std::vector<Assignment>& pattern) {
    std::vector<CreaseSpec> creases;
    for (int i = 1; i < panels; ++i) {
        const double x = static_cast<double>(i) / panels;
        creases.push_back({{x, 0}, {x, 1}, pattern[static_cast<size_t>(i - 1)]});
    }
    return build_cp({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, creases);
}

CreasePattern center_vertex(const std::vector<double>& bearings_deg,
                            const std::vector<Assignment>& assigns) {
    std::vector<CreaseSpec> creases;
    for (size_t i = 0; i < bearings_deg.size(); ++i) {
        creases.push_back({{0.5, 0.5}, square_boundary_hit(bearings_deg[i]), assigns[i]});
    }
    return build_cp({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, creases);
}

CreasePattern plus_vertex(const std::vector<Assignment>& assigns) {
    return center_vertex({0, 90, 180, 270}, assigns);
}

CreasePattern gate_fold(Assignment a) {
    return build_cp({{0, 0}, {1, 0}, {1, 1}, {0, 1}},
                    {{{0.25, 0}, {0.25, 1}, a}, {{0.75, 0}, {0.75, 1}, a}});
}

CreasePattern two_flap_ambiguous() {
    // Two doors folded over the middle: images overlap on [0.4, 0.6] but
    // neither covers the other's hinge, so their mutual order is free.
    return build_cp({{0, 0}, {1, 0}, {1, 1}, {0, 1}},
                    {{{0.3, 0}, {0.3, 1}, Assignment::V},
                     {{0.7, 0}, {0.7, 1}, Assignment::V}});
}

CreasePattern crossing_flaps() {
    // Opposite corners folded past each other's hinge line: each flap would
    // have to pierce the other's fold seam.
    return build_cp({{0, 0}, {1, 0}, {1, 1}, {0, 1}},
                    {{{0.75, 0}, {0, 0.75}, Assignment::V},
                     {{0.25, 1}, {1, 0.25}, Assignment::V}});
}

CreasePattern asym_fold() {
    // Valley at 0.5 then mountain at 0.75: the second crease folds onto the
    // interior of the base panel (one taco-tortilla).
    return build_cp({{0, 0}, {1, 0}, {1, 1}, {0, 1}},
                    {{{0.5, 0}, {0.5, 1}, Assignment::V},
                     {{0.75, 0}, {0.75, 1}, Assignment::M}});
}

CreasePattern unfoldable_vertex() {
    // Sectors [100, 80, 80, 100]: VMMM passes Maekawa, Kawasaki and BLB yet
    // admits no flat stack (no crimp sequence exists).
    return center_vertex({0, 100, 180, 260},
                         {Assignment::V, Assignment::M, Assignment::M, Assignment::M});
}

CreasePattern flat_plus() {
    return plus_vertex({Assignment::F, Assignment::F, Assignment::F, Assignment::F});
}

CreasePattern maekawa_violation() {
    return plus_vertex({Assignment::M, Assignment::M, Assignment::V, Assignment::V});
}

CreasePattern kawasaki_violation() {
    // Sectors [90, 90, 100, 80]; alternating sums 190 vs 170 degrees.
    return center_vertex({0, 90, 180, 280},
                         {Assignment::M, Assignment::M, Assignment::M, Assignment::V});
}

CreasePattern blb_violation() {
    // Sectors [100, 30, 50, 100, 30, 50]; both alternating sums are 180 but
    // the strict-minimum 30-degree sector is bounded by two mountains.
    return center_vertex({0, 100, 130, 180, 280, 310},
                         {Assignment::M, Assignment::M, Assignment::M, Assignment::V,
                          Assignment::M, Assignment::V});
}

CreasePattern dangling_edge() {
    CreasePattern cp = unit_square();
    // Split the bottom edge and hang an interior edge off the new vertex:
    // Euler still holds (V=6, E=6, F=1) but the edge is covered by no face.
    cp.vertices_coords.push_back({0.5, 0.0});
    cp.vertices_coords.push_back({0.5, 0.5});
    const int mid = 4, tip = 5;
    // Bottom edge was (0,1); replace with two halves plus the dangler.
    for (size_t e = 0; e < cp.edges_vertices.size(); ++e) {
        const auto [a, b] = cp.edges_vertices[e];
        if ((a == 0 && b == 1) || (a == 1 && b == 0)) {
            cp.edges_vertices[e] = {0, mid};
            cp.edges_vertices.emplace_back(mid, 1);
            cp.edges_assignment.push_back(Assignment::B);
            break;
        }
    }
    cp.edges_vertices.emplace_back(mid, tip);
    cp.edges_assignment.push_back(Assignment::M);
    // Patch the face cycle to walk through the split vertex.
    for (auto& cycle : cp.faces_vertices) {
        std::vector<int> patched;
        for (size_t i = 0; i < cycle.size(); ++i) {
            patched.push_back(cycle[i]);
            const int next = cycle[(i + 1) % cycle.size()];
            if ((cycle[i] == 0 && next == 1) || (cycle[i] == 1 && next == 0)) {
                patched.push_back(mid);
            }
        }
        cycle = patched;
    }
    return cp;
}

const std::vector<std::pair<std::string, CreasePattern>>& golden_corpus() {
    static const std::vector<std::pair<std::string, CreasePattern>> corpus = [] {
        std::vector<std::pair<std::string, CreasePattern>> out;
        using A = Assignment;
        out.emplace_back("half_v_valley", half_fold_vertical(A::V));
        out.emplace_back("half_v_mountain", half_fold_vertical(A::M));
        out.emplace_back("half_h_valley", half_fold_horizontal(A::V));
        out.emplace_back("half_h_mountain", half_fold_horizontal(A::M));
        out.emplace_back("diag_valley", square_with_diagonal(A::V));
        out.emplace_back("diag_mountain", square_with_diagonal(A::M));
        out.emplace_back("accordion3_mv", accordion(3, {A::M, A::V}));
        out.emplace_back("accordion3_vm", accordion(3, {A::V, A::M}));
        out.emplace_back("accordion4_mvm", accordion(4, {A::M, A::V, A::M}));
        out.emplace_back("accordion4_vmv", accordion(4, {A::V, A::M, A::V}));
        out.emplace_back("accordion5_mvmv", accordion(5, {A::M, A::V, A::M, A::V}));
        out.emplace_back("accordion5_vmvm", accordion(5, {A::V, A::M, A::V, A::M}));
        out.emplace_back("gate_valley", gate_fold(A::V));
        out.emplace_back("gate_mountain", gate_fold(A::M));
        out.emplace_back("asym_fold", asym_fold());
        const std::vector<std::vector<A>> plus_patterns = {
            {A::M, A::M, A::M, A::V}, {A::M, A::M, A::V, A::M},
            {A::M, A::V, A::M, A::M}, {A::V, A::M, A::M, A::M},
            {A::V, A::V, A::V, A::M}, {A::V, A::V, A::M, A::V},
            {A::V, A::M, A::V, A::V}, {A::M, A::V, A::V, A::V}};
        for (size_t i = 0; i < plus_patterns.size(); ++i) {
            out.emplace_back("plus_" + std::to_string(i), plus_vertex(plus_patterns[i]));
        }
        const std::vector<std::vector<A>> skew_patterns = {
            {A::M, A::M, A::V, A::M}, {A::M, A::M, A::M, A::V},
            {A::M, A::V, A::M, A::M}, {A::V, A::V, A::M, A::V},
            {A::V, A::V, A::V, A::M}, {A::V, A::M, A::V, A::V}};
        for (size_t i = 0; i < skew_patterns.size(); ++i) {
            out.emplace_back("skew_" + std::to_string(i),
                             center_vertex({0, 100, 180, 260}, skew_patterns[i]));
        }
        return out;
    }();
    return corpus;
}

}  // namespace cpforge::fixtures
