#include "cpforge/foldability.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace cpforge {

using geom::Vec2;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double direction_angle(Vec2 from, Vec2 to) {
    return std::atan2(to.y - from.y, to.x - from.x);
}

double ccw_gap(double from, double to) {
    double g = to - from;
    while (g <= 0.0) g += kTwoPi;
    while (g > kTwoPi) g -= kTwoPi;
    return g;
}

bool in_ccw_interval(double theta, double start, double end) {
    const double span = ccw_gap(start, end);
    const double off = ccw_gap(start, theta);
    return off <= span + geom::kAngleEps;
}

struct Fan {
    std::vector<int> edges;    // incident edge ids sorted counterclockwise
    std::vector<double> dirs;  // matching direction angles
};

// Incident edges around `vertex`, sorted by direction. Returns nullopt and a
// diagnostic for degenerate (zero length) edges.
std::optional<Fan> incident_fan(const CreasePattern& cp, int vertex,
                                bool folded_only, std::optional<Diagnostic>& diag) {
    Fan fan;
    const Vec2 origin = cp.vertices_coords[static_cast<size_t>(vertex)];
    for (int e : cp.incident_edges(vertex)) {
        if (folded_only) {
            const Assignment a = cp.assignment_of(e);
            if (a != Assignment::M && a != Assignment::V) continue;
        }
        const Vec2 other = cp.vertices_coords[static_cast<size_t>(cp.other_endpoint(e, vertex))];
        if (geom::dist(origin, other) <= geom::kEps) {
            diag = Diagnostic(
                "E_GEOM_CREASE_PLACEMENT_INVALID",
                "crease " + std::to_string(e) + " has zero length at vertex " +
                    std::to_string(vertex),
                {{"faulty_crease_ids", nlohmann::json::array({e})}, {"vertex", vertex}});
            return std::nullopt;
        }
        fan.edges.push_back(e);
        fan.dirs.push_back(direction_angle(origin, other));
    }
    std::vector<size_t> order(fan.edges.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (fan.dirs[a] != fan.dirs[b]) return fan.dirs[a] < fan.dirs[b];
        return fan.edges[a] < fan.edges[b];
    });
    Fan sorted;
    for (size_t i : order) {
        sorted.edges.push_back(fan.edges[i]);
        sorted.dirs.push_back(fan.dirs[i]);
    }
    return sorted;
}

SectorResult sectors_from_fan(const CreasePattern& cp, int vertex, bool folded_only) {
    SectorResult result;
    auto fan = incident_fan(cp, vertex, folded_only, result.diagnostic);
    if (!fan) return result;

    SectorAngles sa;
    sa.vertex = vertex;
    sa.creases = fan->edges;
    const size_t n = fan->edges.size();
    if (n < 2) {
        if (n == 1) sa.angles.push_back(kTwoPi);
        result.sectors = std::move(sa);
        return result;
    }
    for (size_t i = 0; i < n; ++i) {
        sa.angles.push_back(ccw_gap(fan->dirs[i], fan->dirs[(i + 1) % n]));
    }

    if (!folded_only && cp.is_boundary_vertex(vertex)) {
        // Keep only the sectors covered by an incident face corner.
        std::vector<std::pair<double, double>> corners;  // (start, end) ccw
        const Vec2 origin = cp.vertices_coords[static_cast<size_t>(vertex)];
        for (int f = 0; f < cp.face_count(); ++f) {
            const auto& cycle = cp.faces_vertices[static_cast<size_t>(f)];
            for (size_t k = 0; k < cycle.size(); ++k) {
                if (cycle[k] != vertex) continue;
                const int prev = cycle[(k + cycle.size() - 1) % cycle.size()];
                const int next = cycle[(k + 1) % cycle.size()];
                corners.emplace_back(
                    direction_angle(origin, cp.vertices_coords[static_cast<size_t>(next)]),
                    direction_angle(origin, cp.vertices_coords[static_cast<size_t>(prev)]));
            }
        }
        SectorAngles kept;
        kept.vertex = vertex;
        for (size_t i = 0; i < n; ++i) {
            const double mid = fan->dirs[i] + 0.5 * sa.angles[i];
            const bool covered = std::any_of(corners.begin(), corners.end(), [&](auto c) {
                return in_ccw_interval(mid, c.first, c.second);
            });
            if (covered) {
                kept.creases.push_back(fan->edges[i]);
                kept.angles.push_back(sa.angles[i]);
            }
        }
        result.sectors = std::move(kept);
        return result;
    }

    result.sectors = std::move(sa);
    return result;
}

}  // namespace

SectorResult sector_angles(const CreasePattern& cp, int vertex) {
    return sectors_from_fan(cp, vertex, /*folded_only=*/false);
}

SectorResult folded_sector_angles(const CreasePattern& cp, int vertex) {
    return sectors_from_fan(cp, vertex, /*folded_only=*/true);
}

VertexFoldReport check_maekawa(const CreasePattern& cp, int vertex) {
    VertexFoldReport report;
    report.vertex = vertex;
    if (cp.is_boundary_vertex(vertex)) {
        report.applicable = false;
        return report;
    }
    for (int e : cp.incident_edges(vertex)) {
        const Assignment a = cp.assignment_of(e);
        if (a == Assignment::M) ++report.mountains;
        if (a == Assignment::V) ++report.valleys;
    }
    if (report.mountains + report.valleys == 0) {
        report.applicable = false;
        return report;
    }
    report.maekawa_ok = std::abs(report.mountains - report.valleys) == 2;
    return report;
}

VertexFoldReport check_kawasaki(const CreasePattern& cp, int vertex) {
    VertexFoldReport report;
    report.vertex = vertex;
    if (cp.is_boundary_vertex(vertex)) {
        report.applicable = false;
        return report;
    }
    const SectorResult sr = folded_sector_angles(cp, vertex);
    if (sr.diagnostic) {
        report.kawasaki_ok = false;
        report.diagnostic = sr.diagnostic;
        return report;
    }
    const auto& sa = *sr.sectors;
    if (sa.creases.empty()) {
        report.applicable = false;
        return report;
    }
    if (sa.creases.size() % 2 != 0) {
        report.kawasaki_ok = false;
        report.diagnostic = Diagnostic(
            "E_GEOM_ANGLE_CONSTRAINT_VIOLATION",
            "vertex " + std::to_string(vertex) + " has an odd number of folded creases",
            {{"vertex", vertex}, {"reason", "odd-degree"}});
        return report;
    }
    double even = 0.0, odd = 0.0;
    for (size_t i = 0; i < sa.angles.size(); ++i) {
        (i % 2 == 0 ? even : odd) += sa.angles[i];
    }
    report.alternating_sums = {even, odd};
    report.kawasaki_ok =
        std::abs(even - kPi) <= geom::kAngleEps && std::abs(odd - kPi) <= geom::kAngleEps;
    return report;
}

bool check_big_little_big(const CreasePattern& cp, int vertex) {
    const SectorResult sr = folded_sector_angles(cp, vertex);
    if (sr.diagnostic || !sr.sectors) return false;
    const auto& sa = *sr.sectors;
    const size_t n = sa.angles.size();
    if (n < 3) return true;
    for (size_t i = 0; i < n; ++i) {
        const double prev = sa.angles[(i + n - 1) % n];
        const double next = sa.angles[(i + 1) % n];
        const bool strict_min = sa.angles[i] < prev - geom::kAngleEps &&
                                sa.angles[i] < next - geom::kAngleEps;
        if (!strict_min) continue;
        const Assignment c1 = cp.assignment_of(sa.creases[i]);
        const Assignment c2 = cp.assignment_of(sa.creases[(i + 1) % n]);
        if (c1 == c2) return false;
    }
    return true;
}

std::vector<Diagnostic> check_flat_foldable_all(const CreasePattern& cp) {
    std::vector<Diagnostic> diags;
    for (int v = 0; v < cp.vertex_count(); ++v) {
        if (cp.is_boundary_vertex(v)) continue;
        const SectorResult sr = folded_sector_angles(cp, v);
        if (sr.diagnostic) {
            diags.push_back(*sr.diagnostic);
            continue;
        }
        const auto& sa = *sr.sectors;
        if (sa.creases.empty()) continue;

        std::string reason;
        const double total = std::accumulate(sa.angles.begin(), sa.angles.end(), 0.0);
        if (sa.creases.size() >= 2 && std::abs(total - kTwoPi) > 1e-5) {
            reason = "angle-sum";
        } else if (sa.creases.size() % 2 != 0) {
            reason = "odd-degree";
        } else if (!check_maekawa(cp, v).maekawa_ok) {
            reason = "maekawa";
        } else if (!check_kawasaki(cp, v).kawasaki_ok) {
            reason = "kawasaki";
        } else if (!check_big_little_big(cp, v)) {
            reason = "blb";
        }
        if (reason.empty()) continue;

        nlohmann::json conflicts = nlohmann::json::array();
        for (size_t i = 0; i < sa.creases.size(); ++i) {
            const double deg = (i < sa.angles.size() ? sa.angles[i] : 0.0) * 180.0 / kPi;
            conflicts.push_back(nlohmann::json::array(
                {sa.creases[i], geom::quantize(deg, 1e-6)}));
        }
        const Vec2 at = cp.vertices_coords[static_cast<size_t>(v)];
        diags.emplace_back(
            "E_GEOM_ANGLE_CONSTRAINT_VIOLATION",
            "vertex " + std::to_string(v) + " violates local flat-foldability (" + reason + ")",
            std::map<std::string, nlohmann::json>{
                {"vertex", v},
                {"reason", reason},
                {"conflicting_crease_ids_and_angles", conflicts},
                {"vertex_coordinates", nlohmann::json::array({at.x, at.y})}});
    }
    return diags;
}

namespace {

struct VertexState {
    std::vector<double> angles;
    std::vector<char> creases;  // 'M' or 'V'; sector i sits between creases i and i+1
};

std::string state_key(const VertexState& s) {
    std::string key;
    for (size_t i = 0; i < s.angles.size(); ++i) {
        key += s.creases[i];
        key += std::to_string(std::llround(s.angles[i] / geom::kAngleEps));
        key += '|';
    }
    return key;
}

bool crimp_search(const VertexState& s, std::map<std::string, bool>& memo) {
    const size_t n = s.angles.size();
    if (n == 2) {
        return std::abs(s.angles[0] - s.angles[1]) <= geom::kAngleEps &&
               s.creases[0] == s.creases[1];
    }
    if (n < 2 || n % 2 != 0) return false;
    const std::string key = state_key(s);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    memo[key] = false;  // guard against re-entry

    bool ok = false;
    for (size_t i = 0; i < n && !ok; ++i) {
        // Crimp sector i: fold away the local-minimum sector between two
        // oppositely assigned creases, merging it with its neighbors.
        const double a = s.angles[i];
        const double prev = s.angles[(i + n - 1) % n];
        const double next = s.angles[(i + 1) % n];
        if (a > prev + geom::kAngleEps || a > next + geom::kAngleEps) continue;
        if (s.creases[i] == s.creases[(i + 1) % n]) continue;

        VertexState reduced;
        const double merged = prev - a + next;
        for (size_t off = 0; off < n; ++off) {
            const size_t k = ((i + n - 1) % n + off) % n;
            if (off == 0) {
                reduced.creases.push_back(s.creases[k]);
                reduced.angles.push_back(merged);
            } else if (off >= 3) {
                reduced.creases.push_back(s.creases[k]);
                reduced.angles.push_back(s.angles[k]);
            }
        }
        if (crimp_search(reduced, memo)) ok = true;
    }
    memo[key] = ok;
    return ok;
}

bool maekawa_holds(const std::vector<Assignment>& creases) {
    int m = 0, v = 0;
    for (Assignment a : creases) {
        if (a == Assignment::M) ++m;
        else if (a == Assignment::V) ++v;
        else return false;
    }
    return std::abs(m - v) == 2;
}

bool kawasaki_alternating(const std::vector<double>& angles) {
    if (angles.size() % 2 != 0 || angles.size() < 2) return false;
    double even = 0.0, odd = 0.0;
    for (size_t i = 0; i < angles.size(); ++i) (i % 2 == 0 ? even : odd) += angles[i];
    return std::abs(even - kPi) <= geom::kAngleEps && std::abs(odd - kPi) <= geom::kAngleEps;
}

bool blb_holds(const std::vector<double>& angles, const std::vector<Assignment>& creases) {
    const size_t n = angles.size();
    if (n < 3) return true;
    for (size_t i = 0; i < n; ++i) {
        const double prev = angles[(i + n - 1) % n];
        const double next = angles[(i + 1) % n];
        if (angles[i] < prev - geom::kAngleEps && angles[i] < next - geom::kAngleEps &&
            creases[i] == creases[(i + 1) % n]) {
            return false;
        }
    }
    return true;
}

}  // namespace

bool single_vertex_folds_flat(const std::vector<double>& angles,
                              const std::vector<Assignment>& creases) {
    if (angles.size() != creases.size()) return false;
    if (!maekawa_holds(creases)) return false;
    if (!kawasaki_alternating(angles)) return false;
    if (!blb_holds(angles, creases)) return false;
    VertexState s;
    s.angles = angles;
    s.creases.reserve(creases.size());
    for (Assignment a : creases) s.creases.push_back(static_cast<char>(a));
    std::map<std::string, bool> memo;
    return crimp_search(s, memo);
}

int enumerate_mv_assignments(const SectorAngles& sectors) {
    const size_t n = sectors.creases.size();
    if (n > 16) {
        throw std::invalid_argument("enumerate_mv_assignments: more than 16 creases");
    }
    if (n == 0 || sectors.angles.size() != n) return 0;
    int count = 0;
    for (uint32_t mask = 0; mask < (1u << n); ++mask) {
        std::vector<Assignment> labeling(n);
        for (size_t i = 0; i < n; ++i) {
            labeling[i] = (mask >> i) & 1 ? Assignment::M : Assignment::V;
        }
        if (single_vertex_folds_flat(sectors.angles, labeling)) ++count;
    }
    return count;
}

}  // namespace cpforge
