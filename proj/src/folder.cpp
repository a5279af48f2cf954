#include "cpforge/folder.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

namespace cpforge {

using geom::PlanarIsometry;
using geom::Polygon;
using geom::Vec2;

std::string_view to_string(ConstraintKind k) {
    switch (k) {
        case ConstraintKind::TacoTaco: return "taco-taco";
        case ConstraintKind::TacoTortilla: return "taco-tortilla";
        case ConstraintKind::Transitivity: return "transitivity";
    }
    return "transitivity";
}

bool OverlapConstraint::operator<(const OverlapConstraint& o) const {
    auto key = [](const OverlapConstraint& c) {
        return std::make_tuple(static_cast<int>(c.kind), c.faces, c.edges,
                               std::llround(c.centroid.x * 1e6),
                               std::llround(c.centroid.y * 1e6),
                               std::llround(c.extent * 1e6));
    };
    return key(*this) < key(o);
}

namespace {

using EdgeKey = std::pair<int, int>;

EdgeKey edge_key(int a, int b) { return std::minmax(a, b); }

std::map<EdgeKey, int> edge_lookup(const CreasePattern& cp) {
    std::map<EdgeKey, int> lut;
    for (int e = 0; e < cp.edge_count(); ++e) {
        const auto& [a, b] = cp.edges_vertices[static_cast<size_t>(e)];
        lut[edge_key(a, b)] = e;
    }
    return lut;
}

// edge id -> face ids using it (from the face cycles).
std::map<int, std::vector<int>> edge_faces(const CreasePattern& cp) {
    const auto lut = edge_lookup(cp);
    std::map<int, std::vector<int>> ef;
    for (int f = 0; f < cp.face_count(); ++f) {
        const auto& cycle = cp.faces_vertices[static_cast<size_t>(f)];
        for (size_t k = 0; k < cycle.size(); ++k) {
            const auto it = lut.find(edge_key(cycle[k], cycle[(k + 1) % cycle.size()]));
            if (it != lut.end()) ef[it->second].push_back(f);
        }
    }
    return ef;
}

bool is_folded_assignment(Assignment a) {
    return a == Assignment::M || a == Assignment::V;
}

}  // namespace

TransformResult compute_face_transforms(const CreasePattern& cp) {
    TransformResult result;
    const int nf = cp.face_count();
    result.isometries.assign(static_cast<size_t>(nf), PlanarIsometry::identity());
    if (nf == 0) return result;

    const auto ef = edge_faces(cp);
    std::vector<bool> visited(static_cast<size_t>(nf), false);
    std::deque<int> queue;
    visited[0] = true;
    queue.push_back(0);

    auto crease_reflection = [&](int edge) {
        const auto& [a, b] = cp.edges_vertices[static_cast<size_t>(edge)];
        const Vec2 pa = cp.vertices_coords[static_cast<size_t>(a)];
        const Vec2 pb = cp.vertices_coords[static_cast<size_t>(b)];
        return geom::reflect_across(pa, pb - pa);
    };

    while (!queue.empty()) {
        const int f = queue.front();
        queue.pop_front();
        for (const auto& [edge, faces] : ef) {
            if (faces.size() != 2) continue;
            if (faces[0] != f && faces[1] != f) continue;
            const int g = faces[0] == f ? faces[1] : faces[0];
            PlanarIsometry step = result.isometries[static_cast<size_t>(f)];
            if (is_folded_assignment(cp.assignment_of(edge))) {
                step = step.compose(crease_reflection(edge));
            }
            if (!visited[static_cast<size_t>(g)]) {
                visited[static_cast<size_t>(g)] = true;
                result.isometries[static_cast<size_t>(g)] = step;
                queue.push_back(g);
            } else if (!result.isometries[static_cast<size_t>(g)].approx_equal(step, geom::kEps)) {
                result.diagnostics.emplace_back(
                    "E_GEOM_LENGTH_CONSTRAINT_VIOLATION",
                    "fold closure fails around crease " + std::to_string(edge) +
                        ": composed transforms disagree, the paper would need to stretch",
                    std::map<std::string, nlohmann::json>{
                        {"faulty_crease_ids", nlohmann::json::array({edge})}});
            }
        }
    }
    if (std::find(visited.begin(), visited.end(), false) != visited.end()) {
        result.diagnostics.emplace_back(
            "E_CP_SYNTAX_VALUE_OUT_OF_RANGE",
            "face-adjacency dual graph is disconnected; faces do not form one sheet",
            std::map<std::string, nlohmann::json>{});
    }
    return result;
}

namespace {

// Internal typed constraints shared by the solver and extract_constraints.
struct TypedConstraints {
    std::vector<std::pair<int, int>> forced_above;  // first above second
    struct Tto {
        int edge, f1, f2, tortilla;
        Vec2 mid;
        double len;
    };
    struct Tt {
        int e1, e2, a1, a2, b1, b2;
        Vec2 mid;
        double len;
    };
    std::vector<Tto> ttos;
    std::vector<Tt> tts;
};

struct FoldedGeometry {
    std::vector<Polygon> polys;  // CCW folded face images
    std::vector<int> parities;
    std::vector<geom::ArrangementCell> cells;
    std::set<std::pair<int, int>> overlapping;  // a < b
};

FoldedGeometry folded_geometry(const CreasePattern& cp,
                               const std::vector<PlanarIsometry>& isos) {
    FoldedGeometry g;
    for (int f = 0; f < cp.face_count(); ++f) {
        Polygon image;
        for (const Vec2 p : cp.face_polygon(f)) {
            image.push_back(isos[static_cast<size_t>(f)].apply(p));
        }
        if (isos[static_cast<size_t>(f)].parity < 0) std::reverse(image.begin(), image.end());
        g.polys.push_back(std::move(image));
        g.parities.push_back(isos[static_cast<size_t>(f)].parity);
    }
    g.cells = geom::arrange_polygons(g.polys);
    for (const auto& cell : g.cells) {
        for (size_t i = 0; i < cell.covering.size(); ++i) {
            for (size_t j = i + 1; j < cell.covering.size(); ++j) {
                g.overlapping.insert(edge_key(cell.covering[i], cell.covering[j]));
            }
        }
    }
    return g;
}

std::pair<Vec2, Vec2> folded_edge_segment(const CreasePattern& cp,
                                          const std::vector<PlanarIsometry>& isos,
                                          int edge, int face) {
    const auto& [a, b] = cp.edges_vertices[static_cast<size_t>(edge)];
    const PlanarIsometry& iso = isos[static_cast<size_t>(face)];
    return {iso.apply(cp.vertices_coords[static_cast<size_t>(a)]),
            iso.apply(cp.vertices_coords[static_cast<size_t>(b)])};
}

TypedConstraints collect_constraints(const CreasePattern& cp,
                                     const std::vector<PlanarIsometry>& isos,
                                     const FoldedGeometry& geo) {
    TypedConstraints tc;
    const auto ef = edge_faces(cp);

    // Forced order across folded creases: the reflected-parity face goes above
    // the base face for a valley, below for a mountain.
    for (const auto& [edge, faces] : ef) {
        if (faces.size() != 2 || !is_folded_assignment(cp.assignment_of(edge))) continue;
        const int f = faces[0], g = faces[1];
        if (geo.parities[static_cast<size_t>(f)] == geo.parities[static_cast<size_t>(g)]) continue;
        if (!geo.overlapping.count(edge_key(f, g))) continue;
        const int moving = geo.parities[static_cast<size_t>(f)] < 0 ? f : g;
        const int base = moving == f ? g : f;
        if (cp.assignment_of(edge) == Assignment::V) {
            tc.forced_above.emplace_back(moving, base);
        } else {
            tc.forced_above.emplace_back(base, moving);
        }
    }

    struct Crease {
        int edge, f1, f2;
        Vec2 p0, p1;
    };
    std::vector<Crease> creases;
    for (const auto& [edge, faces] : ef) {
        if (faces.size() != 2 || !is_folded_assignment(cp.assignment_of(edge))) continue;
        const auto [p0, p1] = folded_edge_segment(cp, isos, edge, std::min(faces[0], faces[1]));
        creases.push_back({edge, std::min(faces[0], faces[1]),
                           std::max(faces[0], faces[1]), p0, p1});
    }

    // Taco-taco: two folded creases overlapping along a positive-length
    // collinear segment, four distinct mutually overlapping faces.
    for (size_t i = 0; i < creases.size(); ++i) {
        for (size_t j = i + 1; j < creases.size(); ++j) {
            const Crease& c1 = creases[i];
            const Crease& c2 = creases[j];
            const std::set<int> faces = {c1.f1, c1.f2, c2.f1, c2.f2};
            if (faces.size() != 4) continue;
            const Vec2 d1 = c1.p1 - c1.p0;
            const double len1 = geom::norm(d1);
            if (len1 <= geom::kEps) continue;
            if (std::abs(geom::cross(c2.p0 - c1.p0, d1)) > geom::kEps * std::max(1.0, len1) ||
                std::abs(geom::cross(c2.p1 - c1.p0, d1)) > geom::kEps * std::max(1.0, len1)) {
                continue;
            }
            const double t0 = geom::dot(c2.p0 - c1.p0, d1) / (len1 * len1);
            const double t1 = geom::dot(c2.p1 - c1.p0, d1) / (len1 * len1);
            const double lo = std::max(0.0, std::min(t0, t1));
            const double hi = std::min(1.0, std::max(t0, t1));
            if ((hi - lo) * len1 <= geom::kEps) continue;
            bool all_overlap = true;
            for (const int a : {c1.f1, c1.f2}) {
                for (const int b : {c2.f1, c2.f2}) {
                    if (!geo.overlapping.count(edge_key(a, b))) all_overlap = false;
                }
            }
            if (!all_overlap) continue;
            const Vec2 mid = c1.p0 + d1 * (0.5 * (lo + hi));
            tc.tts.push_back({c1.edge, c2.edge, c1.f1, c1.f2, c2.f1, c2.f2, mid,
                              (hi - lo) * len1});
        }
    }

    // Taco-tortilla: a folded crease crossing the interior of a third face.
    for (const Crease& c : creases) {
        for (int g = 0; g < cp.face_count(); ++g) {
            if (g == c.f1 || g == c.f2) continue;
            const auto clipped =
                geom::clip_segment_to_polygon(c.p0, c.p1, geo.polys[static_cast<size_t>(g)]);
            if (!clipped) continue;
            const Vec2 mid = {(clipped->first.x + clipped->second.x) / 2.0,
                              (clipped->first.y + clipped->second.y) / 2.0};
            tc.ttos.push_back({c.edge, c.f1, c.f2, g, mid,
                               geom::dist(clipped->first, clipped->second)});
        }
    }
    return tc;
}

LayerOrderProblem build_layer_problem(int face_count, const FoldedGeometry& geo,
                                      const TypedConstraints& tc) {
    LayerOrderProblem p;
    p.face_count = face_count;
    for (const auto& pr : geo.overlapping) p.pairs.push_back(pr);
    std::sort(p.pairs.begin(), p.pairs.end());
    std::set<std::pair<int, int>> forced(tc.forced_above.begin(), tc.forced_above.end());
    p.forced_above.assign(forced.begin(), forced.end());
    std::set<std::array<int, 3>> triples;
    for (const auto& cell : geo.cells) {
        const auto& cov = cell.covering;
        for (size_t i = 0; i < cov.size(); ++i) {
            for (size_t j = i + 1; j < cov.size(); ++j) {
                for (size_t k = j + 1; k < cov.size(); ++k) {
                    std::array<int, 3> t = {cov[i], cov[j], cov[k]};
                    std::sort(t.begin(), t.end());
                    triples.insert(t);
                }
            }
        }
    }
    p.triples.assign(triples.begin(), triples.end());
    std::set<std::array<int, 4>> tts;
    for (const auto& t : tc.tts) tts.insert({t.a1, t.a2, t.b1, t.b2});
    p.tacotacos.assign(tts.begin(), tts.end());
    std::set<std::array<int, 3>> ttos;
    for (const auto& t : tc.ttos) ttos.insert({t.f1, t.f2, t.tortilla});
    p.tacotortillas.assign(ttos.begin(), ttos.end());
    return p;
}

// Pairwise above/below solver: unit propagation over transitivity,
// taco-tortilla and taco-taco rules plus global acyclicity, then
// backtracking; enumeration stops at two solutions.
class LayerSolver {
public:
    explicit LayerSolver(const LayerOrderProblem& p) : p_(p) {
        for (size_t i = 0; i < p_.pairs.size(); ++i) {
            pair_index_[p_.pairs[i]] = static_cast<int>(i);
        }
    }

    LayerSolution solve() {
        LayerSolution out;
        std::vector<int> val(p_.pairs.size(), 0);
        bool root_ok = true;
        for (const auto& [a, b] : p_.forced_above) {
            if (!set_above(val, a, b)) {
                root_ok = false;
                break;
            }
        }
        if (root_ok) root_ok = propagate(val);
        if (!root_ok) {
            out.verdict = LayerVerdict::Unsatisfiable;
            out.conflict_faces = conflict_faces_;
            return out;
        }
        search(val, out);
        if (out.solutions_found == 0) {
            out.verdict = LayerVerdict::Unsatisfiable;
            out.conflict_faces = conflict_faces_;
        } else if (out.solutions_found == 1) {
            out.verdict = LayerVerdict::Unique;
        } else {
            out.verdict = LayerVerdict::Ambiguous;
            for (size_t i = 0; i < solutions_[0].size(); ++i) {
                if (solutions_[0][i] != solutions_[1][i]) {
                    out.ambiguous_pair = p_.pairs[i];
                    break;
                }
            }
        }
        if (!solutions_.empty()) out.above = to_matrix(solutions_[0]);
        return out;
    }

    std::vector<std::vector<int>> to_matrix(const std::vector<int>& val) const {
        std::vector<std::vector<int>> m(static_cast<size_t>(p_.face_count),
                                        std::vector<int>(static_cast<size_t>(p_.face_count), -1));
        for (size_t i = 0; i < p_.pairs.size(); ++i) {
            const auto [a, b] = p_.pairs[i];
            if (val[i] == 1) {
                m[static_cast<size_t>(a)][static_cast<size_t>(b)] = 1;
                m[static_cast<size_t>(b)][static_cast<size_t>(a)] = 0;
            } else if (val[i] == 2) {
                m[static_cast<size_t>(a)][static_cast<size_t>(b)] = 0;
                m[static_cast<size_t>(b)][static_cast<size_t>(a)] = 1;
            }
        }
        return m;
    }

private:
    // 1: x above y, 0: x below y, -1: unknown, -2: never comparable.
    int relation(const std::vector<int>& val, int x, int y) const {
        const auto it = pair_index_.find(edge_key(x, y));
        if (it == pair_index_.end()) return -2;
        const int v = val[static_cast<size_t>(it->second)];
        if (v == 0) return -1;
        const bool first_above = v == 1;
        return (x < y) == first_above ? 1 : 0;
    }

    bool set_above(std::vector<int>& val, int x, int y) {
        const auto it = pair_index_.find(edge_key(x, y));
        if (it == pair_index_.end()) return true;
        const int want = (x < y) ? 1 : 2;
        int& slot = val[static_cast<size_t>(it->second)];
        if (slot == 0) {
            slot = want;
            dirty_ = true;
            return true;
        }
        return slot == want;
    }

    bool propagate(std::vector<int>& val) {
        dirty_ = true;
        while (dirty_) {
            dirty_ = false;
            for (const auto& [a, b, c] : p_.triples) {
                const std::array<std::array<int, 3>, 6> combos = {
                    std::array<int, 3>{a, b, c}, std::array<int, 3>{b, c, a},
                    std::array<int, 3>{c, a, b}, std::array<int, 3>{b, a, c},
                    std::array<int, 3>{a, c, b}, std::array<int, 3>{c, b, a}};
                for (const auto& combo : combos) {
                    const int x = combo[0], y = combo[1], z = combo[2];
                    if (relation(val, x, y) == 1 && relation(val, y, z) == 1) {
                        if (!set_above(val, x, z)) return conflict({x, y, z});
                    }
                }
            }
            for (const auto& t : p_.tacotortillas) {
                const int f1 = t[0], f2 = t[1], g = t[2];
                const int r1 = relation(val, f1, g);
                const int r2 = relation(val, f2, g);
                if (r1 == 1 && r2 == 0) return conflict({f1, f2, g});
                if (r1 == 0 && r2 == 1) return conflict({f1, f2, g});
                if (r1 == 1 && !set_above(val, f2, g)) return conflict({f1, f2, g});
                if (r1 == 0 && !set_above(val, g, f2)) return conflict({f1, f2, g});
                if (r2 == 1 && !set_above(val, f1, g)) return conflict({f1, f2, g});
                if (r2 == 0 && !set_above(val, g, f1)) return conflict({f1, f2, g});
            }
            for (const auto& t : p_.tacotacos) {
                if (!tt_satisfiable(val, t)) return conflict({t[0], t[1], t[2], t[3]});
            }
            if (!acyclic(val)) return false;
        }
        return true;
    }

    bool tt_satisfiable(const std::vector<int>& val, const std::array<int, 4>& t) {
        const int a1 = t[0], a2 = t[1], b1 = t[2], b2 = t[3];
        for (const int x : {a1, a2, b1, b2}) {
            for (const int y : {a1, a2, b1, b2}) {
                if (x < y && relation(val, x, y) == -1) return true;  // still open
            }
        }
        auto between = [&](int x, int u, int v) {
            return (relation(val, u, x) == 1 && relation(val, x, v) == 1) ||
                   (relation(val, v, x) == 1 && relation(val, x, u) == 1);
        };
        const bool in1 = between(b1, a1, a2);
        const bool in2 = between(b2, a1, a2);
        return in1 == in2;
    }

    bool acyclic(const std::vector<int>& val) {
        std::vector<std::vector<int>> adj(static_cast<size_t>(p_.face_count));
        for (size_t i = 0; i < p_.pairs.size(); ++i) {
            const auto [a, b] = p_.pairs[i];
            if (val[i] == 1) adj[static_cast<size_t>(a)].push_back(b);
            if (val[i] == 2) adj[static_cast<size_t>(b)].push_back(a);
        }
        std::vector<int> color(static_cast<size_t>(p_.face_count), 0);
        std::vector<int> stack;
        for (int s = 0; s < p_.face_count; ++s) {
            if (color[static_cast<size_t>(s)] != 0) continue;
            if (!dfs_cycle(s, adj, color, stack)) return false;
        }
        return true;
    }

    bool dfs_cycle(int u, const std::vector<std::vector<int>>& adj, std::vector<int>& color,
                   std::vector<int>& stack) {
        color[static_cast<size_t>(u)] = 1;
        stack.push_back(u);
        for (int v : adj[static_cast<size_t>(u)]) {
            if (color[static_cast<size_t>(v)] == 1) {
                if (conflict_faces_.empty()) {
                    auto it = std::find(stack.begin(), stack.end(), v);
                    for (; it != stack.end(); ++it) conflict_faces_.push_back(*it);
                }
                return false;
            }
            if (color[static_cast<size_t>(v)] == 0 && !dfs_cycle(v, adj, color, stack)) {
                return false;
            }
        }
        stack.pop_back();
        color[static_cast<size_t>(u)] = 2;
        return true;
    }

    bool conflict(std::vector<int> faces) {
        std::sort(faces.begin(), faces.end());
        if (conflict_faces_.empty()) conflict_faces_ = std::move(faces);
        return false;
    }

    void search(std::vector<int>& val, LayerSolution& out) {
        if (static_cast<int>(solutions_.size()) >= 2) return;
        int branch = -1;
        for (size_t i = 0; i < val.size(); ++i) {
            if (val[i] == 0) {
                branch = static_cast<int>(i);
                break;
            }
        }
        if (branch < 0) {
            solutions_.push_back(val);
            out.solutions_found = static_cast<int>(solutions_.size());
            return;
        }
        for (const int choice : {1, 2}) {
            std::vector<int> next = val;
            next[static_cast<size_t>(branch)] = choice;
            if (propagate(next)) search(next, out);
            if (static_cast<int>(solutions_.size()) >= 2) return;
        }
    }

    const LayerOrderProblem& p_;
    std::map<std::pair<int, int>, int> pair_index_;
    bool dirty_ = false;
    std::vector<int> conflict_faces_;
    std::vector<std::vector<int>> solutions_;
};

std::vector<int> compute_levels(int nfaces, const std::vector<std::vector<int>>& above) {
    // level = length of the longest descending chain strictly below the face.
    std::vector<int> level(static_cast<size_t>(nfaces), -1);
    std::vector<int> visiting(static_cast<size_t>(nfaces), 0);
    auto rec = [&](auto&& self, int f) -> int {
        if (level[static_cast<size_t>(f)] >= 0) return level[static_cast<size_t>(f)];
        if (visiting[static_cast<size_t>(f)]) return 0;  // guarded by acyclicity
        visiting[static_cast<size_t>(f)] = 1;
        int best = 0;
        for (int g = 0; g < nfaces; ++g) {
            if (above[static_cast<size_t>(f)][static_cast<size_t>(g)] == 1) {
                best = std::max(best, self(self, g) + 1);
            }
        }
        visiting[static_cast<size_t>(f)] = 0;
        level[static_cast<size_t>(f)] = best;
        return best;
    };
    for (int f = 0; f < nfaces; ++f) rec(rec, f);
    return level;
}

int mapping_face_of_vertex(const CreasePattern& cp, int vertex) {
    for (int f = 0; f < cp.face_count(); ++f) {
        const auto& cycle = cp.faces_vertices[static_cast<size_t>(f)];
        if (std::find(cycle.begin(), cycle.end(), vertex) != cycle.end()) return f;
    }
    return -1;
}

FoldedState assemble_base_state(const CreasePattern& cp,
                                const std::vector<PlanarIsometry>& isos,
                                const FoldedGeometry& geo) {
    FoldedState st;
    st.face_isometries = isos;
    for (int v = 0; v < cp.vertex_count(); ++v) {
        const int f = mapping_face_of_vertex(cp, v);
        const Vec2 p = f >= 0 ? isos[static_cast<size_t>(f)].apply(
                                    cp.vertices_coords[static_cast<size_t>(v)])
                              : cp.vertices_coords[static_cast<size_t>(v)];
        st.points.push_back({p.x, p.y, 0.0});
    }
    for (int e = 0; e < cp.edge_count(); ++e) {
        if (cp.assignment_of(e) == Assignment::B) continue;
        const auto& [a, b] = cp.edges_vertices[static_cast<size_t>(e)];
        st.segments.push_back({a, b, e});
    }
    for (const auto& cell : geo.cells) {
        st.cells.push_back({cell.outline, cell.covering});
    }
    st.face_levels.assign(static_cast<size_t>(cp.face_count()), 0);
    st.above.assign(static_cast<size_t>(cp.face_count()),
                    std::vector<int>(static_cast<size_t>(cp.face_count()), -1));
    return st;
}

}  // namespace

std::vector<OverlapConstraint> extract_constraints(const CreasePattern& cp,
                                                   const FoldedState& state) {
    FoldedGeometry geo = folded_geometry(cp, state.face_isometries);
    const TypedConstraints tc = collect_constraints(cp, state.face_isometries, geo);

    std::vector<OverlapConstraint> out;
    for (const auto& t : tc.tts) {
        OverlapConstraint c;
        c.kind = ConstraintKind::TacoTaco;
        c.faces = {t.a1, t.a2, t.b1, t.b2};
        std::sort(c.faces.begin(), c.faces.end());
        c.edges = {std::min(t.e1, t.e2), std::max(t.e1, t.e2)};
        c.centroid = {geom::quantize(t.mid.x, 1e-6), geom::quantize(t.mid.y, 1e-6)};
        c.extent = geom::quantize(t.len, 1e-6);
        out.push_back(std::move(c));
    }
    for (const auto& t : tc.ttos) {
        OverlapConstraint c;
        c.kind = ConstraintKind::TacoTortilla;
        c.faces = {t.f1, t.f2, t.tortilla};
        std::sort(c.faces.begin(), c.faces.end());
        c.edges = {t.edge};
        c.centroid = {geom::quantize(t.mid.x, 1e-6), geom::quantize(t.mid.y, 1e-6)};
        c.extent = geom::quantize(t.len, 1e-6);
        out.push_back(std::move(c));
    }
    for (const auto& cell : geo.cells) {
        const auto& cov = cell.covering;
        if (cov.size() < 3) continue;
        const Vec2 mid = geom::centroid(cell.outline);
        const double area = std::abs(geom::signed_area(cell.outline));
        for (size_t i = 0; i < cov.size(); ++i) {
            for (size_t j = i + 1; j < cov.size(); ++j) {
                for (size_t k = j + 1; k < cov.size(); ++k) {
                    OverlapConstraint c;
                    c.kind = ConstraintKind::Transitivity;
                    c.faces = {cov[i], cov[j], cov[k]};
                    c.centroid = {geom::quantize(mid.x, 1e-6), geom::quantize(mid.y, 1e-6)};
                    c.extent = geom::quantize(area, 1e-6);
                    out.push_back(std::move(c));
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::optional<LayerOrderProblem> build_layer_order_problem(const CreasePattern& cp) {
    TransformResult tr = compute_face_transforms(cp);
    if (!tr.ok()) return std::nullopt;
    FoldedGeometry geo = folded_geometry(cp, tr.isometries);
    const TypedConstraints tc = collect_constraints(cp, tr.isometries, geo);
    return build_layer_problem(cp.face_count(), geo, tc);
}

LayerSolution solve_layer_order(const LayerOrderProblem& p) {
    LayerSolver solver(p);
    return solver.solve();
}

bool layer_order_satisfies(const LayerOrderProblem& p,
                           const std::vector<std::vector<int>>& above) {
    auto rel = [&](int x, int y) {
        return above[static_cast<size_t>(x)][static_cast<size_t>(y)];
    };
    for (const auto& [a, b] : p.forced_above) {
        if (rel(a, b) != 1) return false;
    }
    for (const auto& t : p.triples) {
        const int ab = rel(t[0], t[1]), bc = rel(t[1], t[2]), ca = rel(t[2], t[0]);
        if (ab < 0 || bc < 0 || ca < 0) return false;  // must be total on a cell
        if (ab == 1 && bc == 1 && ca == 1) return false;
        if (ab == 0 && bc == 0 && ca == 0) return false;
    }
    for (const auto& t : p.tacotortillas) {
        const int r1 = rel(t[0], t[2]), r2 = rel(t[1], t[2]);
        if (r1 < 0 || r2 < 0) return false;
        if (r1 != r2) return false;
    }
    for (const auto& t : p.tacotacos) {
        auto between = [&](int x, int u, int v) {
            return (rel(u, x) == 1 && rel(x, v) == 1) || (rel(v, x) == 1 && rel(x, u) == 1);
        };
        for (const int x : {t[0], t[1], t[2], t[3]}) {
            for (const int y : {t[0], t[1], t[2], t[3]}) {
                if (x < y && rel(x, y) < 0) return false;
            }
        }
        if (between(t[2], t[0], t[1]) != between(t[3], t[0], t[1])) return false;
    }
    // Global acyclicity.
    std::vector<std::vector<int>> adj(static_cast<size_t>(p.face_count));
    for (const auto& [a, b] : p.pairs) {
        if (rel(a, b) == 1) adj[static_cast<size_t>(a)].push_back(b);
        else if (rel(a, b) == 0) adj[static_cast<size_t>(b)].push_back(a);
        else return false;  // every overlapping pair must be ordered
    }
    std::vector<int> color(static_cast<size_t>(p.face_count), 0);
    auto dfs = [&](auto&& self, int u) -> bool {
        color[static_cast<size_t>(u)] = 1;
        for (int v : adj[static_cast<size_t>(u)]) {
            if (color[static_cast<size_t>(v)] == 1) return false;
            if (color[static_cast<size_t>(v)] == 0 && !self(self, v)) return false;
        }
        color[static_cast<size_t>(u)] = 2;
        return true;
    };
    for (int s = 0; s < p.face_count; ++s) {
        if (color[static_cast<size_t>(s)] == 0 && !dfs(dfs, s)) return false;
    }
    return true;
}

FoldResult fold(const CreasePattern& cp, const FoldConfig& config) {
    FoldResult result;

    const ValidationReport vr = validate_structure(cp);
    if (!vr.valid) {
        result.diagnostics = vr.diagnostics;
        return result;
    }

    // Ambiguity gate: unassigned interior creases do not determine a fold.
    const auto ef = edge_faces(cp);
    std::vector<int> unassigned;
    for (int e = 0; e < cp.edge_count(); ++e) {
        const bool interior = ef.count(e) && ef.at(e).size() == 2;
        if (!interior) continue;  // U on the boundary is tolerated as B
        if (!cp.has_assignments() || cp.assignment_of(e) == Assignment::U) {
            unassigned.push_back(e);
        }
    }
    if (!unassigned.empty()) {
        if (config.auto_complete_mv && unassigned.size() <= 12) {
            FoldConfig sub = config;
            sub.auto_complete_mv = false;
            FoldResult first_attempt;
            bool have_first = false;
            for (uint32_t mask = 0; mask < (1u << unassigned.size()); ++mask) {
                CreasePattern candidate = cp;
                if (!candidate.has_assignments()) {
                    candidate.edges_assignment.assign(
                        static_cast<size_t>(candidate.edge_count()), Assignment::B);
                    for (const auto& [e, faces] : ef) {
                        if (faces.size() == 2) {
                            candidate.edges_assignment[static_cast<size_t>(e)] = Assignment::U;
                        }
                    }
                }
                for (size_t i = 0; i < unassigned.size(); ++i) {
                    candidate.edges_assignment[static_cast<size_t>(unassigned[i])] =
                        (mask >> i) & 1 ? Assignment::V : Assignment::M;
                }
                FoldResult attempt = fold(candidate, sub);
                if (attempt.ok()) return attempt;
                if (!have_first) {
                    first_attempt = std::move(attempt);
                    have_first = true;
                }
            }
            return first_attempt;
        }
        result.diagnostics.emplace_back(
            "E_AMBIGUOUS_MOUNTAIN_VALLEY_ASSIGNMENT",
            "crease " + std::to_string(unassigned.front()) +
                " has no mountain/valley assignment; multiple folded forms are possible",
            std::map<std::string, nlohmann::json>{
                {"crease_id", unassigned.front()},
                {"ambiguous_crease_ids_or_vertex_ids", nlohmann::json(unassigned)},
                {"suggested_disambiguation",
                 "assign M or V to the listed creases or enable automatic completion"}});
        return result;
    }

    const auto gif = check_flat_foldable_all(cp);
    if (!gif.empty()) {
        result.diagnostics = gif;
        return result;
    }

    TransformResult tr = compute_face_transforms(cp);
    if (!tr.ok()) {
        result.diagnostics = tr.diagnostics;
        return result;
    }

    FoldedGeometry geo = folded_geometry(cp, tr.isometries);
    FoldedState base = assemble_base_state(cp, tr.isometries, geo);

    for (const auto& cell : geo.cells) {
        if (static_cast<int>(cell.covering.size()) > config.layer_cap) {
            const Vec2 at = geom::centroid(cell.outline);
            result.diagnostics.emplace_back(
                "E_GEOM_TOO_MANY_LAYERS",
                "folding near (" + geom::format_double(geom::quantize(at.x, 1e-6)) + ", " +
                    geom::format_double(geom::quantize(at.y, 1e-6)) + ") stacks " +
                    std::to_string(cell.covering.size()) + " layers, exceeding the limit of " +
                    std::to_string(config.layer_cap),
                std::map<std::string, nlohmann::json>{
                    {"max_allowable_layers", config.layer_cap},
                    {"calculated_layers_at_point", static_cast<int>(cell.covering.size())},
                    {"problematic_coordinates_or_regions",
                     nlohmann::json::array({at.x, at.y})}});
            result.partial = std::move(base);
            return result;
        }
    }

    const TypedConstraints tc = collect_constraints(cp, tr.isometries, geo);
    const LayerOrderProblem problem = build_layer_problem(cp.face_count(), geo, tc);
    const LayerSolution solution = solve_layer_order(problem);

    if (solution.verdict == LayerVerdict::Unsatisfiable) {
        result.diagnostics.emplace_back(
            "E_PHYS_SELF_INTERSECTION",
            "no layer ordering satisfies the stacking constraints; the listed facets "
            "would penetrate each other",
            std::map<std::string, nlohmann::json>{
                {"intersecting_facet_ids", nlohmann::json(solution.conflict_faces)}});
        result.partial = std::move(base);
        return result;
    }
    if (solution.verdict == LayerVerdict::Ambiguous) {
        result.diagnostics.emplace_back(
            "E_AMBIGUOUS_LAYER_ORDER",
            "insufficient constraints to determine the stacking order of facets " +
                std::to_string(solution.ambiguous_pair.first) + " and " +
                std::to_string(solution.ambiguous_pair.second) + "; at least two valid orders",
            std::map<std::string, nlohmann::json>{
                {"layer_a_id", solution.ambiguous_pair.first},
                {"layer_b_id", solution.ambiguous_pair.second},
                {"number_of_possible_states", solution.solutions_found},
                {"suggested_disambiguation",
                 "add a layer-order constraint or adjust crease assignments"}});
        result.partial = std::move(base);
        return result;
    }

    FoldedState st = std::move(base);
    st.above = solution.above;
    st.face_levels = compute_levels(cp.face_count(), st.above);
    for (int v = 0; v < cp.vertex_count(); ++v) {
        const int f = mapping_face_of_vertex(cp, v);
        if (f >= 0) st.points[static_cast<size_t>(v)][2] = st.face_levels[static_cast<size_t>(f)];
    }
    for (auto& cell : st.cells) {
        std::sort(cell.faces.begin(), cell.faces.end(), [&](int a, int b) {
            const int r = st.above[static_cast<size_t>(a)][static_cast<size_t>(b)];
            if (r == 1) return true;
            if (r == 0) return false;
            return st.face_levels[static_cast<size_t>(a)] > st.face_levels[static_cast<size_t>(b)];
        });
    }
    st.constraints = extract_constraints(cp, st);
    result.state = std::move(st);
    return result;
}

std::vector<double> dihedral_angles(const CreasePattern& cp, const FoldedState& state) {
    std::vector<double> out;
    const auto ef = edge_faces(cp);
    for (int e = 0; e < cp.edge_count(); ++e) {
        if (cp.assignment_of(e) == Assignment::B) continue;
        const auto it = ef.find(e);
        if (it == ef.end() || it->second.size() != 2) continue;
        const int pa = state.face_isometries[static_cast<size_t>(it->second[0])].parity;
        const int pb = state.face_isometries[static_cast<size_t>(it->second[1])].parity;
        out.push_back(pa == pb ? 180.0 : 0.0);
    }
    return out;
}

nlohmann::ordered_json folded_state_to_json(const CreasePattern& cp, const FoldedState& state) {
    (void)cp;
    nlohmann::ordered_json j;
    nlohmann::ordered_json p = nlohmann::ordered_json::array();
    for (const auto& pt : state.points) {
        p.push_back(nlohmann::ordered_json::array({pt[0], pt[1], pt[2]}));
    }
    j["P"] = std::move(p);
    nlohmann::ordered_json sp = nlohmann::ordered_json::array();
    for (const auto& s : state.segments) {
        sp.push_back(nlohmann::ordered_json::array({s.v0, s.v1, s.source_edge}));
    }
    j["SP"] = std::move(sp);
    nlohmann::ordered_json cf = nlohmann::ordered_json::array();
    for (const auto& cell : state.cells) {
        nlohmann::ordered_json c;
        nlohmann::ordered_json poly = nlohmann::ordered_json::array();
        for (const auto& pt : cell.outline) {
            poly.push_back(nlohmann::ordered_json::array({pt.x, pt.y}));
        }
        c["polygon"] = std::move(poly);
        c["faces"] = cell.faces;
        cf.push_back(std::move(c));
    }
    j["CF"] = std::move(cf);
    return j;
}

}  // namespace cpforge
