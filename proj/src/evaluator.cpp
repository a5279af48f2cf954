#include "cpforge/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cpforge/foldability.hpp"

namespace cpforge {

double wasserstein_1d(const std::vector<double>& h1, const std::vector<double>& h2) {
    if (h1.size() != h2.size()) {
        throw std::invalid_argument("wasserstein_1d: histogram bin counts differ");
    }
    const size_t n = h1.size();
    if (n == 0) throw std::invalid_argument("wasserstein_1d: empty histograms");
    if (n == 1) return 0.0;
    auto normalized = [n](const std::vector<double>& h) {
        double sum = 0.0;
        for (double v : h) sum += v;
        std::vector<double> out(n);
        for (size_t i = 0; i < n; ++i) {
            out[i] = sum > 0.0 ? h[i] / sum : 1.0 / static_cast<double>(n);
        }
        return out;
    };
    const std::vector<double> a = normalized(h1);
    const std::vector<double> b = normalized(h2);
    double cdf_a = 0.0, cdf_b = 0.0, acc = 0.0;
    for (size_t i = 0; i < n; ++i) {
        cdf_a += a[i];
        cdf_b += b[i];
        acc += std::abs(cdf_a - cdf_b);
    }
    return std::clamp(acc / static_cast<double>(n - 1), 0.0, 1.0);
}

double hausdorff_bidirectional(const std::vector<std::array<double, 3>>& a,
                               const std::vector<std::array<double, 3>>& b) {
    if (a.empty() || b.empty()) {
        throw std::invalid_argument("hausdorff_bidirectional: empty point set");
    }
    auto directed = [](const std::vector<std::array<double, 3>>& from,
                       const std::vector<std::array<double, 3>>& to) {
        double worst = 0.0;
        for (const auto& p : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : to) {
                const double dx = p[0] - q[0], dy = p[1] - q[1], dz = p[2] - q[2];
                best = std::min(best, dx * dx + dy * dy + dz * dz);
            }
            worst = std::max(worst, best);
        }
        return std::sqrt(worst);
    };
    return std::max(directed(a, b), directed(b, a));
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    const size_t n = std::min(a.size(), b.size());
    for (size_t i = 0; i < n; ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na <= 0.0 || nb <= 0.0) return 0.0;
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

std::vector<std::array<double, 3>> normalize_points(std::vector<std::array<double, 3>> pts) {
    if (pts.empty()) return pts;
    std::array<double, 3> c = {0, 0, 0};
    for (const auto& p : pts) {
        for (int i = 0; i < 3; ++i) c[static_cast<size_t>(i)] += p[static_cast<size_t>(i)];
    }
    for (auto& v : c) v /= static_cast<double>(pts.size());
    double max_r = 0.0;
    for (auto& p : pts) {
        for (int i = 0; i < 3; ++i) p[static_cast<size_t>(i)] -= c[static_cast<size_t>(i)];
        max_r = std::max(max_r, std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]));
    }
    if (max_r > 1e-12) {
        for (auto& p : pts) {
            for (auto& v : p) v /= max_r;
        }
    }
    return pts;
}

namespace {

double exp_gap(double delta, double denom) {
    return std::exp(-std::abs(delta) / std::max(1.0, denom));
}

std::vector<double> degree_histogram(const CreasePattern& cp, int support) {
    std::vector<double> hist(static_cast<size_t>(support + 1), 0.0);
    std::vector<int> degree(static_cast<size_t>(cp.vertex_count()), 0);
    for (const auto& [a, b] : cp.edges_vertices) {
        ++degree[static_cast<size_t>(a)];
        ++degree[static_cast<size_t>(b)];
    }
    for (int d : degree) {
        if (d <= support) ++hist[static_cast<size_t>(d)];
    }
    return hist;
}

int max_degree(const CreasePattern& cp) {
    std::vector<int> degree(static_cast<size_t>(cp.vertex_count()), 0);
    for (const auto& [a, b] : cp.edges_vertices) {
        ++degree[static_cast<size_t>(a)];
        ++degree[static_cast<size_t>(b)];
    }
    int m = 0;
    for (int d : degree) m = std::max(m, d);
    return m;
}

int connected_components(const CreasePattern& cp) {
    const int n = cp.vertex_count();
    std::vector<std::vector<int>> adj(static_cast<size_t>(n));
    for (const auto& [a, b] : cp.edges_vertices) {
        adj[static_cast<size_t>(a)].push_back(b);
        adj[static_cast<size_t>(b)].push_back(a);
    }
    std::vector<bool> seen(static_cast<size_t>(n), false);
    int components = 0;
    for (int s = 0; s < n; ++s) {
        if (seen[static_cast<size_t>(s)]) continue;
        ++components;
        std::vector<int> stack = {s};
        seen[static_cast<size_t>(s)] = true;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int v : adj[static_cast<size_t>(u)]) {
                if (!seen[static_cast<size_t>(v)]) {
                    seen[static_cast<size_t>(v)] = true;
                    stack.push_back(v);
                }
            }
        }
    }
    return components;
}

std::vector<double> face_size_histogram(const CreasePattern& cp, int support) {
    std::vector<double> hist(static_cast<size_t>(support + 1), 0.0);
    for (const auto& cycle : cp.faces_vertices) {
        const int s = static_cast<int>(cycle.size());
        if (s <= support) ++hist[static_cast<size_t>(s)];
    }
    return hist;
}

double average_face_arity(const CreasePattern& cp) {
    if (cp.faces_vertices.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& cycle : cp.faces_vertices) sum += static_cast<double>(cycle.size());
    return sum / static_cast<double>(cp.face_count());
}

bool kawasaki_everywhere(const CreasePattern& cp) {
    for (int v = 0; v < cp.vertex_count(); ++v) {
        const VertexFoldReport r = check_kawasaki(cp, v);
        if (r.applicable && !r.kawasaki_ok) return false;
    }
    return true;
}

bool maekawa_everywhere(const CreasePattern& cp) {
    for (int v = 0; v < cp.vertex_count(); ++v) {
        const VertexFoldReport r = check_maekawa(cp, v);
        if (r.applicable && !r.maekawa_ok) return false;
    }
    return true;
}

std::vector<double> angle_histogram(const std::vector<double>& degrees) {
    std::vector<double> hist(18, 0.0);
    for (double a : degrees) {
        const int bin = std::clamp(static_cast<int>(a / 10.0), 0, 17);
        ++hist[static_cast<size_t>(bin)];
    }
    return hist;
}

}  // namespace

SideState prepare_side(const CreasePattern& cp, const EvalConfig& config) {
    SideState side;
    const ValidationReport vr = validate_structure(cp);
    side.structure_valid = vr.valid;
    side.locally_foldable = vr.valid && check_flat_foldable_all(cp).empty();
    if (!vr.valid) {
        side.diagnostics = vr.diagnostics;
        return side;
    }
    FoldResult fr = fold(cp, config.fold);
    side.diagnostics = fr.diagnostics;
    if (fr.ok()) {
        side.folded = true;
        side.state = std::move(fr.state);
        side.points = side.state->points;
        side.dihedrals = dihedral_angles(cp, *side.state);
    } else {
        side.partial = std::move(fr.partial);
        side.simplified = true;
        for (const auto& p : cp.vertices_coords) side.points.push_back({p.x, p.y, 0.0});
    }
    return side;
}

TssReport score_topological(const CreasePattern& gen, const CreasePattern& ref) {
    TssReport r;
    // Vertex count.
    const int vg = gen.vertex_count(), vr = ref.vertex_count();
    if (vg == vr) {
        r.s_v = 1.0;
    } else if (std::min(vg, vr) == 0) {
        r.s_v = 0.0;
    } else {
        r.s_v = std::exp(-0.5 * static_cast<double>(std::max(vg, vr) - std::min(vg, vr)) /
                         static_cast<double>(std::min(vg, vr)));
    }
    // Edge connectivity.
    const int support = std::max(max_degree(gen), max_degree(ref));
    r.s_degree = 1.0 - wasserstein_1d(degree_histogram(gen, support),
                                      degree_histogram(ref, support));
    const int cg = connected_components(gen), cr = connected_components(ref);
    r.s_conn = cg == cr ? 1.0 : std::exp(-std::abs(cg - cr));
    r.s_edge = 0.7 * r.s_degree + 0.3 * r.s_conn;
    // Face relations.
    const int fg = gen.face_count(), fr = ref.face_count();
    r.s_fcount = exp_gap(fg - fr, std::min(fg, fr));
    const double ag = average_face_arity(gen), ar = average_face_arity(ref);
    r.s_favgv = exp_gap(ag - ar, std::min(ag, ar));
    const int fsupport = [&] {
        size_t m = 0;
        for (const auto& c : gen.faces_vertices) m = std::max(m, c.size());
        for (const auto& c : ref.faces_vertices) m = std::max(m, c.size());
        return static_cast<int>(m);
    }();
    r.s_fdist = 1.0 - wasserstein_1d(face_size_histogram(gen, fsupport),
                                     face_size_histogram(ref, fsupport));
    r.s_face = 0.3 * r.s_fcount + 0.3 * r.s_favgv + 0.4 * r.s_fdist;
    // Crease assignment distribution.
    if (!gen.has_assignments() || !ref.has_assignments()) {
        r.s_crease = kLowScore;
    } else {
        auto proportions = [](const CreasePattern& cp) {
            double m = 0, v = 0, b = 0;
            for (Assignment a : cp.edges_assignment) {
                if (a == Assignment::M) ++m;
                if (a == Assignment::V) ++v;
                if (a == Assignment::B) ++b;
            }
            const double L = static_cast<double>(cp.edges_assignment.size());
            return std::array<double, 4>{m / L, v / L, b / L, L};
        };
        const auto pg = proportions(gen);
        const auto pr = proportions(ref);
        r.s_mountain = 1.0 - std::abs(pg[0] - pr[0]);
        r.s_valley = 1.0 - std::abs(pg[1] - pr[1]);
        r.s_border = 1.0 - std::abs(pg[2] - pr[2]);
        r.p_length = std::min(pg[3], pr[3]) / std::max(pg[3], pr[3]);
        r.s_crease = (0.4 * r.s_mountain + 0.4 * r.s_valley + 0.2 * r.s_border) * r.p_length;
    }
    r.total = 0.2 * r.s_v + 0.3 * r.s_edge + 0.3 * r.s_face + 0.2 * r.s_crease;
    return r;
}

GsReport score_geometric(const SideState& gen, const SideState& ref,
                         const EvalConfig& config, std::vector<std::string>& fired) {
    GsReport r;
    if (gen.points.empty() || ref.points.empty()) {
        r.total = kLowScore;
        fired.push_back("geometric:no-model-data:0.2");
        return r;
    }
    if (gen.simplified) fired.push_back("geometric:gen-simplified-folding");
    if (ref.simplified) fired.push_back("geometric:ref-simplified-folding");

    const double dh =
        hausdorff_bidirectional(normalize_points(gen.points), normalize_points(ref.points));
    r.s_point = std::exp(-config.k_sensitivity * dh);

    if (gen.dihedrals.empty() || ref.dihedrals.empty()) {
        r.s_angle = kNeutralScore;
        fired.push_back("geometric:angles-unavailable:0.5");
    } else {
        r.s_angle = cosine_similarity(angle_histogram(gen.dihedrals),
                                      angle_histogram(ref.dihedrals));
    }

    auto box_proportions = [](const std::vector<std::array<double, 3>>& pts) {
        std::array<double, 3> lo = pts[0], hi = pts[0];
        for (const auto& p : pts) {
            for (int i = 0; i < 3; ++i) {
                lo[static_cast<size_t>(i)] = std::min(lo[static_cast<size_t>(i)], p[static_cast<size_t>(i)]);
                hi[static_cast<size_t>(i)] = std::max(hi[static_cast<size_t>(i)], p[static_cast<size_t>(i)]);
            }
        }
        std::vector<double> dims = {hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]};
        std::sort(dims.rbegin(), dims.rend());
        if (dims[0] <= 1e-12) return std::vector<double>{};
        for (double& d : dims) d /= dims[0];
        return dims;
    };
    const auto bg = box_proportions(gen.points);
    const auto br = box_proportions(ref.points);
    if (bg.empty() || br.empty()) {
        r.s_size = kNeutralScore;
        fired.push_back("geometric:degenerate-extent:0.5");
    } else {
        r.s_size = cosine_similarity(bg, br);
    }

    r.total = 0.4 * r.s_point + 0.3 * r.s_angle + 0.3 * r.s_size;
    return r;
}

namespace {

// Canonical comparison keys for Jaccard overlap. Geometry mode keys on the
// quantized folded footprint plus folded face centroids and levels so that
// identically folded patterns match regardless of indexing; raw-index mode
// reproduces the stringified index comparison.
std::set<std::string> constraint_keys(const CreasePattern& cp, const SideState& side,
                                      ConstraintKind kind, bool raw_index) {
    std::set<std::string> keys;
    const FoldedState* state =
        side.state ? &*side.state : (side.partial ? &*side.partial : nullptr);
    if (state == nullptr) return keys;
    const std::vector<OverlapConstraint> constraints =
        side.state && !side.state->constraints.empty() ? side.state->constraints
                                                       : extract_constraints(cp, *state);
    auto q = [](double v) { return std::to_string(std::llround(v * 1e6)); };
    for (const auto& c : constraints) {
        if (c.kind != kind) continue;
        std::ostringstream key;
        key << to_string(c.kind) << '|';
        if (raw_index) {
            for (int f : c.faces) key << f << ',';
            key << '|';
            for (int e : c.edges) key << e << ',';
        } else {
            key << q(c.centroid.x) << ',' << q(c.centroid.y) << ',' << q(c.extent) << '|';
            std::vector<std::string> face_marks;
            for (int f : c.faces) {
                geom::Polygon poly;
                for (const geom::Vec2 p : cp.face_polygon(f)) {
                    poly.push_back(state->face_isometries[static_cast<size_t>(f)].apply(p));
                }
                const geom::Vec2 fc = geom::centroid(poly);
                const int level = f < static_cast<int>(state->face_levels.size())
                                      ? state->face_levels[static_cast<size_t>(f)]
                                      : 0;
                face_marks.push_back(q(fc.x) + ":" + q(fc.y) + ":" + std::to_string(level));
            }
            std::sort(face_marks.begin(), face_marks.end());
            for (const auto& m : face_marks) key << m << ';';
        }
        keys.insert(key.str());
    }
    return keys;
}

double kind_similarity(const std::set<std::string>& a, const std::set<std::string>& b,
                       const char* label, std::vector<std::string>& fired) {
    if (a.empty() && b.empty()) return 1.0;
    if (a.empty() || b.empty()) {
        fired.push_back(std::string("constraints:") + label + ":one-empty:0.3");
        return kFailureScore;
    }
    std::vector<std::string> inter;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(inter));
    const double uni = static_cast<double>(a.size() + b.size() - inter.size());
    const double jaccard = static_cast<double>(inter.size()) / uni;
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double count_term = std::exp(-std::abs(na - nb) / std::max(1.0, std::min(na, nb)));
    return 0.7 * jaccard + 0.3 * count_term;
}

}  // namespace

CsReport score_constraints(const CreasePattern& gen_cp, const SideState& gen,
                           const CreasePattern& ref_cp, const SideState& ref,
                           const EvalConfig& config, std::vector<std::string>& fired) {
    CsReport r;
    try {
        if (ref.locally_foldable && !gen.locally_foldable) {
            r.total = kLowScore;
            fired.push_back("constraints:gen-unfoldable-gate:0.2");
            return r;
        }
        const bool raw = config.paper_faithful;
        r.s_tt = kind_similarity(constraint_keys(gen_cp, gen, ConstraintKind::TacoTaco, raw),
                                 constraint_keys(ref_cp, ref, ConstraintKind::TacoTaco, raw),
                                 "taco-taco", fired);
        r.s_tto = kind_similarity(
            constraint_keys(gen_cp, gen, ConstraintKind::TacoTortilla, raw),
            constraint_keys(ref_cp, ref, ConstraintKind::TacoTortilla, raw), "taco-tortilla",
            fired);
        r.s_trans = kind_similarity(
            constraint_keys(gen_cp, gen, ConstraintKind::Transitivity, raw),
            constraint_keys(ref_cp, ref, ConstraintKind::Transitivity, raw), "transitivity",
            fired);
        r.s_kawasaki =
            kawasaki_everywhere(ref_cp) && !kawasaki_everywhere(gen_cp) ? kLowScore : 1.0;
        r.s_maekawa =
            maekawa_everywhere(ref_cp) && !maekawa_everywhere(gen_cp) ? kLowScore : 1.0;
        if (r.s_kawasaki == kLowScore) fired.push_back("constraints:kawasaki:0.2");
        if (r.s_maekawa == kLowScore) fired.push_back("constraints:maekawa:0.2");
        r.s_flatfold = 0.5 * r.s_kawasaki + 0.5 * r.s_maekawa;
        r.total = 0.3 * r.s_tt + 0.3 * r.s_tto + 0.2 * r.s_trans + 0.2 * r.s_flatfold;
    } catch (const std::exception&) {
        r = CsReport{};
        r.total = kFailureScore;
        fired.push_back("constraints:internal-failure:0.3");
    }
    return r;
}

FfsReport score_final_state(const CreasePattern& gen_cp, const SideState& gen,
                            const CreasePattern& ref_cp, const SideState& ref,
                            const EvalConfig& config, std::vector<std::string>& fired) {
    FfsReport r;
    if (!gen.folded || !ref.folded) {
        r.total = kFailureScore;
        fired.push_back("final-state:compile-failed:0.3");
        return r;
    }
    const double dh =
        hausdorff_bidirectional(normalize_points(gen.points), normalize_points(ref.points));
    r.s_shape = std::exp(-config.k_sensitivity * dh);

    if (config.paper_faithful) {
        r.s_layer = kNeutralScore;
        fired.push_back("final-state:paper-layer-placeholder:0.5");
    } else {
        // Match faces across sides by quantized folded centroid plus stacking
        // level, then score the fraction of agreeing pairwise orders.
        auto face_map = [](const CreasePattern& cp, const FoldedState& st) {
            std::map<std::string, std::vector<int>> m;
            for (int f = 0; f < st.face_count(); ++f) {
                geom::Polygon poly;
                for (const geom::Vec2 p : cp.face_polygon(f)) {
                    poly.push_back(st.face_isometries[static_cast<size_t>(f)].apply(p));
                }
                const geom::Vec2 c = geom::centroid(poly);
                const std::string key = std::to_string(std::llround(c.x * 1e6)) + "," +
                                        std::to_string(std::llround(c.y * 1e6)) + "," +
                                        std::to_string(st.face_levels[static_cast<size_t>(f)]);
                m[key].push_back(f);
            }
            return m;
        };
        const FoldedState& gs = *gen.state;
        const FoldedState& rs = *ref.state;
        const auto mg = face_map(gen_cp, gs);
        const auto mr = face_map(ref_cp, rs);
        std::vector<std::pair<int, int>> matched;
        for (const auto& [key, gfaces] : mg) {
            if (gfaces.size() != 1) continue;
            const auto it = mr.find(key);
            if (it != mr.end() && it->second.size() == 1) {
                matched.emplace_back(gfaces[0], it->second[0]);
            }
        }
        if (matched.empty()) {
            r.s_layer = kNeutralScore;
            fired.push_back("final-state:no-layer-info:0.5");
        } else {
            int counted = 0, agreed = 0;
            for (size_t i = 0; i < matched.size(); ++i) {
                for (size_t j = i + 1; j < matched.size(); ++j) {
                    const int rg = gs.above[static_cast<size_t>(matched[i].first)]
                                           [static_cast<size_t>(matched[j].first)];
                    const int rr = rs.above[static_cast<size_t>(matched[i].second)]
                                           [static_cast<size_t>(matched[j].second)];
                    if (rg < 0 && rr < 0) continue;
                    ++counted;
                    if (rg == rr) ++agreed;
                }
            }
            r.s_layer = counted == 0
                            ? 1.0
                            : static_cast<double>(agreed) / static_cast<double>(counted);
        }
    }
    r.total = 0.7 * r.s_shape + 0.3 * r.s_layer;
    return r;
}

ScoreReport score_total(const CreasePattern& gen, const CreasePattern& ref,
                        const EvalConfig& config) {
    ScoreReport report;
    report.paper_faithful = config.paper_faithful;
    report.k_sensitivity = config.k_sensitivity;

    const SideState gen_side = prepare_side(gen, config);
    const SideState ref_side = prepare_side(ref, config);

    report.tss = score_topological(gen, ref);
    if (report.tss.s_crease == kLowScore && (!gen.has_assignments() || !ref.has_assignments())) {
        report.fired_fallbacks.push_back("topological:missing-assignments:0.2");
    }
    report.gs = score_geometric(gen_side, ref_side, config, report.fired_fallbacks);
    report.cs = score_constraints(gen, gen_side, ref, ref_side, config, report.fired_fallbacks);
    report.ffs =
        score_final_state(gen, gen_side, ref, ref_side, config, report.fired_fallbacks);

    report.s_topological = report.tss.total;
    report.s_geometric = report.gs.total;
    report.s_foldability = report.cs.total;
    report.s_final_state = report.ffs.total;
    report.total = 0.25 * (report.s_topological + report.s_geometric +
                           report.s_foldability + report.s_final_state);
    return report;
}

ScoreResult score_documents(std::string_view gen_text, std::string_view ref_text,
                            const EvalConfig& config) {
    ScoreResult result;
    const ParseResult gen = parse_cp(gen_text);
    if (!gen.ok()) {
        result.diagnostics = gen.diagnostics;
        return result;
    }
    const ParseResult ref = parse_cp(ref_text);
    if (!ref.ok()) {
        result.diagnostics = ref.diagnostics;
        return result;
    }
    result.report = score_total(*gen.cp, *ref.cp, config);
    return result;
}

nlohmann::ordered_json score_report_to_json(const ScoreReport& r) {
    nlohmann::ordered_json j;
    j["mode"] = r.paper_faithful ? "paper-faithful" : "full";
    j["k"] = r.k_sensitivity;
    j["tss"] = {{"s_v", r.tss.s_v},
                {"s_edge", {{"value", r.tss.s_edge},
                            {"s_degree", r.tss.s_degree},
                            {"s_conn", r.tss.s_conn}}},
                {"s_face", {{"value", r.tss.s_face},
                            {"s_fcount", r.tss.s_fcount},
                            {"s_favgv", r.tss.s_favgv},
                            {"s_fdist", r.tss.s_fdist}}},
                {"s_crease", {{"value", r.tss.s_crease},
                              {"s_M", r.tss.s_mountain},
                              {"s_V", r.tss.s_valley},
                              {"s_B", r.tss.s_border},
                              {"p_L", r.tss.p_length}}}};
    j["gs"] = {{"s_point", r.gs.s_point}, {"s_angle", r.gs.s_angle}, {"s_size", r.gs.s_size}};
    j["cs"] = {{"s_TT", r.cs.s_tt},
               {"s_TTo", r.cs.s_tto},
               {"s_Trans", r.cs.s_trans},
               {"s_flatfold", {{"value", r.cs.s_flatfold},
                               {"s_K", r.cs.s_kawasaki},
                               {"s_Mk", r.cs.s_maekawa}}}};
    j["ffs"] = {{"s_shape", r.ffs.s_shape}, {"s_layer", r.ffs.s_layer}};
    j["S_topological"] = r.s_topological;
    j["S_geometric"] = r.s_geometric;
    j["S_foldability"] = r.s_foldability;
    j["S_final_state"] = r.s_final_state;
    j["S_total"] = r.total;
    j["fired_fallbacks"] = r.fired_fallbacks;
    return j;
}

}  // namespace cpforge
