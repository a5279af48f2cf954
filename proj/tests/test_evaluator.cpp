#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "cpforge/evaluator.hpp"
#include "fixtures.hpp"

using namespace cpforge;

TEST_CASE("wasserstein: identical, opposite, and hand-computed cases") {
    CHECK(wasserstein_1d({1, 2, 3}, {1, 2, 3}) == doctest::Approx(0.0));
    CHECK(wasserstein_1d({1, 0}, {0, 1}) == doctest::Approx(1.0));
    CHECK(wasserstein_1d({1, 0, 1}, {0, 2, 0}) == doctest::Approx(0.5));
    CHECK(wasserstein_1d({5}, {1}) == doctest::Approx(0.0));  // single bin
    // All-zero histograms normalize to uniform.
    CHECK(wasserstein_1d({0, 0, 0}, {1, 1, 1}) == doctest::Approx(0.0));
    CHECK_THROWS_AS(wasserstein_1d({1, 2}, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("wasserstein is symmetric") {
    const std::vector<double> a = {0.2, 1.5, 0, 3};
    const std::vector<double> b = {2, 0, 1, 0.5};
    CHECK(wasserstein_1d(a, b) == doctest::Approx(wasserstein_1d(b, a)));
}

TEST_CASE("hausdorff: identity, two points, asymmetric sets") {
    const std::vector<std::array<double, 3>> a = {{0, 0, 0}, {1, 0, 0}};
    CHECK(hausdorff_bidirectional(a, a) == doctest::Approx(0.0));
    CHECK(hausdorff_bidirectional({{0, 0, 0}}, {{1, 0, 0}}) == doctest::Approx(1.0));
    CHECK(hausdorff_bidirectional(a, {{0, 0, 0}}) == doctest::Approx(1.0));
    CHECK(hausdorff_bidirectional({{0, 0, 0}}, a) == doctest::Approx(1.0));
    CHECK_THROWS_AS(hausdorff_bidirectional({}, a), std::invalid_argument);
}

TEST_CASE("normalization: unit sphere and scale invariance") {
    std::vector<std::array<double, 3>> pts = {{0, 0, 0}, {2, 0, 0}, {0, 2, 0}};
    const auto n1 = normalize_points(pts);
    double max_r = 0;
    for (const auto& p : n1) {
        max_r = std::max(max_r, std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]));
    }
    CHECK(max_r == doctest::Approx(1.0));

    auto scaled = pts;
    for (auto& p : scaled) {
        for (auto& v : p) v *= 7.5;
    }
    const auto n2 = normalize_points(scaled);
    for (size_t i = 0; i < n1.size(); ++i) {
        for (size_t k = 0; k < 3; ++k) {
            CHECK(n1[i][k] == doctest::Approx(n2[i][k]).epsilon(1e-12));
        }
    }
    // Degenerate all-coincident set stays at the origin.
    const auto d = normalize_points({{3, 3, 3}, {3, 3, 3}});
    CHECK(d[0][0] == doctest::Approx(0.0));
}

TEST_CASE("vertex count similarity formula") {
    CreasePattern gen, ref;
    gen.vertices_coords.assign(10, {0, 0});
    ref.vertices_coords.assign(8, {0, 0});
    const TssReport r = score_topological(gen, ref);
    CHECK(r.s_v == doctest::Approx(std::exp(-0.125)).epsilon(1e-12));

    const TssReport same = score_topological(ref, ref);
    CHECK(same.s_v == 1.0);
}

TEST_CASE("crease distribution arithmetic from the worked example") {
    // gen (M,V,B) = (4,4,4), ref (5,3,4), both 12 assigned edges.
    CreasePattern gen, ref;
    auto fill = [](CreasePattern& cp, int m, int v, int b) {
        cp.vertices_coords.assign(2, {0, 0});
        for (int i = 0; i < m; ++i) cp.edges_assignment.push_back(Assignment::M);
        for (int i = 0; i < v; ++i) cp.edges_assignment.push_back(Assignment::V);
        for (int i = 0; i < b; ++i) cp.edges_assignment.push_back(Assignment::B);
    };
    fill(gen, 4, 4, 4);
    fill(ref, 5, 3, 4);
    const TssReport r = score_topological(gen, ref);
    CHECK(r.s_crease ==
          doctest::Approx(0.4 * (11.0 / 12.0) + 0.4 * (11.0 / 12.0) + 0.2).epsilon(1e-12));
    CHECK(r.p_length == doctest::Approx(1.0));
}

TEST_CASE("missing assignments floor the crease score at 0.2") {
    CreasePattern gen = fixtures::unit_square();
    gen.edges_assignment.clear();
    const TssReport r = score_topological(gen, fixtures::unit_square());
    CHECK(r.s_crease == doctest::Approx(0.2));
}

TEST_CASE("length penalty scales the crease score") {
    CreasePattern gen, ref;
    gen.vertices_coords.assign(2, {0, 0});
    ref.vertices_coords.assign(2, {0, 0});
    gen.edges_assignment.assign(6, Assignment::M);
    ref.edges_assignment.assign(12, Assignment::M);
    const TssReport r = score_topological(gen, ref);
    CHECK(r.p_length == doctest::Approx(0.5));
    CHECK(r.s_crease == doctest::Approx((0.4 + 0.4 * 1.0 + 0.2 * 1.0) * 0.5).epsilon(1e-12));
}

TEST_CASE("connected components term") {
    CreasePattern gen = fixtures::unit_square();
    CreasePattern ref = fixtures::unit_square();
    ref.vertices_coords.push_back({2, 2});  // isolated vertex = extra component
    const TssReport r = score_topological(gen, ref);
    CHECK(r.s_conn == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(score_topological(gen, gen).s_conn == 1.0);
}

TEST_CASE("face count term") {
    const CreasePattern a = fixtures::accordion(3, {Assignment::M, Assignment::V});
    const CreasePattern b = fixtures::accordion(5,
        {Assignment::M, Assignment::V, Assignment::M, Assignment::V});
    const TssReport r = score_topological(a, b);
    CHECK(r.s_fcount == doctest::Approx(std::exp(-2.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("self similarity of every tss sub-score") {
    for (const auto& [name, cp] : fixtures::golden_corpus()) {
        CAPTURE(name);
        const TssReport r = score_topological(cp, cp);
        CHECK(r.s_v == doctest::Approx(1.0));
        CHECK(r.s_edge == doctest::Approx(1.0));
        CHECK(r.s_face == doctest::Approx(1.0));
        CHECK(r.s_crease == doctest::Approx(1.0));
        CHECK(r.total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("geometric similarity on identical folded states") {
    const EvalConfig config;
    std::vector<std::string> fired;
    const CreasePattern cp = fixtures::accordion(3, {Assignment::M, Assignment::V});
    const SideState s = prepare_side(cp, config);
    REQUIRE(s.folded);
    const GsReport r = score_geometric(s, s, config, fired);
    CHECK(r.s_point == doctest::Approx(1.0));
    CHECK(r.s_angle == doctest::Approx(1.0));
    CHECK(r.s_size == doctest::Approx(1.0));
    CHECK(r.total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("s_point decay: d_H = 0.2 at k = 5 gives 1/e") {
    std::vector<std::string> fired;
    EvalConfig config;
    SideState gen, ref;
    gen.folded = ref.folded = true;
    // Both sets are already centered with max radius 1; d_H = 0.2 exactly.
    gen.points = {{-1, 0, 0}, {1, 0, 0}};
    ref.points = {{-1, 0, 0}, {0.6, 0, 0}, {1, 0, 0}};
    const double dh = hausdorff_bidirectional(normalize_points(gen.points),
                                              normalize_points(ref.points));
    const GsReport r = score_geometric(gen, ref, config, fired);
    CHECK(r.s_point == doctest::Approx(std::exp(-5.0 * dh)).epsilon(1e-12));
}

TEST_CASE("opposite dihedral histograms are orthogonal") {
    const EvalConfig config;
    std::vector<std::string> fired;
    SideState gen, ref;
    gen.folded = ref.folded = true;
    gen.points = ref.points = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    gen.dihedrals = {0.0, 0.0};
    ref.dihedrals = {180.0, 180.0};
    const GsReport r = score_geometric(gen, ref, config, fired);
    CHECK(r.s_angle == doctest::Approx(0.0));
}

TEST_CASE("angle fallback 0.5 when a side has no creases") {
    const EvalConfig config;
    std::vector<std::string> fired;
    SideState gen, ref;
    gen.folded = ref.folded = true;
    gen.points = ref.points = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    ref.dihedrals = {0.0};
    const GsReport r = score_geometric(gen, ref, config, fired);
    CHECK(r.s_angle == doctest::Approx(0.5));
}

TEST_CASE("geometric dimension floors at 0.2 without model data") {
    const EvalConfig config;
    std::vector<std::string> fired;
    SideState empty;  // no points at all
    SideState ok;
    ok.points = {{0, 0, 0}, {1, 0, 0}};
    const GsReport r = score_geometric(empty, ok, config, fired);
    CHECK(r.total == doctest::Approx(0.2));
}

TEST_CASE("simplified fallback points equal the input coordinates") {
    const EvalConfig config;
    const CreasePattern afs = fixtures::two_flap_ambiguous();
    const SideState s = prepare_side(afs, config);
    CHECK_FALSE(s.folded);
    CHECK(s.simplified);
    REQUIRE(s.points.size() == afs.vertices_coords.size());
    for (size_t i = 0; i < s.points.size(); ++i) {
        CHECK(s.points[i][0] == afs.vertices_coords[i].x);
        CHECK(s.points[i][1] == afs.vertices_coords[i].y);
        CHECK(s.points[i][2] == 0.0);
    }
}

TEST_CASE("constraint gate: foldable reference vs unfoldable generation") {
    const EvalConfig config;
    std::vector<std::string> fired;
    const CreasePattern ref = fixtures::half_fold_vertical(Assignment::V);
    const CreasePattern gen = fixtures::maekawa_violation();
    const SideState rs = prepare_side(ref, config);
    const SideState gs = prepare_side(gen, config);
    const CsReport r = score_constraints(gen, gs, ref, rs, config, fired);
    CHECK(r.total == doctest::Approx(0.2));
}

TEST_CASE("constraint kinds: both empty scores 1.0, one empty scores 0.3") {
    const EvalConfig config;
    std::vector<std::string> fired;
    const CreasePattern half = fixtures::half_fold_vertical(Assignment::V);
    const SideState hs = prepare_side(half, config);
    const CsReport both_empty = score_constraints(half, hs, half, hs, config, fired);
    CHECK(both_empty.s_tt == doctest::Approx(1.0));
    CHECK(both_empty.s_tto == doctest::Approx(1.0));
    CHECK(both_empty.s_trans == doctest::Approx(1.0));
    CHECK(both_empty.s_flatfold == doctest::Approx(1.0));
    CHECK(both_empty.total == doctest::Approx(1.0).epsilon(1e-12));

    const CreasePattern acc = fixtures::accordion(4, {Assignment::M, Assignment::V, Assignment::M});
    const SideState as = prepare_side(acc, config);
    const CsReport one_empty = score_constraints(acc, as, half, hs, config, fired);
    CHECK(one_empty.s_trans == doctest::Approx(0.3));
    CHECK(one_empty.s_tt == doctest::Approx(0.3));
}

TEST_CASE("identical constraint sets score 1.0 per kind") {
    const EvalConfig config;
    std::vector<std::string> fired;
    const CreasePattern acc = fixtures::accordion(4, {Assignment::M, Assignment::V, Assignment::M});
    const SideState s = prepare_side(acc, config);
    const CsReport r = score_constraints(acc, s, acc, s, config, fired);
    CHECK(r.s_tt == doctest::Approx(1.0));
    CHECK(r.s_trans == doctest::Approx(1.0));
    CHECK(r.total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("final state: identical states score 1 in full mode") {
    const EvalConfig config;
    std::vector<std::string> fired;
    const CreasePattern acc = fixtures::accordion(4, {Assignment::M, Assignment::V, Assignment::M});
    const SideState s = prepare_side(acc, config);
    const FfsReport r = score_final_state(acc, s, acc, s, config, fired);
    CHECK(r.s_shape == doctest::Approx(1.0));
    CHECK(r.s_layer == doctest::Approx(1.0));
    CHECK(r.total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("final state: paper-faithful layer placeholder is 0.5") {
    EvalConfig config;
    config.paper_faithful = true;
    std::vector<std::string> fired;
    const CreasePattern acc = fixtures::accordion(4, {Assignment::M, Assignment::V, Assignment::M});
    const SideState s = prepare_side(acc, config);
    const FfsReport r = score_final_state(acc, s, acc, s, config, fired);
    CHECK(r.s_layer == doctest::Approx(0.5));
    CHECK(r.total == doctest::Approx(0.85).epsilon(1e-12));
}

TEST_CASE("final state: failed compile scores 0.3") {
    const EvalConfig config;
    std::vector<std::string> fired;
    const CreasePattern good = fixtures::half_fold_vertical(Assignment::V);
    const CreasePattern bad = fixtures::maekawa_violation();
    const SideState gs = prepare_side(bad, config);
    const SideState rs = prepare_side(good, config);
    const FfsReport r = score_final_state(bad, gs, good, rs, config, fired);
    CHECK(r.total == doctest::Approx(0.3));
}

TEST_CASE("score_total: self-similarity 1.0 full, 0.9625 paper-faithful") {
    const CreasePattern cp = fixtures::accordion(3, {Assignment::M, Assignment::V});
    const ScoreReport full = score_total(cp, cp);
    CHECK(full.total == doctest::Approx(1.0).epsilon(1e-9));

    EvalConfig pf;
    pf.paper_faithful = true;
    const ScoreReport paper = score_total(cp, cp, pf);
    CHECK(paper.total == doctest::Approx(0.9625).epsilon(1e-9));
}

TEST_CASE("score_total reflects fallbacks for an unfoldable generation") {
    const CreasePattern ref = fixtures::half_fold_vertical(Assignment::V);
    const CreasePattern gen = fixtures::maekawa_violation();
    const ScoreReport r = score_total(gen, ref);
    CHECK(r.s_foldability == doctest::Approx(0.2));
    CHECK(r.s_final_state == doctest::Approx(0.3));
    CHECK(r.total < 0.8);
    CHECK_FALSE(r.fired_fallbacks.empty());
}

TEST_CASE("weight accounting: S_total is exactly the 0.25-weighted sum") {
    const CreasePattern gen = fixtures::accordion(3, {Assignment::M, Assignment::V});
    const CreasePattern ref = fixtures::gate_fold(Assignment::V);
    const ScoreReport r = score_total(gen, ref);
    CHECK(r.total == doctest::Approx(0.25 * (r.s_topological + r.s_geometric +
                                             r.s_foldability + r.s_final_state))
                         .epsilon(1e-15));
    CHECK(r.tss.total ==
          doctest::Approx(0.2 * r.tss.s_v + 0.3 * r.tss.s_edge + 0.3 * r.tss.s_face +
                          0.2 * r.tss.s_crease)
              .epsilon(1e-15));
    CHECK(r.gs.total ==
          doctest::Approx(0.4 * r.gs.s_point + 0.3 * r.gs.s_angle + 0.3 * r.gs.s_size)
              .epsilon(1e-15));
    CHECK(r.cs.total ==
          doctest::Approx(0.3 * r.cs.s_tt + 0.3 * r.cs.s_tto + 0.2 * r.cs.s_trans +
                          0.2 * r.cs.s_flatfold)
              .epsilon(1e-15));
    CHECK(r.ffs.total == doctest::Approx(0.7 * r.ffs.s_shape + 0.3 * r.ffs.s_layer)
                             .epsilon(1e-15));
}

TEST_CASE("monotone vertex penalty") {
    CreasePattern ref;
    ref.vertices_coords.assign(8, {0, 0});
    double prev = 1.0;
    for (int extra = 0; extra <= 6; ++extra) {
        CreasePattern gen;
        gen.vertices_coords.assign(static_cast<size_t>(8 + extra), {0, 0});
        const double sv = score_topological(gen, ref).s_v;
        CHECK(sv <= prev + 1e-15);
        prev = sv;
    }
}

TEST_CASE("every sub-score stays within [0,1] across mixed pairs") {
    const auto& corpus = fixtures::golden_corpus();
    std::vector<CreasePattern> pool;
    for (const auto& [name, cp] : corpus) pool.push_back(cp);
    pool.push_back(fixtures::maekawa_violation());
    pool.push_back(fixtures::two_flap_ambiguous());
    pool.push_back(fixtures::unit_square());
    for (size_t i = 0; i < pool.size(); i += 3) {
        for (size_t j = 0; j < pool.size(); j += 5) {
            const ScoreReport r = score_total(pool[i], pool[j]);
            for (const double v :
                 {r.tss.total, r.gs.total, r.cs.total, r.ffs.total, r.total, r.tss.s_v,
                  r.tss.s_edge, r.tss.s_face, r.tss.s_crease, r.gs.s_point, r.gs.s_angle,
                  r.gs.s_size, r.cs.s_tt, r.cs.s_tto, r.cs.s_trans, r.cs.s_flatfold,
                  r.ffs.s_shape, r.ffs.s_layer}) {
                CHECK(v >= 0.0);
                CHECK(v <= 1.0 + 1e-12);
            }
        }
    }
}

TEST_CASE("determinism: identical inputs give identical reports") {
    const CreasePattern gen = fixtures::accordion(4, {Assignment::M, Assignment::V, Assignment::M});
    const CreasePattern ref = fixtures::accordion(5,
        {Assignment::M, Assignment::V, Assignment::M, Assignment::V});
    const std::string a = score_report_to_json(score_total(gen, ref)).dump();
    const std::string b = score_report_to_json(score_total(gen, ref)).dump();
    CHECK(a == b);
}

TEST_CASE("score_documents: unparsable generation yields diagnostics") {
    const std::string ref = serialize_cp(fixtures::half_fold_vertical(Assignment::V));
    const ScoreResult bad = score_documents("{not valid", ref);
    CHECK_FALSE(bad.ok());
    CHECK(!bad.diagnostics.empty());
    CHECK(bad.diagnostics[0].category == Category::CSE);

    const ScoreResult good = score_documents(ref, ref);
    REQUIRE(good.ok());
    CHECK(good.report->total == doctest::Approx(1.0).epsilon(1e-9));
}
