#include "doctest.h"

#include <stdexcept>

#include <cmath>
#include <numbers>
#include <random>

#include "cpforge/foldability.hpp"
#include "fixtures.hpp"

using namespace cpforge;

namespace {

constexpr double kPi = std::numbers::pi;

int center_vertex_id(const CreasePattern& cp) {
    for (int v = 0; v < cp.vertex_count(); ++v) {
        if (geom::dist(cp.vertices_coords[static_cast<size_t>(v)], {0.5, 0.5}) < 1e-9) return v;
    }
    return -1;
}

std::vector<double> deg(const std::vector<double>& rad) {
    std::vector<double> out;
    for (double a : rad) out.push_back(a * 180.0 / kPi);
    return out;
}

// Kawasaki-satisfying random sectors: draw n/2 pairs summing to pi each.
std::vector<double> random_kawasaki_angles(int n, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.15, 1.0);
    std::vector<double> odd(n / 2), even(n / 2);
    auto fill = [&](std::vector<double>& part) {
        double sum = 0.0;
        for (double& a : part) {
            a = u(rng);
            sum += a;
        }
        for (double& a : part) a *= kPi / sum;
    };
    fill(odd);
    fill(even);
    std::vector<double> angles;
    for (int i = 0; i < n / 2; ++i) {
        angles.push_back(odd[static_cast<size_t>(i)]);
        angles.push_back(even[static_cast<size_t>(i)]);
    }
    return angles;
}

}  // namespace

TEST_CASE("sector angles of the plus vertex") {
    const CreasePattern cp = fixtures::flat_plus();
    const int v = center_vertex_id(cp);
    REQUIRE(v >= 0);
    const SectorResult sr = sector_angles(cp, v);
    REQUIRE(sr.sectors.has_value());
    REQUIRE(sr.sectors->angles.size() == 4);
    for (double a : sr.sectors->angles) CHECK(a == doctest::Approx(kPi / 2).epsilon(1e-9));
}

TEST_CASE("sector angles at skewed bearings are consecutive differences") {
    const CreasePattern cp = fixtures::center_vertex(
        {0, 100, 180, 280},
        {Assignment::F, Assignment::F, Assignment::F, Assignment::F});
    const int v = center_vertex_id(cp);
    const SectorResult sr = sector_angles(cp, v);
    REQUIRE(sr.sectors.has_value());
    // The fan starts at the most clockwise direction (bearing 280 = -80).
    const auto d = deg(sr.sectors->angles);
    REQUIRE(d.size() == 4);
    CHECK(d[0] == doctest::Approx(80.0).epsilon(1e-7));
    CHECK(d[1] == doctest::Approx(100.0).epsilon(1e-7));
    CHECK(d[2] == doctest::Approx(80.0).epsilon(1e-7));
    CHECK(d[3] == doctest::Approx(100.0).epsilon(1e-7));
}

TEST_CASE("boundary corner has a single quarter sector") {
    const CreasePattern cp = fixtures::unit_square();
    const SectorResult sr = sector_angles(cp, 0);
    REQUIRE(sr.sectors.has_value());
    REQUIRE(sr.sectors->angles.size() == 1);
    CHECK(sr.sectors->angles[0] == doctest::Approx(kPi / 2).epsilon(1e-9));
}

TEST_CASE("interior sectors sum to two pi on the golden corpus") {
    for (const auto& [name, cp] : fixtures::golden_corpus()) {
        CAPTURE(name);
        for (int v = 0; v < cp.vertex_count(); ++v) {
            if (cp.is_boundary_vertex(v)) continue;
            const SectorResult sr = sector_angles(cp, v);
            REQUIRE(sr.sectors.has_value());
            double sum = 0.0;
            for (double a : sr.sectors->angles) sum += a;
            CHECK(sum == doctest::Approx(2 * kPi).epsilon(1e-6));
        }
    }
}

TEST_CASE("maekawa counting") {
    using A = Assignment;
    const CreasePattern ok = fixtures::plus_vertex({A::M, A::M, A::M, A::V});
    const int v = center_vertex_id(ok);
    const VertexFoldReport r = check_maekawa(ok, v);
    CHECK(r.mountains == 3);
    CHECK(r.valleys == 1);
    CHECK(r.maekawa_ok);

    const CreasePattern bad = fixtures::maekawa_violation();
    CHECK_FALSE(check_maekawa(bad, center_vertex_id(bad)).maekawa_ok);
}

TEST_CASE("maekawa with six creases and F edges excluded") {
    using A = Assignment;
    // Six folded creases M,M,M,M,V,V -> |4-2| = 2.
    const CreasePattern cp = fixtures::center_vertex(
        {0, 60, 120, 180, 240, 300}, {A::M, A::M, A::M, A::M, A::V, A::V});
    const VertexFoldReport r = check_maekawa(cp, center_vertex_id(cp));
    CHECK(r.mountains == 4);
    CHECK(r.valleys == 2);
    CHECK(r.maekawa_ok);
}

TEST_CASE("maekawa is not applicable on boundary vertices") {
    const CreasePattern cp = fixtures::half_fold_vertical(Assignment::V);
    for (int v = 0; v < cp.vertex_count(); ++v) {
        CHECK_FALSE(check_maekawa(cp, v).applicable);
    }
}

TEST_CASE("kawasaki on symmetric and skewed vertices") {
    using A = Assignment;
    const CreasePattern sym = fixtures::plus_vertex({A::M, A::M, A::M, A::V});
    CHECK(check_kawasaki(sym, center_vertex_id(sym)).kawasaki_ok);

    // Sectors [100, 80, 80, 100]: alternating sums are both 180 degrees.
    const CreasePattern skew = fixtures::center_vertex(
        {0, 100, 180, 260}, {A::M, A::M, A::V, A::M});
    CHECK(check_kawasaki(skew, center_vertex_id(skew)).kawasaki_ok);

    // Sectors [90, 90, 100, 80]: alternating sums 190 vs 170 fail.
    const CreasePattern bad = fixtures::kawasaki_violation();
    const VertexFoldReport r = check_kawasaki(bad, center_vertex_id(bad));
    CHECK_FALSE(r.kawasaki_ok);
    const double lo = std::min(r.alternating_sums.first, r.alternating_sums.second);
    const double hi = std::max(r.alternating_sums.first, r.alternating_sums.second);
    CHECK(deg({lo})[0] == doctest::Approx(170.0).epsilon(1e-6));
    CHECK(deg({hi})[0] == doctest::Approx(190.0).epsilon(1e-6));
}

TEST_CASE("odd crease count fails kawasaki with a diagnostic") {
    using A = Assignment;
    const CreasePattern cp =
        fixtures::center_vertex({0, 120, 240}, {A::M, A::M, A::V});
    const VertexFoldReport r = check_kawasaki(cp, center_vertex_id(cp));
    CHECK_FALSE(r.kawasaki_ok);
    REQUIRE(r.diagnostic.has_value());
    CHECK(r.diagnostic->params.at("reason") == "odd-degree");
}

TEST_CASE("big-little-big") {
    using A = Assignment;
    // Strict minima bounded by opposite assignments pass.
    const CreasePattern ok = fixtures::center_vertex(
        {0, 100, 180, 280}, {A::V, A::M, A::V, A::M});
    CHECK(check_big_little_big(ok, center_vertex_id(ok)));

    //

    // [150, 30, 150, 30] with both creases of a 30-degree sector mountains.
    const CreasePattern bad = fixtures::center_vertex(
        {0, 150, 180, 330}, {A::M, A::M, A::M, A::V});
    CHECK_FALSE(check_big_little_big(bad, center_vertex_id(bad)));

    // All-equal sectors have no strict minimum.
    const CreasePattern equal = fixtures::plus_vertex({A::M, A::M, A::M, A::M});
    CHECK(check_big_little_big(equal, center_vertex_id(equal)));
}

TEST_CASE("check_flat_foldable_all on good and bad patterns") {
    for (const auto& [name, cp] : fixtures::golden_corpus()) {
        CAPTURE(name);
        CHECK(check_flat_foldable_all(cp).empty());
    }

    const CreasePattern mk = fixtures::maekawa_violation();
    const auto d1 = check_flat_foldable_all(mk);
    REQUIRE(d1.size() == 1);
    CHECK(d1[0].code == "E_GEOM_ANGLE_CONSTRAINT_VIOLATION");
    CHECK(d1[0].params.at("reason") == "maekawa");
    CHECK(d1[0].params.at("vertex") == center_vertex_id(mk));

    using A = Assignment;
    const CreasePattern odd = fixtures::center_vertex({0, 120, 240}, {A::M, A::M, A::V});
    const auto d2 = check_flat_foldable_all(odd);
    REQUIRE(d2.size() == 1);
    CHECK(d2[0].params.at("reason") == "odd-degree");

    const auto d3 = check_flat_foldable_all(fixtures::kawasaki_violation());
    REQUIRE(d3.size() == 1);
    CHECK(d3[0].params.at("reason") == "kawasaki");

    const auto d4 = check_flat_foldable_all(fixtures::blb_violation());
    REQUIRE(d4.size() == 1);
    CHECK(d4[0].params.at("reason") == "blb");
}

TEST_CASE("equal-angle four-crease vertex has eight valid assignments") {
    SectorAngles sa;
    sa.creases = {0, 1, 2, 3};
    sa.angles = {kPi / 2, kPi / 2, kPi / 2, kPi / 2};
    CHECK(enumerate_mv_assignments(sa) == 8);
}

TEST_CASE("kawasaki-violating sectors admit no assignment") {
    SectorAngles sa;
    sa.creases = {0, 1, 2, 3};
    sa.angles = {100 * kPi / 180, 80 * kPi / 180, 100 * kPi / 180, 80 * kPi / 180};
    CHECK(enumerate_mv_assignments(sa) == 0);
}

TEST_CASE("enumeration is stable across runs") {
    SectorAngles sa;
    sa.creases = {0, 1, 2, 3};
    sa.angles = {100 * kPi / 180, 80 * kPi / 180, 80 * kPi / 180, 100 * kPi / 180};
    const int first = enumerate_mv_assignments(sa);
    CHECK(first > 0);
    CHECK(enumerate_mv_assignments(sa) == first);
}

TEST_CASE("enumeration refuses more than 16 creases") {
    SectorAngles sa;
    for (int i = 0; i < 18; ++i) {
        sa.creases.push_back(i);
        sa.angles.push_back(2 * kPi / 18);
    }
    CHECK_THROWS_AS(enumerate_mv_assignments(sa), std::invalid_argument);
}

TEST_CASE("oracle equivalence on random vertices") {
    std::mt19937 rng(42);
    std::uniform_int_distribution<int> npick(2, 4);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 * npick(rng);
        SectorAngles sa;
        for (int i = 0; i < n; ++i) sa.creases.push_back(i);

        const bool want_kawasaki = trial % 2 == 0;
        if (want_kawasaki) {
            sa.angles = random_kawasaki_angles(n, rng);
        } else {
            std::uniform_real_distribution<double> u(0.1, 1.0);
            double sum = 0.0;
            for (int i = 0; i < n; ++i) {
                sa.angles.push_back(u(rng));
                sum += sa.angles.back();
            }
            for (double& a : sa.angles) a *= 2 * kPi / sum;
            double even = 0.0, odd = 0.0;
            for (size_t i = 0; i < sa.angles.size(); ++i) {
                (i % 2 ? odd : even) += sa.angles[i];
            }
            if (std::abs(even - kPi) <= 1e-5) continue;  // accidentally flat-foldable
        }

        const int count = enumerate_mv_assignments(sa);
        if (want_kawasaki) {
            CHECK(count > 0);
        } else {
            CHECK(count == 0);
        }
    }
}

TEST_CASE("every oracle-valid labeling passes maekawa and blb") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 2 * (2 + trial % 3);
        const auto angles = random_kawasaki_angles(n, rng);
        for (uint32_t mask = 0; mask < (1u << n); ++mask) {
            std::vector<Assignment> labeling(static_cast<size_t>(n));
            int m = 0;
            for (int i = 0; i < n; ++i) {
                labeling[static_cast<size_t>(i)] =
                    (mask >> i) & 1 ? Assignment::M : Assignment::V;
                m += (mask >> i) & 1 ? 1 : -1;
            }
            if (!single_vertex_folds_flat(angles, labeling)) continue;
            CHECK(std::abs(m) == 2);
            // Strict minima must be bounded by opposite creases.
            for (int i = 0; i < n; ++i) {
                const double prev = angles[static_cast<size_t>((i + n - 1) % n)];
                const double next = angles[static_cast<size_t>((i + 1) % n)];
                if (angles[static_cast<size_t>(i)] < prev - 1e-6 &&
                    angles[static_cast<size_t>(i)] < next - 1e-6) {
                    CHECK(labeling[static_cast<size_t>(i)] !=
                          labeling[static_cast<size_t>((i + 1) % n)]);
                }
            }
        }
    }
}
