#pragma once

#include <string>
#include <vector>

#include "cpforge/cp_model.hpp"

namespace cpforge::fixtures {

struct CreaseSpec {
    geom::Vec2 a;
    geom::Vec2 b;
    Assignment assign;
};

// Builds a structurally valid CP from a boundary polygon plus interior
// creases: planar subdivision, face extraction, B on the boundary.
CreasePattern build_cp(const geom::Polygon& boundary, const std::vector<CreaseSpec>& creases);

CreasePattern unit_square();
CreasePattern square_with_diagonal(Assignment a);
CreasePattern half_fold_vertical(Assignment a);
CreasePattern half_fold_horizontal(Assignment a);
CreasePattern accordion(int panels, const std::vector<Assignment>& pattern);
// Four creases from the sheet center at the given bearings (degrees).
CreasePattern center_vertex(const std::vector<double>& bearings_deg,
                            const std::vector<Assignment>& assigns);
CreasePattern plus_vertex(const std::vector<Assignment>& assigns);
CreasePattern gate_fold(Assignment a);
// Two overlapping door flaps with no hinge crossing: layer order is
// underdetermined (AFS).
CreasePattern two_flap_ambiguous();
// Opposite corner flaps folded past each other's hinge: taco-tortilla
// constraints force both orders at once (PSI).
CreasePattern crossing_flaps();
// Valley at 0.5 plus mountain at 0.75: a crease lands strictly inside the
// base panel, producing one taco-tortilla constraint.
CreasePattern asym_fold();
// Single vertex passing every local law whose assignment admits no layer
// ordering (PSI).
CreasePattern unfoldable_vertex();
// Square with everything flat (F creases only) through an interior vertex.
CreasePattern flat_plus();
// Maekawa violation at the central vertex.
CreasePattern maekawa_violation();
// Kawasaki violation (alternating sums 190/170 degrees) with Maekawa intact.
CreasePattern kawasaki_violation();
// Strict-minimum sector bounded by equal assignments, Maekawa and Kawasaki intact.
CreasePattern blb_violation();
// Structurally broken: interior edge not covered by any face (Euler intact).
CreasePattern dangling_edge();

// Foldable fixtures with unique layer order and at least one folded crease.
const std::vector<std::pair<std::string, CreasePattern>>& golden_corpus();

}  // namespace cpforge::fixtures
