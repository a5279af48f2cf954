#pragma once

#include <optional>
#include <vector>

#include "cpforge/cp_model.hpp"
#include "cpforge/diagnostics.hpp"

namespace cpforge {

// Sector angles around a vertex: consecutive counterclockwise gaps between
// the given incident creases. `creases` are edge ids ordered to match
// `angles` (angles[i] lies between creases[i] and creases[i+1], cyclically).
struct SectorAngles {
    int vertex = -1;
    std::vector<int> creases;
    std::vector<double> angles;
};

struct VertexFoldReport {
    int vertex = -1;
    bool applicable = true;  // false for boundary vertices / no creases
    int mountains = 0;
    int valleys = 0;
    bool maekawa_ok = true;
    bool kawasaki_ok = true;
    bool blb_ok = true;
    std::pair<double, double> alternating_sums = {0.0, 0.0};
    std::optional<Diagnostic> diagnostic;
};

// Sectors between the full incident edge fan (all assignments). For boundary
// vertices only the sectors covered by incident faces are kept.
// Degenerate (zero-length) incident edges yield a GIF diagnostic.
struct SectorResult {
    std::optional<SectorAngles> sectors;
    std::optional<Diagnostic> diagnostic;
};
SectorResult sector_angles(const CreasePattern& cp, int vertex);

// Sectors between folded (M/V) creases only; the basis for the
// Kawasaki / big-little-big checks and the single-vertex oracle.
SectorResult folded_sector_angles(const CreasePattern& cp, int vertex);

VertexFoldReport check_maekawa(const CreasePattern& cp, int vertex);
VertexFoldReport check_kawasaki(const CreasePattern& cp, int vertex);
bool check_big_little_big(const CreasePattern& cp, int vertex);

// Runs all local flat-foldability laws on every interior vertex and emits one
// E_GEOM_ANGLE_CONSTRAINT_VIOLATION per failing vertex.
std::vector<Diagnostic> check_flat_foldable_all(const CreasePattern& cp);

// Exact single-vertex decision: does this cyclic (angles, assignment) fold
// flat? Uses backtracking crimp reduction.
bool single_vertex_folds_flat(const std::vector<double>& angles,
                              const std::vector<Assignment>& creases);

// Brute-force count of flat-foldable M/V labelings of the vertex's creases.
// Throws std::invalid_argument beyond 16 creases.
int enumerate_mv_assignments(const SectorAngles& sectors);

}  // namespace cpforge
