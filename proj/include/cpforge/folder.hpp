#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cpforge/cp_model.hpp"
#include "cpforge/diagnostics.hpp"
#include "cpforge/foldability.hpp"
#include "cpforge/geometry.hpp"

namespace cpforge {

struct FoldConfig {
    int layer_cap = 64;            // max faces stacked over any overlap cell
    bool auto_complete_mv = false; // try M/V completions for U edges
};

// A folded crease segment tagged with its source edge.
struct FoldedSegment {
    int v0 = -1;
    int v1 = -1;
    int source_edge = -1;
};

// One maximal overlap cell: outline polygon plus the covering faces ordered
// top to bottom once the layer order is solved.
struct OverlapCell {
    geom::Polygon outline;
    std::vector<int> faces;  // top to bottom
};

enum class ConstraintKind { TacoTaco, TacoTortilla, Transitivity };

std::string_view to_string(ConstraintKind k);

struct OverlapConstraint {
    ConstraintKind kind = ConstraintKind::Transitivity;
    std::vector<int> faces;  // canonical (sorted) order
    std::vector<int> edges;  // participating folded edge ids, sorted
    // Canonical geometric footprint, quantized to 1e-6.
    geom::Vec2 centroid{0, 0};
    double extent = 0.0;

    bool operator==(const OverlapConstraint&) const = default;
    bool operator<(const OverlapConstraint& o) const;
};

struct FoldedState {
    // Folded vertex positions; z = stacking level of the face used to map it.
    std::vector<std::array<double, 3>> points;          // P
    std::vector<FoldedSegment> segments;                // SP
    std::vector<geom::PlanarIsometry> face_isometries;
    std::vector<OverlapCell> cells;                     // CF
    // Pairwise layer order over overlapping faces: above[a][b] == 1 means face
    // a lies above face b (0 below, -1 not comparable).
    std::vector<std::vector<int>> above;
    std::vector<int> face_levels;  // 0 = bottom-most
    std::vector<OverlapConstraint> constraints;

    int face_count() const { return static_cast<int>(face_isometries.size()); }
};

struct FoldResult {
    std::optional<FoldedState> state;
    std::vector<Diagnostic> diagnostics;
    // Transforms and overlap cells survive layer-solve failures so that
    // constraint extraction still works on PSI/AFS patterns.
    std::optional<FoldedState> partial;
    bool ok() const { return state.has_value(); }
};

struct TransformResult {
    std::vector<geom::PlanarIsometry> isometries;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return diagnostics.empty(); }
};

// Per-face isometries by breadth-first traversal of the face-adjacency dual;
// M/V creases reflect, B/F/U do not. Checks dual-cycle closure.
TransformResult compute_face_transforms(const CreasePattern& cp);

enum class LayerVerdict { Unique, Unsatisfiable, Ambiguous };

struct LayerSolution {
    LayerVerdict verdict = LayerVerdict::Unique;
    // First solution when one exists.
    std::vector<std::vector<int>> above;
    // Second solution's differing pair for AFS reporting.
    std::pair<int, int> ambiguous_pair{-1, -1};
    std::vector<int> conflict_faces;  // cycle or unsatisfiable cell for PSI
    int solutions_found = 0;
};

// The pairwise layer-ordering problem the solver works on. Public so the test
// suite can cross-check the solver against exhaustive permutation search.
struct LayerOrderProblem {
    int face_count = 0;
    std::vector<std::pair<int, int>> pairs;         // overlapping, a < b
    std::vector<std::pair<int, int>> forced_above;  // first above second
    std::vector<std::array<int, 3>> triples;        // mutually overlapping
    std::vector<std::array<int, 4>> tacotacos;      // a1,a2,b1,b2
    std::vector<std::array<int, 3>> tacotortillas;  // f1,f2,g
};

// Builds the layer problem for a CP whose transforms succeed.
std::optional<LayerOrderProblem> build_layer_order_problem(const CreasePattern& cp);

LayerSolution solve_layer_order(const LayerOrderProblem& p);

// Checks a full pairwise assignment (above[a][b] in {1,0} over problem pairs)
// against every constraint including global acyclicity.
bool layer_order_satisfies(const LayerOrderProblem& p,
                           const std::vector<std::vector<int>>& above);

// The full compile: local law checks, face transforms, folded geometry,
// overlap cells, layer order, CF stacks.
FoldResult fold(const CreasePattern& cp, const FoldConfig& config = {});

// Dihedral angle per non-boundary crease, in degrees: 0 when the adjacent
// faces have opposite parity, 180 when equal. Ordered by edge id.
std::vector<double> dihedral_angles(const CreasePattern& cp, const FoldedState& state);

// Geometric constraint extraction from a folded (or partially folded) state.
std::vector<OverlapConstraint> extract_constraints(const CreasePattern& cp,
                                                   const FoldedState& state);

nlohmann::ordered_json folded_state_to_json(const CreasePattern& cp, const FoldedState& state);

}  // namespace cpforge
