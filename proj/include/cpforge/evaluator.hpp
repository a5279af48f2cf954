#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cpforge/cp_model.hpp"
#include "cpforge/folder.hpp"

namespace cpforge {

struct EvalConfig {
    // paper-faithful mode: constant 0.5 layer score and raw-index constraint
    // comparison; full mode matches constraints geometrically and compares
    // the solved layer orders.
    bool paper_faithful = false;
    double k_sensitivity = 5.0;
    FoldConfig fold;
};

// Flat fallback constants used across the pipeline.
inline constexpr double kLowScore = 0.2;       // missing data / failed gate
inline constexpr double kFailureScore = 0.3;   // failed compile / internal failure
inline constexpr double kNeutralScore = 0.5;   // no comparable signal

// Normalized L1 distance between the CDFs of two equal-length histograms.
// All-zero histograms count as uniform. Throws on length mismatch.
double wasserstein_1d(const std::vector<double>& h1, const std::vector<double>& h2);

// Exact bidirectional Hausdorff distance. Throws on empty input.
double hausdorff_bidirectional(const std::vector<std::array<double, 3>>& a,
                               const std::vector<std::array<double, 3>>& b);

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

// Centroid to the origin, max radius scaled to 1 (degenerate sets stay put).
std::vector<std::array<double, 3>> normalize_points(std::vector<std::array<double, 3>> pts);

struct TssReport {
    double s_v = 0, s_degree = 0, s_conn = 0, s_edge = 0;
    double s_fcount = 0, s_favgv = 0, s_fdist = 0, s_face = 0;
    double s_mountain = 0, s_valley = 0, s_border = 0, p_length = 0, s_crease = 0;
    double total = 0;
};

struct GsReport {
    double s_point = 0, s_angle = 0, s_size = 0;
    double total = 0;
};

struct CsReport {
    double s_tt = 0, s_tto = 0, s_trans = 0;
    double s_kawasaki = 0, s_maekawa = 0, s_flatfold = 0;
    double total = 0;
};

struct FfsReport {
    double s_shape = 0, s_layer = 0;
    double total = 0;
};

struct ScoreReport {
    TssReport tss;
    GsReport gs;
    CsReport cs;
    FfsReport ffs;
    double s_topological = 0, s_geometric = 0, s_foldability = 0, s_final_state = 0;
    double total = 0;
    std::vector<std::string> fired_fallbacks;
    bool paper_faithful = false;
    double k_sensitivity = 5.0;
};

// Folding outcome of one comparison side, with the simplified fallback
// (original 2D coordinates, z = 0) when the full fold fails.
struct SideState {
    bool structure_valid = false;
    bool locally_foldable = false;
    bool folded = false;
    bool simplified = false;
    std::optional<FoldedState> state;    // full fold result
    std::optional<FoldedState> partial;  // transforms/cells for failed folds
    std::vector<std::array<double, 3>> points;
    std::vector<double> dihedrals;
    std::vector<Diagnostic> diagnostics;
};

SideState prepare_side(const CreasePattern& cp, const EvalConfig& config);

TssReport score_topological(const CreasePattern& gen, const CreasePattern& ref);
GsReport score_geometric(const SideState& gen, const SideState& ref,
                         const EvalConfig& config, std::vector<std::string>& fired);
CsReport score_constraints(const CreasePattern& gen_cp, const SideState& gen,
                           const CreasePattern& ref_cp, const SideState& ref,
                           const EvalConfig& config, std::vector<std::string>& fired);
FfsReport score_final_state(const CreasePattern& gen_cp, const SideState& gen,
                            const CreasePattern& ref_cp, const SideState& ref,
                            const EvalConfig& config, std::vector<std::string>& fired);

ScoreReport score_total(const CreasePattern& gen, const CreasePattern& ref,
                        const EvalConfig& config = {});

struct ScoreResult {
    std::optional<ScoreReport> report;
    std::vector<Diagnostic> diagnostics;  // CSE records when gen is unparsable
    bool ok() const { return report.has_value(); }
};

// Document-level entry: parses both sides; an unparsable generated document
// yields diagnostics instead of a score.
ScoreResult score_documents(std::string_view gen_text, std::string_view ref_text,
                            const EvalConfig& config = {});

nlohmann::ordered_json score_report_to_json(const ScoreReport& r);

}  // namespace cpforge
