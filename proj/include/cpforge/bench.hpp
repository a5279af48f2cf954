#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cpforge/evaluator.hpp"

namespace cpforge::bench {

struct BenchConfig {
    EvalConfig eval;
    int jobs = 1;
};

struct PairOutcome {
    std::string name;
    bool skipped = false;      // unreadable / missing half of the pair
    std::string skip_reason;
    bool compiled = false;     // generated CP parses, validates and folds clean
    std::map<std::string, bool> error_present;  // per category, generated side
    std::optional<ScoreReport> report;
};

struct Aggregate {
    int pairs = 0;
    int skipped = 0;
    int scored = 0;
    double cpr = 0.0;  // compiled / processed
    std::map<std::string, double> incidence;  // fraction with each error class
    std::map<std::string, double> free_of;    // complement, as in the benchmark table
    double mean_tss = 0.0, mean_gs = 0.0, mean_cs = 0.0, mean_ffs = 0.0, mean_total = 0.0;
};

struct BenchReport {
    std::vector<PairOutcome> pairs;
    Aggregate aggregate;
    std::vector<std::string> warnings;
};

// Scores every <name>.gen.cp / <name>.ref.cp pair in the directory,
// concurrently up to config.jobs; the aggregate is independent of job count.
BenchReport run(const std::filesystem::path& dir, const BenchConfig& config = {});

// Classifies one generated/reference document pair (the per-pair pipeline).
PairOutcome score_pair(const std::string& name, const std::string& gen_text,
                       const std::string& ref_text, const EvalConfig& eval);

Aggregate aggregate_outcomes(const std::vector<PairOutcome>& outcomes);

nlohmann::ordered_json bench_report_to_json(const BenchReport& report);

}  // namespace cpforge::bench
