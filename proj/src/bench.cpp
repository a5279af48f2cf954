#include "cpforge/bench.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "cpforge/folder.hpp"

namespace cpforge::bench {

namespace {

const std::vector<std::string>& category_names() {
    static const std::vector<std::string> names = {"CSE", "GIF", "PSI", "AFS"};
    return names;
}

std::optional<std::string> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

PairOutcome score_pair(const std::string& name, const std::string& gen_text,
                       const std::string& ref_text, const EvalConfig& eval) {
    PairOutcome out;
    out.name = name;
    for (const auto& c : category_names()) out.error_present[c] = false;

    const ParseResult gen = parse_cp(gen_text);
    if (!gen.ok()) {
        out.error_present["CSE"] = true;
        return out;
    }
    // Classify compile errors on the generated side.
    const ValidationReport vr = validate_structure(*gen.cp);
    std::vector<Diagnostic> compile_diags = vr.diagnostics;
    if (vr.valid) {
        const FoldResult fr = fold(*gen.cp, eval.fold);
        compile_diags.insert(compile_diags.end(), fr.diagnostics.begin(), fr.diagnostics.end());
        out.compiled = fr.ok();
    }
    for (const auto& d : compile_diags) {
        if (d.severity == Severity::Error) {
            out.error_present[std::string(to_string(d.category))] = true;
        }
    }

    const ParseResult ref = parse_cp(ref_text);
    if (!ref.ok()) {
        out.skipped = true;
        out.skip_reason = "reference does not parse";
        return out;
    }
    out.report = score_total(*gen.cp, *ref.cp, eval);
    return out;
}

Aggregate aggregate_outcomes(const std::vector<PairOutcome>& outcomes) {
    Aggregate agg;
    agg.pairs = static_cast<int>(outcomes.size());
    int processed = 0, compiled = 0;
    std::map<std::string, int> error_counts;
    for (const auto& c : category_names()) error_counts[c] = 0;
    double sum_tss = 0, sum_gs = 0, sum_cs = 0, sum_ffs = 0, sum_total = 0;
    for (const auto& o : outcomes) {
        if (o.skipped) {
            ++agg.skipped;
            continue;
        }
        ++processed;
        if (o.compiled) ++compiled;
        for (const auto& [cat, present] : o.error_present) {
            if (present) ++error_counts[cat];
        }
        if (o.report) {
            ++agg.scored;
            sum_tss += o.report->s_topological;
            sum_gs += o.report->s_geometric;
            sum_cs += o.report->s_foldability;
            sum_ffs += o.report->s_final_state;
            sum_total += o.report->total;
        }
    }
    if (processed > 0) {
        agg.cpr = static_cast<double>(compiled) / processed;
        for (const auto& [cat, count] : error_counts) {
            agg.incidence[cat] = static_cast<double>(count) / processed;
            agg.free_of[cat] = 1.0 - agg.incidence[cat];
        }
    }
    if (agg.scored > 0) {
        agg.mean_tss = sum_tss / agg.scored;
        agg.mean_gs = sum_gs / agg.scored;
        agg.mean_cs = sum_cs / agg.scored;
        agg.mean_ffs = sum_ffs / agg.scored;
        agg.mean_total = sum_total / agg.scored;
    }
    return agg;
}

BenchReport run(const std::filesystem::path& dir, const BenchConfig& config) {
    BenchReport report;
    std::set<std::string> names;
    if (std::filesystem::is_directory(dir)) {
        for (const auto& entry : std::filesystem::directory_iterator(dir)) {
            const std::string fname = entry.path().filename().string();
            const std::string suffix = ".gen.cp";
            if (fname.size() > suffix.size() &&
                fname.compare(fname.size() - suffix.size(), suffix.size(), suffix) == 0) {
                names.insert(fname.substr(0, fname.size() - suffix.size()));
            }
        }
    } else {
        report.warnings.push_back("not a directory: " + dir.string());
    }
    if (names.empty()) {
        report.warnings.push_back("no <name>.gen.cp / <name>.ref.cp pairs found");
        report.aggregate = aggregate_outcomes({});
        return report;
    }

    const std::vector<std::string> ordered(names.begin(), names.end());
    std::vector<PairOutcome> outcomes(ordered.size());
    std::atomic<size_t> cursor{0};
    auto worker = [&] {
        for (size_t i = cursor.fetch_add(1); i < ordered.size(); i = cursor.fetch_add(1)) {
            const std::string& name = ordered[i];
            const auto gen_text = read_file(dir / (name + ".gen.cp"));
            const auto ref_text = read_file(dir / (name + ".ref.cp"));
            if (!gen_text || !ref_text) {
                outcomes[i].name = name;
                outcomes[i].skipped = true;
                outcomes[i].skip_reason = "missing or unreadable pair file";
                continue;
            }
            outcomes[i] = score_pair(name, *gen_text, *ref_text, config.eval);
        }
    };
    const int jobs = std::max(1, config.jobs);
    std::vector<std::thread> pool;
    for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    for (const auto& o : outcomes) {
        if (o.skipped) report.warnings.push_back("skipped " + o.name + ": " + o.skip_reason);
    }
    report.pairs = std::move(outcomes);
    report.aggregate = aggregate_outcomes(report.pairs);
    return report;
}

nlohmann::ordered_json bench_report_to_json(const BenchReport& report) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
    for (const auto& o : report.pairs) {
        nlohmann::ordered_json p;
        p["name"] = o.name;
        if (o.skipped) {
            p["skipped"] = true;
            p["reason"] = o.skip_reason;
        } else {
            p["compiled"] = o.compiled;
            nlohmann::ordered_json errors = nlohmann::ordered_json::object();
            for (const auto& [cat, present] : o.error_present) errors[cat] = present;
            p["errors"] = std::move(errors);
            if (o.report) p["score"] = score_report_to_json(*o.report);
        }
        pairs.push_back(std::move(p));
    }
    j["pairs"] = std::move(pairs);
    nlohmann::ordered_json agg;
    agg["pairs"] = report.aggregate.pairs;
    agg["skipped"] = report.aggregate.skipped;
    agg["scored"] = report.aggregate.scored;
    agg["cpr"] = report.aggregate.cpr;
    nlohmann::ordered_json incidence = nlohmann::ordered_json::object();
    nlohmann::ordered_json free_of = nlohmann::ordered_json::object();
    for (const auto& [cat, v] : report.aggregate.incidence) incidence[cat] = v;
    for (const auto& [cat, v] : report.aggregate.free_of) free_of[cat] = v;
    agg["error_incidence"] = std::move(incidence);
    agg["free_of_error"] = std::move(free_of);
    agg["mean"] = {{"TSS", report.aggregate.mean_tss},
                   {"GS", report.aggregate.mean_gs},
                   {"CS", report.aggregate.mean_cs},
                   {"FFS", report.aggregate.mean_ffs},
                   {"Total", report.aggregate.mean_total}};
    j["aggregate"] = std::move(agg);
    j["warnings"] = report.warnings;
    return j;
}

}  // namespace cpforge::bench
