#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "cpforge/bench.hpp"
#include "cpforge/cp_model.hpp"
#include "cpforge/evaluator.hpp"
#include "cpforge/folder.hpp"
#include "cpforge/session.hpp"
#include "cpforge/svg.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCompileError = 1;
constexpr int kExitIo = 2;

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return true;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) return false;
    out << content;
    return static_cast<bool>(out);
}

void print_diagnostics(const std::vector<cpforge::Diagnostic>& diags) {
    for (const auto& d : diags) std::cerr << cpforge::render_diagnostic(d) << "\n";
}

std::string format_score(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

struct CommonOptions {
    std::string mode = "full";
    double k = 5.0;
    int layer_cap = 64;
    std::string out;

    cpforge::EvalConfig eval() const {
        cpforge::EvalConfig config;
        config.paper_faithful = mode == "paper-faithful";
        config.k_sensitivity = k;
        config.fold.layer_cap = layer_cap;
        return config;
    }
};

int cmd_validate(const std::string& path, const CommonOptions& opts) {
    const auto text = read_file(path);
    if (!text) {
        std::cerr << "cannot read " << path << "\n";
        return kExitIo;
    }
    const cpforge::ParseResult parsed = cpforge::parse_cp(*text);
    cpforge::ValidationReport report;
    if (!parsed.ok()) {
        report.valid = false;
        report.diagnostics = parsed.diagnostics;
    } else {
        report = cpforge::validate_structure(*parsed.cp);
        // Keep parser notes (e.g. reoriented faces) in the report.
        report.diagnostics.insert(report.diagnostics.begin(), parsed.diagnostics.begin(),
                                  parsed.diagnostics.end());
    }
    print_diagnostics(report.diagnostics);
    if (!opts.out.empty() &&
        !write_output(opts.out, cpforge::validation_report_to_json(report).dump(2) + "\n")) {
        std::cerr << "cannot write " << opts.out << "\n";
        return kExitIo;
    }
    return report.valid ? kExitOk : kExitCompileError;
}

int cmd_fold(const std::string& path, const CommonOptions& opts) {
    const auto text = read_file(path);
    if (!text) {
        std::cerr << "cannot read " << path << "\n";
        return kExitIo;
    }
    const cpforge::ParseResult parsed = cpforge::parse_cp(*text);
    if (!parsed.ok()) {
        print_diagnostics(parsed.diagnostics);
        return kExitCompileError;
    }
    const cpforge::FoldResult result = cpforge::fold(*parsed.cp, opts.eval().fold);
    if (!result.ok()) {
        print_diagnostics(result.diagnostics);
        return kExitCompileError;
    }
    const std::string doc =
        cpforge::folded_state_to_json(*parsed.cp, *result.state).dump(2) + "\n";
    if (!write_output(opts.out, doc)) {
        std::cerr << "cannot write " << opts.out << "\n";
        return kExitIo;
    }
    return kExitOk;
}

int cmd_score(const std::string& gen_path, const std::string& ref_path,
              const CommonOptions& opts) {
    const auto gen_text = read_file(gen_path);
    const auto ref_text = read_file(ref_path);
    if (!gen_text || !ref_text) {
        std::cerr << "cannot read input files\n";
        return kExitIo;
    }
    const cpforge::ScoreResult result =
        cpforge::score_documents(*gen_text, *ref_text, opts.eval());
    if (!result.ok()) {
        print_diagnostics(result.diagnostics);
        return kExitCompileError;
    }
    const std::string doc = cpforge::score_report_to_json(*result.report).dump(2) + "\n";
    if (!opts.out.empty()) {
        if (!write_output(opts.out, doc)) {
            std::cerr << "cannot write " << opts.out << "\n";
            return kExitIo;
        }
    } else {
        std::cout << doc;
    }
    std::cout << "S_total=" << format_score(result.report->total) << "\n";
    return kExitOk;
}

int cmd_render(const std::string& path, const CommonOptions& opts) {
    const auto text = read_file(path);
    if (!text) {
        std::cerr << "cannot read " << path << "\n";
        return kExitIo;
    }
    std::string svg;
    nlohmann::ordered_json doc = nlohmann::ordered_json::parse(*text, nullptr, false);
    if (doc.is_object() && doc.contains("P")) {
        svg = cpforge::render_folded_svg(doc);
    } else {
        const cpforge::ParseResult parsed = cpforge::parse_cp(*text);
        if (!parsed.ok()) {
            print_diagnostics(parsed.diagnostics);
            return kExitCompileError;
        }
        svg = cpforge::render_cp_svg(*parsed.cp);
    }
    if (!write_output(opts.out, svg)) {
        std::cerr << "cannot write " << opts.out << "\n";
        return kExitIo;
    }
    return kExitOk;
}

int cmd_session(const std::string& ref_path, const CommonOptions& opts, int rounds,
                const cpforge::SessionConfig& reward_config) {
    const auto text = read_file(ref_path);
    if (!text) {
        std::cerr << "cannot read " << ref_path << "\n";
        return kExitIo;
    }
    const cpforge::ParseResult parsed = cpforge::parse_cp(*text);
    if (!parsed.ok()) {
        print_diagnostics(parsed.diagnostics);
        return kExitCompileError;
    }
    cpforge::SessionConfig config = reward_config;
    config.round_cap = rounds;
    config.eval = opts.eval();
    auto created = cpforge::Session::create(*parsed.cp, config);
    if (!created.ok()) {
        print_diagnostics(created.diagnostics);
        return kExitCompileError;
    }
    cpforge::Session& session = *created.session;

    std::ofstream transcript;
    if (!opts.out.empty()) {
        transcript.open(opts.out, std::ios::app);
        if (!transcript) {
            std::cerr << "cannot open transcript " << opts.out << "\n";
            return kExitIo;
        }
    }

    std::string line;
    while (std::getline(std::cin, line)) {
        if (line.empty()) continue;
        nlohmann::ordered_json request = nlohmann::ordered_json::parse(line, nullptr, false);
        nlohmann::ordered_json response;
        if (request.is_discarded()) {
            cpforge::Feedback fb;
            fb.done = session.done();
            fb.rounds_remaining = config.round_cap - session.round();
            fb.diagnostics.emplace_back("E_CP_SYNTAX_UNEXPECTED_TOKEN",
                                        "request line is not valid JSON");
            response = cpforge::feedback_to_json(fb);
        } else {
            const cpforge::ActionParse parsed_action = cpforge::action_from_json(request);
            if (!parsed_action.action) {
                cpforge::Feedback fb;
                fb.done = session.done();
                fb.rounds_remaining = config.round_cap - session.round();
                fb.diagnostics.emplace_back("E_CP_SYNTAX_UNKNOWN_COMMAND", parsed_action.error);
                response = cpforge::feedback_to_json(fb);
            } else {
                response = cpforge::feedback_to_json(session.apply(*parsed_action.action));
            }
        }
        std::cout << response.dump() << "\n" << std::flush;
        if (transcript.is_open()) {
            nlohmann::ordered_json record;
            record["request"] = request.is_discarded() ? nlohmann::ordered_json(line) : request;
            record["response"] = response;
            transcript << record.dump() << "\n" << std::flush;
        }
        if (session.done()) break;
    }
    return kExitOk;
}

int cmd_bench(const std::string& dir, const CommonOptions& opts, int jobs) {
    cpforge::bench::BenchConfig config;
    config.eval = opts.eval();
    config.jobs = jobs;
    const cpforge::bench::BenchReport report = cpforge::bench::run(dir, config);
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
    const std::string doc = cpforge::bench::bench_report_to_json(report).dump(2) + "\n";
    if (!opts.out.empty()) {
        if (!write_output(opts.out, doc)) {
            std::cerr << "cannot write " << opts.out << "\n";
            return kExitIo;
        }
    } else {
        std::cout << doc;
    }
    std::cout << "CPR=" << format_score(report.aggregate.cpr)
              << " mean_total=" << format_score(report.aggregate.mean_total) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cpforge: crease-pattern compiler and evaluation toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    CommonOptions opts;
    if (const char* env_mode = std::getenv("CPFORGE_MODE")) opts.mode = env_mode;
    app.add_option("--mode", opts.mode, "evaluator mode")
        ->check(CLI::IsMember({"full", "paper-faithful"}))
        ->capture_default_str();
    app.add_option("--k", opts.k, "Hausdorff sensitivity coefficient")->capture_default_str();
    app.add_option("--layer-cap", opts.layer_cap, "max layers per overlap cell")
        ->capture_default_str();
    app.add_option("--out", opts.out, "output path (default: stdout)");

    std::string in_path, gen_path, ref_path, dir_path;
    int rounds = 10;
    int jobs = 1;
    cpforge::SessionConfig reward_defaults;

    auto* validate = app.add_subcommand("validate", "parse and structurally validate a CP file");
    validate->add_option("file", in_path)->required();

    auto* fold = app.add_subcommand("fold", "compile a CP to its flat-folded state");
    fold->add_option("file", in_path)->required();

    auto* score = app.add_subcommand("score", "score a generated CP against a reference CP");
    score->add_option("gen", gen_path)->required();
    score->add_option("ref", ref_path)->required();

    auto* render = app.add_subcommand("render", "render a CP or folded export as SVG");
    render->add_option("file", in_path)->required();

    auto* session = app.add_subcommand("session", "interactive line-protocol session");
    session->add_option("ref", ref_path)->required();
    session->add_option("--rounds", rounds, "interaction round cap")->capture_default_str();
    session->add_option("--b-success", reward_defaults.b_success, "compile success bonus")
        ->capture_default_str();
    session->add_option("--p-fail", reward_defaults.p_fail, "compile failure penalty")
        ->capture_default_str();
    session->add_option("--c-step", reward_defaults.c_step, "per-action step cost")
        ->capture_default_str();

    auto* bench = app.add_subcommand("bench", "score every *.gen.cp/*.ref.cp pair in a directory");
    bench->add_option("dir", dir_path)->required();
    bench->add_option("--jobs", jobs, "concurrent pair workers")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    if (validate->parsed()) return cmd_validate(in_path, opts);
    if (fold->parsed()) return cmd_fold(in_path, opts);
    if (score->parsed()) return cmd_score(gen_path, ref_path, opts);
    if (render->parsed()) return cmd_render(in_path, opts);
    if (session->parsed()) return cmd_session(ref_path, opts, rounds, reward_defaults);
    if (bench->parsed()) return cmd_bench(dir_path, opts, jobs);
    return kExitOk;
}
