#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cpforge/cp_model.hpp"
#include "cpforge/evaluator.hpp"

namespace cpforge {

struct SessionConfig {
    double b_success = 0.05;  // base reward for a successful compile
    double p_fail = 0.10;     // penalty for a failed compile
    double c_step = 0.01;     // per-action step cost
    int round_cap = 10;
    EvalConfig eval;
};

enum class ActionType { AddCrease, RemoveCrease, SetAssignment, Compile, Finish };

std::string_view to_string(ActionType t);

struct Action {
    ActionType type = ActionType::Compile;
    geom::Vec2 a{0, 0};  // add_crease endpoints
    geom::Vec2 b{0, 0};
    Assignment assign = Assignment::U;
    int edge = -1;     // remove_crease / set_assignment target
    std::string note;  // free-form, ignored semantically
};

struct Feedback {
    std::vector<Diagnostic> diagnostics;
    std::optional<double> partial_score;
    double reward = 0.0;
    int rounds_remaining = 0;
    bool done = false;
};

struct LedgerEntry {
    int round = 0;
    std::string action;
    double reward = 0.0;
    bool compile_ok = false;
};

// Intermediate reward: progress plus the base success bonus on a clean
// compile, a fixed penalty otherwise; every action pays the step cost.
// An unset previous partial counts as 0.
double compute_reward(std::optional<double> prev_partial, double new_partial,
                      bool compile_ok, const SessionConfig& config);

struct SessionCreateResult;

class Session {
public:
    // Refuses references that do not validate and fold.
    static SessionCreateResult create(CreasePattern reference, SessionConfig config = {});

    Feedback apply(const Action& action);

    struct FinalResult {
        double reward = 0.0;
        ScoreReport report;
    };
    FinalResult final_score() const;

    const CreasePattern& draft() const { return draft_; }
    const CreasePattern& reference() const { return reference_; }
    const std::vector<LedgerEntry>& ledger() const { return ledger_; }
    int round() const { return round_; }
    bool done() const { return done_; }
    std::optional<double> prev_partial() const { return prev_partial_; }
    const SessionConfig& config() const { return config_; }

private:
    Session(CreasePattern draft, CreasePattern reference, SessionConfig config)
        : draft_(std::move(draft)), reference_(std::move(reference)),
          config_(std::move(config)) {}

    Feedback edit_feedback(const Action& action, std::vector<Diagnostic> diagnostics);
    void finish_round(const std::string& action, double reward, bool ok);

    CreasePattern draft_;
    CreasePattern reference_;
    SessionConfig config_;
    int round_ = 0;
    bool done_ = false;
    std::optional<double> prev_partial_;
    std::vector<LedgerEntry> ledger_;
};

struct SessionCreateResult {
    std::optional<Session> session;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return session.has_value(); }
};

// Line protocol: one JSON request per line in, one JSON feedback per line out.
struct ActionParse {
    std::optional<Action> action;
    std::string error;
};
ActionParse action_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json action_to_json(const Action& a);
nlohmann::ordered_json feedback_to_json(const Feedback& f);

}  // namespace cpforge
