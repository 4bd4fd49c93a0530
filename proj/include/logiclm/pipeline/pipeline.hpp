#pragma once

// Per-problem pipeline: formulate with a provider, parse, solve with the
// matching engine, feed parse or solver errors back through refinement
// prompts for a bounded number of rounds, then interpret the verdict.

#include "../csp_engine.hpp"
#include "../fol/resolution.hpp"
#include "../fol_problem.hpp"
#include "../lp_engine.hpp"
#include "interpret.hpp"
#include "prompt.hpp"
#include "provider.hpp"

#include <json.hpp>

namespace logiclm::pipeline {

using Clock = std::chrono::steady_clock;
using ParsedForm = std::variant<std::monostate, lp::LpProgram, fol::FolProblem, csp::CspModel>;

struct Formulation {
    int round = 0;
    std::string prompt;
    std::string raw_text;
    ParsedForm parsed;
    std::vector<ParseError> errors;
    std::vector<std::string> warnings;

    bool parsed_ok() const noexcept { return parsed.index() != 0; }
};

template <typename T>
void adopt(Formulation& f, ParseResult<T>&& r) {
    f.errors = std::move(r.errors);
    f.warnings = std::move(r.warnings);
    if (r.value && f.errors.empty()) f.parsed = std::move(*r.value);
}

inline void parse_into(Formulation& f, TaskKind kind) {
    switch (kind) {
    case TaskKind::Deductive: adopt(f, lp::parse_lp(f.raw_text)); break;
    case TaskKind::Fol: adopt(f, fol::parse_fol(f.raw_text)); break;
    case TaskKind::Csp: adopt(f, csp::parse_csp(f.raw_text)); break;
    }
}

inline std::string print_parsed(const ParsedForm& form) {
    if (const auto* p = std::get_if<lp::LpProgram>(&form)) return lp::print_lp(*p);
    if (const auto* p = std::get_if<fol::FolProblem>(&form)) return fol::print_fol(*p);
    if (const auto* p = std::get_if<csp::CspModel>(&form)) return csp::print_csp(*p);
    return "";
}

struct SolverOutcome {
    std::optional<Verdict> verdict;
    std::optional<std::string> execution_error;  // "<Kind>: <message>", refinable
    std::vector<std::string> warnings;
};

struct SymbolicLimits {
    lp::LpLimits lp;
    fol::ProverLimits fol;
    csp::CspLimits csp;
    double budget_seconds = 30.0;  // wall clock per solve; overruns give Unknown
};

/// Dispatches a parsed formulation to its engine.
inline SolverOutcome solve_symbolic(const ParsedForm& form, SymbolicLimits limits = {}) {
    SolverOutcome out;
    const auto deadline =
        Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(limits.budget_seconds));
    if (const auto* p = std::get_if<lp::LpProgram>(&form)) {
        limits.lp.deadline = deadline;
        auto answer = lp::lp_query(*p, limits.lp);
        out.warnings = std::move(answer.warnings);
        if (answer.error) out.execution_error = std::string(lp::to_string(answer.error->kind)) + ": " + answer.error->message;
        else out.verdict = answer.value;
    } else if (const auto* p = std::get_if<fol::FolProblem>(&form)) {
        limits.fol.deadline = deadline;
        std::vector<Formula> facts;
        for (const auto& s : p->facts) facts.push_back(s.formula);
        auto result = fol::resolve_entailment(facts, p->query.formula, limits.fol);
        out.warnings = std::move(result.warnings);
        if (result.error) out.execution_error = std::string(fol::to_string(result.error->kind)) + ": " + result.error->message;
        else out.verdict = result.value;
    } else if (const auto* m = std::get_if<csp::CspModel>(&form)) {
        limits.csp.deadline = deadline;
        auto solved = csp::solve_all(*m, limits.csp);
        std::map<char, TruthValue> per_option;
        for (const auto& o : m->options) {
            auto v = csp::evaluate_option(solved, o.expr);
            if (v.error) {
                out.execution_error = std::string(csp::to_string(v.error->kind)) + ": " + v.error->message;
                return out;
            }
            for (auto& w : v.warnings)
                if (std::find(out.warnings.begin(), out.warnings.end(), w) == out.warnings.end())
                    out.warnings.push_back(std::move(w));
            per_option[o.letter] = v.value;
        }
        out.verdict = std::move(per_option);
    } else {
        out.execution_error = "NoFormulation: nothing was parsed";
    }
    return out;
}

inline SolverOutcome solve_symbolic(const Formulation& f, const SymbolicLimits& limits = {}) {
    return solve_symbolic(f.parsed, limits);
}

struct TraceRound {
    int round = 0;
    std::string prompt;
    std::string response;
    std::vector<std::string> parse_errors;
    std::vector<std::string> parse_warnings;
    std::optional<std::string> execution_error;
    std::vector<std::string> solver_warnings;
    std::optional<std::string> provider_error;
    std::optional<Verdict> verdict;

    bool has_error() const noexcept { return !parse_errors.empty() || execution_error || provider_error; }
};

struct PipelineTrace {
    std::string problem_id;
    std::string dataset;
    TaskKind task_kind = TaskKind::Deductive;
    std::optional<char> gold_label;
    std::vector<TraceRound> rounds;
    std::optional<Verdict> verdict;
    Answer answer;
    std::size_t provider_calls = 0;
    double elapsed_ms = 0;

    bool correct() const noexcept { return gold_label && answer.letter == gold_label; }
    bool failed() const noexcept { return rounds.empty() || rounds.back().has_error(); }
};

struct PipelineConfig {
    ProviderConfig provider;
    int max_rounds = 3;
    BackoffPolicy backoff;
    SymbolicLimits limits;
    std::optional<std::string> template_id;  // overrides the per-dataset choice
};

inline std::string error_text(const TraceRound& r) {
    if (!r.parse_errors.empty()) {
        std::string out;
        for (const auto& e : r.parse_errors) out += (out.empty() ? "" : "\n") + e;
        return out;
    }
    if (r.execution_error) return *r.execution_error;
    return r.provider_error.value_or("");
}

class Pipeline {
public:
    Pipeline(Provider& provider, const TemplateLibrary& templates, PipelineConfig config)
        : provider_(provider), templates_(templates), config_(std::move(config)) {}

    const PipelineConfig& config() const noexcept { return config_; }

    /// Round-0 formulation. Provider failures propagate as ProviderError.
    Formulation formulate(const Problem& p) {
        const auto& t = config_.template_id ? templates_.get(*config_.template_id) : templates_.for_problem(p);
        Formulation f;
        f.prompt = build_prompt(p, t, config_.provider.num_examples);
        f.raw_text = provider_.complete({f.prompt, p.id, 0});
        parse_into(f, p.task_kind);
        return f;
    }

    /// Re-prompts with the erroneous program and its error until a round
    /// parses and solves cleanly or `max_rounds` refinements were made. Every
    /// round, including the incoming one, is appended to `trace`.
    Formulation self_refine(const Problem& p, Formulation f, PipelineTrace& trace) {
        TraceRound current = record(f);
        trace.rounds.push_back(current);
        while (current.has_error() && f.round < config_.max_rounds) {
            Formulation next;
            next.round = f.round + 1;
            next.prompt = build_refine_prompt(templates_.refinement(p.task_kind), f.raw_text, error_text(current),
                                              config_.provider.num_examples);
            ++trace.provider_calls;
            try {
                next.raw_text = provider_.complete({next.prompt, p.id, next.round});
            } catch (const ProviderError& e) {
                TraceRound failed;
                failed.round = next.round;
                failed.prompt = next.prompt;
                failed.provider_error = std::string("ProviderError: ") + e.what();
                trace.rounds.push_back(std::move(failed));
                throw;
            }
            parse_into(next, p.task_kind);
            f = std::move(next);
            current = record(f);
            trace.rounds.push_back(current);
        }
        return f;
    }

    PipelineTrace run(const Problem& p) {
        const auto start = Clock::now();
        PipelineTrace trace;
        trace.problem_id = p.id;
        trace.dataset = p.dataset;
        trace.task_kind = p.task_kind;
        trace.gold_label = p.gold_label;
        try {
            ++trace.provider_calls;
            Formulation f;
            try {
                f = formulate(p);
            } catch (const ProviderError& e) {
                TraceRound failed;
                failed.provider_error = std::string("ProviderError: ") + e.what();
                trace.rounds.push_back(std::move(failed));
                throw;
            }
            self_refine(p, std::move(f), trace);
        } catch (const ProviderError&) {
        } catch (const MissingTemplate& e) {
            if (trace.rounds.empty()) --trace.provider_calls;
            TraceRound failed;
            failed.round = trace.rounds.empty() ? 0 : trace.rounds.back().round + 1;
            failed.provider_error = std::string("MissingTemplate: ") + e.what();
            trace.rounds.push_back(std::move(failed));
        }
        const auto& last = trace.rounds.back();
        if (last.has_error()) {
            trace.answer = apply_backoff(p, config_.backoff,
                                         "no valid formulation after round " + std::to_string(last.round) + ": " +
                                             error_text(last));
        } else {
            trace.verdict = last.verdict;
            trace.answer = interpret(*last.verdict, p, config_.backoff);
        }
        trace.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
        return trace;
    }

private:
    TraceRound record(const Formulation& f) const {
        TraceRound r;
        r.round = f.round;
        r.prompt = f.prompt;
        r.response = f.raw_text;
        for (const auto& e : f.errors) r.parse_errors.push_back(render(e));
        r.parse_warnings = f.warnings;
        if (f.parsed_ok()) {
            auto outcome = solve_symbolic(f, config_.limits);
            r.execution_error = std::move(outcome.execution_error);
            r.solver_warnings = std::move(outcome.warnings);
            r.verdict = std::move(outcome.verdict);
        } else if (f.errors.empty()) {
            r.parse_errors.push_back("the response contains no parsable program");
        }
        return r;
    }

    Provider& provider_;
    const TemplateLibrary& templates_;
    PipelineConfig config_;
};

inline constexpr int kTraceSchemaVersion = 1;

inline nlohmann::json verdict_json(const std::optional<Verdict>& v) {
    if (!v) return nullptr;
    if (const auto* t = std::get_if<TruthValue>(&*v)) return std::string(logiclm::to_string(*t));
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [letter, t] : std::get<std::map<char, TruthValue>>(*v))
        j[std::string(1, letter)] = std::string(logiclm::to_string(t));
    return j;
}

inline nlohmann::json letter_json(const std::optional<char>& c) {
    return c ? nlohmann::json(std::string(1, *c)) : nlohmann::json(nullptr);
}

inline nlohmann::json to_json(const TraceRound& r) {
    nlohmann::json j;
    j["round"] = r.round;
    j["prompt_hash"] = prompt_hash(r.prompt);
    j["prompt"] = r.prompt;
    j["response"] = r.response;
    j["parse_errors"] = r.parse_errors;
    j["parse_warnings"] = r.parse_warnings;
    j["execution_error"] = r.execution_error ? nlohmann::json(*r.execution_error) : nlohmann::json(nullptr);
    j["solver_warnings"] = r.solver_warnings;
    j["provider_error"] = r.provider_error ? nlohmann::json(*r.provider_error) : nlohmann::json(nullptr);
    j["verdict"] = verdict_json(r.verdict);
    return j;
}

/// Trace record; wall-clock data is isolated under "timing".
inline nlohmann::json to_json(const PipelineTrace& t) {
    nlohmann::json j;
    j["schema_version"] = kTraceSchemaVersion;
    j["problem_id"] = t.problem_id;
    j["dataset"] = t.dataset;
    j["task_kind"] = to_string(t.task_kind);
    j["gold_label"] = letter_json(t.gold_label);
    j["answer"] = letter_json(t.answer.letter);
    j["abstained"] = t.answer.abstained();
    j["backoff"] = t.answer.backoff;
    j["diagnostic"] = t.answer.diagnostic;
    j["verdict"] = verdict_json(t.verdict);
    j["correct"] = t.correct();
    j["provider_calls"] = t.provider_calls;
    j["rounds"] = nlohmann::json::array();
    for (const auto& r : t.rounds) j["rounds"].push_back(to_json(r));
    j["timing"] = {{"elapsed_ms", t.elapsed_ms}};
    return j;
}

} // namespace logiclm::pipeline
