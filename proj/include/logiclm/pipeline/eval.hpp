#pragma once

// Dataset evaluation: runs the pipeline over every problem with a bounded
// worker pool, writes one trace file per problem as soon as it finishes and
// aggregates accuracy, abstentions and per-round error rates.

#include "pipeline.hpp"

#include <atomic>
#include <filesystem>
#include <thread>

namespace logiclm::pipeline {

struct EvalOptions {
    unsigned jobs = 0;  // 0 = logical core count
    std::optional<std::filesystem::path> trace_dir;
};

struct DatasetScore {
    std::size_t total = 0;
    std::size_t labeled = 0;
    std::size_t correct = 0;
    std::size_t abstentions = 0;

    double accuracy() const noexcept {
        return labeled ? static_cast<double>(correct) / static_cast<double>(labeled) : 0.0;
    }
};

struct EvalReport {
    DatasetScore overall;
    std::map<std::string, DatasetScore> datasets;
    /// error_rate[r]: fraction of problems whose formulation after round r
    /// (the last one, if the problem stopped earlier) still has an error.
    std::vector<double> error_rate;
    std::vector<PipelineTrace> traces;  // dataset order
    std::vector<std::string> trace_files;
    std::vector<DatasetFormatError> dataset_errors;
    int max_rounds = 0;
    double elapsed_ms = 0;
};

inline std::string trace_file_name(std::size_t index, const std::string& id) {
    std::string safe;
    for (char c : id) safe.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ? c : '_');
    char prefix[16];
    std::snprintf(prefix, sizeof prefix, "%05zu_", index);
    return prefix + safe + ".json";
}

inline std::vector<double> error_rates(const std::vector<PipelineTrace>& traces, int max_rounds) {
    std::vector<double> rates(static_cast<std::size_t>(max_rounds) + 1, 0.0);
    if (traces.empty()) return rates;
    for (int r = 0; r <= max_rounds; ++r) {
        std::size_t errors = 0;
        for (const auto& t : traces) {
            const TraceRound* state = nullptr;
            for (const auto& round : t.rounds)
                if (round.round <= r) state = &round;
            if (!state || state->has_error()) ++errors;
        }
        rates[static_cast<std::size_t>(r)] = static_cast<double>(errors) / static_cast<double>(traces.size());
    }
    return rates;
}

inline EvalReport run_eval(const std::vector<Problem>& problems, Provider& provider, const TemplateLibrary& templates,
                           const PipelineConfig& config, const EvalOptions& options = {}) {
    const auto start = Clock::now();
    EvalReport report;
    report.max_rounds = config.max_rounds;
    report.traces.resize(problems.size());
    report.trace_files.resize(problems.size());
    if (options.trace_dir) std::filesystem::create_directories(*options.trace_dir);

    Pipeline pipeline(provider, templates, config);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < problems.size(); i = next++) {
            report.traces[i] = pipeline.run(problems[i]);
            if (options.trace_dir) {
                auto name = trace_file_name(i, problems[i].id);
                std::ofstream out(*options.trace_dir / name, std::ios::binary);
                out << to_json(report.traces[i]).dump(2) << "\n";
                report.trace_files[i] = name;
            }
        }
    };
    unsigned jobs = options.jobs ? options.jobs : std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(problems.size(), 1)));
    {
        std::vector<std::jthread> pool;
        for (unsigned k = 1; k < jobs; ++k) pool.emplace_back(worker);
        worker();
    }

    for (std::size_t i = 0; i < problems.size(); ++i) {
        const auto& t = report.traces[i];
        for (auto* score : {&report.overall, &report.datasets[problems[i].dataset]}) {
            ++score->total;
            if (t.gold_label) ++score->labeled;
            if (t.correct()) ++score->correct;
            if (t.answer.abstained()) ++score->abstentions;
        }
    }
    report.error_rate = error_rates(report.traces, config.max_rounds);
    report.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    return report;
}

inline EvalReport run_eval(const std::string& dataset_path, Provider& provider, const TemplateLibrary& templates,
                           const PipelineConfig& config, const EvalOptions& options = {}) {
    auto dataset = load_dataset(dataset_path);
    if (!dataset.ok()) {
        EvalReport report;
        report.max_rounds = config.max_rounds;
        report.error_rate.assign(static_cast<std::size_t>(config.max_rounds) + 1, 0.0);
        report.dataset_errors = std::move(dataset.errors);
        return report;
    }
    return run_eval(dataset.problems, provider, templates, config, options);
}

inline constexpr int kReportSchemaVersion = 1;

inline nlohmann::json to_json(const DatasetScore& s) {
    return {{"total", s.total},
            {"labeled", s.labeled},
            {"correct", s.correct},
            {"abstentions", s.abstentions},
            {"accuracy", s.accuracy()}};
}

/// Report document. Everything that depends on wall-clock time lives under
/// "timing"; the rest is a pure function of dataset, provider and config.
inline nlohmann::json to_json(const EvalReport& r) {
    nlohmann::json j;
    j["schema_version"] = kReportSchemaVersion;
    j["total"] = r.overall.total;
    j["labeled"] = r.overall.labeled;
    j["correct"] = r.overall.correct;
    j["accuracy"] = r.overall.accuracy();
    j["abstentions"] = r.overall.abstentions;
    j["max_rounds"] = r.max_rounds;
    j["error_rate"] = r.error_rate;
    j["datasets"] = nlohmann::json::object();
    for (const auto& [name, score] : r.datasets) j["datasets"][name] = to_json(score);
    j["dataset_errors"] = nlohmann::json::array();
    for (const auto& e : r.dataset_errors) j["dataset_errors"].push_back(render(e));
    j["problems"] = nlohmann::json::array();
    nlohmann::json per_problem = nlohmann::json::object();
    for (std::size_t i = 0; i < r.traces.size(); ++i) {
        const auto& t = r.traces[i];
        nlohmann::json p;
        p["id"] = t.problem_id;
        p["dataset"] = t.dataset;
        p["gold_label"] = letter_json(t.gold_label);
        p["answer"] = letter_json(t.answer.letter);
        p["backoff"] = t.answer.backoff;
        p["correct"] = t.correct();
        p["verdict"] = verdict_json(t.verdict);
        p["rounds"] = t.rounds.size();
        p["provider_calls"] = t.provider_calls;
        p["final_error"] = t.failed() && !t.rounds.empty() ? nlohmann::json(error_text(t.rounds.back())) : nlohmann::json(nullptr);
        p["trace"] = i < r.trace_files.size() && !r.trace_files[i].empty() ? nlohmann::json(r.trace_files[i])
                                                                           : nlohmann::json(nullptr);
        j["problems"].push_back(std::move(p));
        per_problem[t.problem_id] = t.elapsed_ms;
    }
    j["timing"] = {{"elapsed_ms", r.elapsed_ms}, {"per_problem_ms", per_problem}};
    return j;
}

} // namespace logiclm::pipeline
