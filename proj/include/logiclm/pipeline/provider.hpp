#pragma once

// Text-generation providers: prompt in, completion out. The offline
// implementations (replay, scripted, identity) are safe to call from several
// threads at once.

#include "problem.hpp"

#include <json.hpp>

#include <cstdio>
#include <map>
#include <mutex>
#include <stdexcept>

namespace logiclm::pipeline {

struct ProviderConfig {
    std::string endpoint_url;
    std::string model_name;
    std::string auth_env_var = "LOGIC_LM_API_KEY";
    double temperature = 0.0;
    int num_examples = 2;
    double timeout_seconds = 60.0;
    std::string response_pointer = "/choices/0/message/content";
    bool chat_messages = true;  // false: send {"prompt": ...} instead of {"messages": [...]}
};

inline std::vector<std::string> validate(const ProviderConfig& c) {
    std::vector<std::string> errors;
    if (c.temperature < 0) errors.push_back("temperature must be >= 0");
    if (c.num_examples < 0) errors.push_back("num_examples must be >= 0");
    if (c.timeout_seconds <= 0) errors.push_back("timeout_seconds must be > 0");
    return errors;
}

struct ProviderRequest {
    std::string prompt;
    std::string problem_id;
    int round = 0;  // 0 = initial formulation, k = k-th refinement
};

class ProviderError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Provider {
public:
    virtual ~Provider() = default;
    virtual std::string complete(const ProviderRequest& request) = 0;
    virtual std::string name() const = 0;
};

/// 64-bit FNV-1a of the prompt, as 16 lowercase hex digits.
inline std::string prompt_hash(std::string_view prompt) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : prompt) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// One recorded exchange of a replay fixture.
struct ReplayEntry {
    std::string prompt_hash;
    std::string problem_id;
    int round = 0;
    std::string completion;
};

inline constexpr int kReplaySchemaVersion = 1;

inline nlohmann::json replay_to_json(const std::vector<ReplayEntry>& entries) {
    nlohmann::json j;
    j["schema_version"] = kReplaySchemaVersion;
    j["entries"] = nlohmann::json::array();
    for (const auto& e : entries)
        j["entries"].push_back(
            {{"prompt_hash", e.prompt_hash}, {"problem_id", e.problem_id}, {"round", e.round}, {"completion", e.completion}});
    return j;
}

/// Answers from a recorded fixture. Lookup order: exact (prompt hash, problem
/// id, round); the same problem id and round (the prompt changed, for instance
/// after a template edit); the prompt hash alone. Different problems can send
/// identical refinement prompts, so the hash is never trusted on its own first.
class ReplayProvider : public Provider {
public:
    explicit ReplayProvider(std::vector<ReplayEntry> entries) {
        for (auto& e : entries) {
            by_exact_.emplace(std::make_tuple(e.prompt_hash, e.problem_id, e.round), e.completion);
            by_key_.emplace(std::make_pair(e.problem_id, e.round), e.completion);
            by_hash_.emplace(e.prompt_hash, std::move(e.completion));
        }
    }

    static ReplayProvider from_json(const nlohmann::json& j) {
        if (!j.is_object() || !j.contains("entries") || !j["entries"].is_array())
            throw ProviderError("replay fixture must be an object with an 'entries' array");
        if (j.value("schema_version", 0) != kReplaySchemaVersion)
            throw ProviderError("unsupported replay fixture schema_version " + j.value("schema_version", nlohmann::json()).dump());
        std::vector<ReplayEntry> entries;
        for (const auto& e : j["entries"]) {
            try {
                entries.push_back({e.value("prompt_hash", ""), e.at("problem_id").get<std::string>(),
                                   e.value("round", 0), e.at("completion").get<std::string>()});
            } catch (const nlohmann::json::exception& ex) {
                throw ProviderError(std::string("malformed replay entry: ") + ex.what());
            }
        }
        return ReplayProvider(std::move(entries));
    }

    static ReplayProvider load(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ProviderError("cannot open replay fixture '" + path + "'");
        auto j = nlohmann::json::parse(in, nullptr, false);
        if (j.is_discarded()) throw ProviderError("replay fixture '" + path + "' is not valid JSON");
        return from_json(j);
    }

    std::string complete(const ProviderRequest& request) override {
        const auto hash = prompt_hash(request.prompt);
        if (auto it = by_exact_.find({hash, request.problem_id, request.round}); it != by_exact_.end()) return it->second;
        if (auto it = by_key_.find({request.problem_id, request.round}); it != by_key_.end()) return it->second;
        if (auto it = by_hash_.find(hash); it != by_hash_.end()) return it->second;
        throw ProviderError("no replay entry for problem '" + request.problem_id + "' round " +
                            std::to_string(request.round));
    }

    std::string name() const override { return "replay"; }

private:
    std::map<std::tuple<std::string, std::string, int>, std::string> by_exact_;
    std::map<std::pair<std::string, int>, std::string> by_key_;
    std::map<std::string, std::string> by_hash_;
};

/// Returns the scripted response for (problem id, round); a script under the
/// id "*" applies to problems without their own.
class ScriptedProvider : public Provider {
public:
    explicit ScriptedProvider(std::map<std::string, std::vector<std::string>> scripts) : scripts_(std::move(scripts)) {}

    std::string complete(const ProviderRequest& request) override {
        auto it = scripts_.find(request.problem_id);
        if (it == scripts_.end()) it = scripts_.find("*");
        if (it == scripts_.end()) throw ProviderError("no script for problem '" + request.problem_id + "'");
        const auto& script = it->second;
        if (request.round < 0 || static_cast<std::size_t>(request.round) >= script.size())
            throw ProviderError("script for problem '" + request.problem_id + "' has no response for round " +
                                std::to_string(request.round));
        return script[static_cast<std::size_t>(request.round)];
    }

    std::string name() const override { return "script"; }

private:
    std::map<std::string, std::vector<std::string>> scripts_;
};

/// Answers every request with the problem's gold formulation.
class IdentityProvider : public Provider {
public:
    explicit IdentityProvider(const std::vector<Problem>& problems) {
        for (const auto& p : problems)
            if (p.formulation) formulations_[p.id] = *p.formulation;
    }

    std::string complete(const ProviderRequest& request) override {
        auto it = formulations_.find(request.problem_id);
        if (it == formulations_.end())
            throw ProviderError("problem '" + request.problem_id + "' has no 'formulation' field");
        return it->second;
    }

    std::string name() const override { return "identity"; }

private:
    std::map<std::string, std::string> formulations_;
};

/// Forwards to another provider and keeps every exchange, so that a run can
/// later be replayed offline.
class RecordingProvider : public Provider {
public:
    explicit RecordingProvider(Provider& inner) : inner_(inner) {}

    std::string complete(const ProviderRequest& request) override {
        std::string completion = inner_.complete(request);
        std::lock_guard lock(mutex_);
        entries_.push_back({prompt_hash(request.prompt), request.problem_id, request.round, completion});
        return completion;
    }

    std::string name() const override { return inner_.name(); }

    /// Recorded entries ordered by problem id and round.
    std::vector<ReplayEntry> entries() const {
        std::lock_guard lock(mutex_);
        auto out = entries_;
        std::stable_sort(out.begin(), out.end(), [](const ReplayEntry& a, const ReplayEntry& b) {
            return std::tie(a.problem_id, a.round) < std::tie(b.problem_id, b.round);
        });
        return out;
    }

private:
    Provider& inner_;
    mutable std::mutex mutex_;
    std::vector<ReplayEntry> entries_;
};

} // namespace logiclm::pipeline
