#pragma once

// Maps solver verdicts back to option letters.

#include "../core_ir.hpp"
#include "problem.hpp"

#include <map>
#include <random>
#include <variant>

namespace logiclm::pipeline {

/// A single verdict (deductive, FOL) or one verdict per option letter (CSP).
using Verdict = std::variant<TruthValue, std::map<char, TruthValue>>;

inline std::string to_string(const Verdict& v) {
    if (const auto* t = std::get_if<TruthValue>(&v)) return std::string(logiclm::to_string(*t));
    std::string out;
    for (const auto& [letter, t] : std::get<std::map<char, TruthValue>>(v)) {
        if (!out.empty()) out += ", ";
        out += std::string(1, letter) + ": " + std::string(logiclm::to_string(t));
    }
    return "{" + out + "}";
}

enum class BackoffKind : std::uint8_t { Abstain, FixedFirst, SeededRandom };

struct BackoffPolicy {
    BackoffKind kind = BackoffKind::Abstain;
    std::uint64_t seed = 0;
};

inline std::string_view to_string(BackoffKind k) {
    switch (k) {
    case BackoffKind::Abstain: return "abstain";
    case BackoffKind::FixedFirst: return "fixed-first";
    case BackoffKind::SeededRandom: return "seeded-random";
    }
    return "abstain";
}

inline std::optional<BackoffKind> parse_backoff(std::string_view s) {
    if (s == "abstain") return BackoffKind::Abstain;
    if (s == "fixed-first") return BackoffKind::FixedFirst;
    if (s == "seeded-random") return BackoffKind::SeededRandom;
    return std::nullopt;
}

struct Answer {
    std::optional<char> letter;  // empty = abstain
    bool backoff = false;        // letter chosen by the backoff policy rather than the solver
    std::string diagnostic;

    bool abstained() const noexcept { return !letter.has_value(); }
};

/// Picks an answer when the solver gives none. The seeded-random choice
/// depends only on the seed and the problem id, so it is reproducible
/// regardless of evaluation order.
inline Answer apply_backoff(const Problem& p, const BackoffPolicy& policy, std::string diagnostic) {
    Answer a;
    a.diagnostic = std::move(diagnostic);
    if (policy.kind == BackoffKind::Abstain || p.options.empty()) return a;
    a.backoff = true;
    if (policy.kind == BackoffKind::FixedFirst) {
        a.letter = p.options.front().letter;
        return a;
    }
    std::uint64_t h = policy.seed ^ 0x9e3779b97f4a7c15ULL;
    for (unsigned char c : p.id) h = (h ^ c) * 1099511628211ULL;
    std::mt19937_64 rng(h);
    std::uniform_int_distribution<std::size_t> pick(0, p.options.size() - 1);
    a.letter = p.options[pick(rng)].letter;
    return a;
}

/// Total: every verdict and option set yields a letter or an abstention.
inline Answer interpret(const Verdict& verdict, const Problem& p, const BackoffPolicy& policy = {}) {
    if (const auto* per_option = std::get_if<std::map<char, TruthValue>>(&verdict)) {
        std::vector<char> proved;
        for (const auto& [letter, t] : *per_option)
            if (t == TruthValue::Proved) proved.push_back(letter);
        if (proved.size() == 1) {
            for (const auto& o : p.options)
                if (o.letter == proved.front()) return Answer{proved.front(), false, ""};
            return apply_backoff(p, policy, "proved option " + std::string(1, proved.front()) + " is not an answer option");
        }
        return apply_backoff(p, policy, proved.empty() ? "no option is entailed by the constraints"
                                                       : std::to_string(proved.size()) + " options are entailed");
    }
    const auto truth = std::get<TruthValue>(verdict);
    const OptionMeaning wanted = truth == TruthValue::Proved      ? OptionMeaning::True
                                 : truth == TruthValue::Disproved ? OptionMeaning::False
                                                                  : OptionMeaning::Unknown;
    for (const auto& o : p.options)
        if (option_meaning(o.text) == wanted) return Answer{o.letter, false, ""};
    return apply_backoff(p, policy,
                         "no option matches the verdict " + std::string(logiclm::to_string(truth)));
}

} // namespace logiclm::pipeline
