#pragma once

// Given-clause resolution with factoring and forward subsumption, and the
// three-valued entailment check built on two refutation attempts.

#include "cnf.hpp"

#include <chrono>
#include <queue>
#include <tuple>

namespace logiclm::fol {

using Clock = std::chrono::steady_clock;

struct ProverLimits {
    std::size_t max_clauses = 20000;
    std::size_t max_resolution_steps = 200000;
    int max_term_depth = 6;
    std::optional<Clock::time_point> deadline;
};

enum class StepKind : std::uint8_t { Input, Resolvent, Factor };

/// One line of the derivation log. For resolvents `literals` holds the
/// resolved literal index in each parent (second parent renamed apart with
/// prefix `R`); for factors, the two merged literal indices.
struct DerivationStep {
    std::size_t id = 0;
    StepKind kind = StepKind::Input;
    std::vector<std::size_t> parents;
    std::vector<std::size_t> literals;
    Substitution unifier;
    Clause clause;
    bool from_goal = false;
};

inline std::string to_string(const DerivationStep& s) {
    std::string out = std::to_string(s.id) + "\t";
    switch (s.kind) {
    case StepKind::Input: out += s.from_goal ? "goal" : "axiom"; break;
    case StepKind::Resolvent: out += "resolve"; break;
    case StepKind::Factor: out += "factor"; break;
    }
    out += "\t";
    for (std::size_t i = 0; i < s.parents.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(s.parents[i]) + "." + std::to_string(s.literals[i]);
    }
    out += "\t" + to_string(s.unifier) + "\t" + logiclm::to_string(s.clause);
    return out;
}

enum class SaturationStatus : std::uint8_t { Refuted, Saturated, LimitReached };

struct SaturationResult {
    SaturationStatus status = SaturationStatus::Saturated;
    std::size_t steps = 0;  // resolvents and factors computed
    std::vector<DerivationStep> log;
    std::optional<std::size_t> empty_clause;  // log index
    bool depth_capped = false;
    std::string warning;

    bool refuted() const noexcept { return status == SaturationStatus::Refuted; }
    /// Whether the refutation descends from a goal clause.
    bool goal_used() const { return empty_clause && log[*empty_clause].from_goal; }
};

/// Resolvent of `a` and `b` on literal `i` of `a` and literal `j` of `b`.
/// `b`'s variables are renamed apart first (prefix `R`, literal order kept);
/// the result has canonical variable names.
inline std::optional<std::pair<Clause, Substitution>> resolve(const Clause& a, std::size_t i, const Clause& b,
                                                              std::size_t j) {
    auto names = variable_names(b, "R");
    const Literal& la = a.literals()[i];
    const Literal lb = rename(b.literals()[j], names);
    if (la.positive == lb.positive) return std::nullopt;
    Substitution s;
    if (!unify(la.atom, lb.atom, s)) return std::nullopt;
    std::vector<Literal> lits;
    for (std::size_t k = 0; k < a.size(); ++k)
        if (k != i) lits.push_back(fol::apply(a.literals()[k], s));
    for (std::size_t k = 0; k < b.size(); ++k)
        if (k != j) lits.push_back(fol::apply(rename(b.literals()[k], names), s));
    return std::make_pair(rename_variables(Clause(std::move(lits)), "X"), std::move(s));
}

/// Factor of `c` merging literals `i` and `j`.
inline std::optional<std::pair<Clause, Substitution>> factor(const Clause& c, std::size_t i, std::size_t j) {
    const Literal& li = c.literals()[i];
    const Literal& lj = c.literals()[j];
    if (li.positive != lj.positive) return std::nullopt;
    Substitution s;
    if (!unify(li.atom, lj.atom, s)) return std::nullopt;
    std::vector<Literal> lits;
    for (const auto& l : c.literals()) lits.push_back(fol::apply(l, s));
    return std::make_pair(rename_variables(Clause(std::move(lits)), "X"), std::move(s));
}

namespace detail {

inline bool subsumes_from(const std::vector<Literal>& general, std::size_t k, const Clause& specific, Substitution& s) {
    if (k == general.size()) return true;
    const Literal& g = general[k];
    for (const auto& l : specific.literals()) {
        if (l.positive != g.positive || l.atom.predicate != g.atom.predicate) continue;
        Substitution next = s;
        if (match(g.atom, l.atom, next) && subsumes_from(general, k + 1, specific, next)) return true;
    }
    return false;
}

} // namespace detail

/// True when some instance of `general` is a sub-multiset of `specific`.
inline bool subsumes(const Clause& general, const Clause& specific) {
    if (general.size() > specific.size()) return false;
    Substitution s;
    return detail::subsumes_from(general.literals(), 0, specific, s);
}

/// Saturates `axioms ∪ goal` with the given-clause loop. Clauses are selected
/// by ascending (literal count, term depth, age).
inline SaturationResult saturate(const std::vector<Clause>& axioms, const std::vector<Clause>& goal,
                                 const ProverLimits& limits = {}) {
    SaturationResult result;
    auto& log = result.log;
    using Key = std::tuple<std::size_t, int, std::size_t>;
    std::priority_queue<Key, std::vector<Key>, std::greater<>> passive;
    std::vector<std::size_t> active;

    auto push = [&](DerivationStep step) {
        step.id = log.size();
        passive.emplace(step.clause.size(), step.clause.max_term_depth(), step.id);
        log.push_back(std::move(step));
    };
    auto forward_subsumed = [&](const Clause& c) {
        for (std::size_t id : active)
            if (subsumes(log[id].clause, c)) return true;
        return false;
    };
    auto limit = [&](std::string why) {
        result.status = SaturationStatus::LimitReached;
        result.warning = std::move(why);
    };
    auto refute = [&](std::size_t id) {
        result.status = SaturationStatus::Refuted;
        result.empty_clause = id;
    };

    for (const auto& c : axioms)
        if (!c.is_tautology()) push({0, StepKind::Input, {}, {}, {}, rename_variables(c, "X"), false});
    for (const auto& c : goal)
        if (!c.is_tautology()) push({0, StepKind::Input, {}, {}, {}, rename_variables(c, "X"), true});
    for (const auto& step : log) {
        if (step.clause.empty()) {
            refute(step.id);
            return result;
        }
    }

    // Adds a derived clause unless it is redundant; returns true on refutation.
    auto derive = [&](DerivationStep step) {
        ++result.steps;
        if (step.clause.is_tautology()) return false;
        if (step.clause.max_term_depth() > limits.max_term_depth) {
            result.depth_capped = true;
            return false;
        }
        if (forward_subsumed(step.clause)) return false;
        bool empty = step.clause.empty();
        push(std::move(step));
        if (empty) refute(log.size() - 1);
        return empty;
    };

    while (!passive.empty()) {
        if (log.size() > limits.max_clauses) {
            limit("clause limit of " + std::to_string(limits.max_clauses) + " reached");
            return result;
        }
        if (result.steps > limits.max_resolution_steps) {
            limit("resolution step limit of " + std::to_string(limits.max_resolution_steps) + " reached");
            return result;
        }
        if (limits.deadline && Clock::now() > *limits.deadline) {
            limit("time budget exhausted");
            return result;
        }
        auto [size, depth, given_id] = passive.top();
        passive.pop();
        const Clause given = log[given_id].clause;
        const bool given_goal = log[given_id].from_goal;
        if (forward_subsumed(given)) continue;

        for (std::size_t i = 0; i < given.size(); ++i) {
            for (std::size_t j = i + 1; j < given.size(); ++j) {
                auto f = factor(given, i, j);
                if (!f) continue;
                if (derive({0, StepKind::Factor, {given_id}, {i, j}, std::move(f->second), std::move(f->first),
                            given_goal}))
                    return result;
            }
        }

        active.push_back(given_id);
        const auto partners = active;
        for (std::size_t other_id : partners) {
            // A copy: derive() appends to the log.
            const Clause other = log[other_id].clause;
            const bool other_goal = log[other_id].from_goal;
            for (std::size_t i = 0; i < given.size(); ++i) {
                for (std::size_t j = 0; j < other.size(); ++j) {
                    const Literal& li = given.literals()[i];
                    const Literal& lj = other.literals()[j];
                    if (li.positive == lj.positive || li.atom.predicate != lj.atom.predicate) continue;
                    auto r = resolve(given, i, other, j);
                    if (!r) continue;
                    bool from_goal = given_goal || other_goal;
                    if (derive({0, StepKind::Resolvent, {given_id, other_id}, {i, j}, std::move(r->second),
                                std::move(r->first), from_goal}))
                        return result;
                }
            }
        }
    }
    if (result.depth_capped) result.warning = "clauses beyond the term-depth cap were discarded";
    return result;
}

/// Re-derives every resolvent and factor in `log` from its recorded parents
/// and checks that the recorded unifier unifies the resolved literals.
inline bool replay_derivation(const std::vector<DerivationStep>& log) {
    for (const auto& step : log) {
        if (step.kind == StepKind::Input) continue;
        for (std::size_t p : step.parents)
            if (p >= step.id) return false;
        if (step.kind == StepKind::Factor) {
            const Clause& c = log[step.parents[0]].clause;
            if (step.literals.size() != 2 || step.literals[1] >= c.size()) return false;
            const auto& a = c.literals()[step.literals[0]];
            const auto& b = c.literals()[step.literals[1]];
            if (a.positive != b.positive || fol::apply(a.atom, step.unifier) != fol::apply(b.atom, step.unifier)) return false;
            auto f = factor(c, step.literals[0], step.literals[1]);
            if (!f || f->first != step.clause) return false;
            continue;
        }
        const Clause& a = log[step.parents[0]].clause;
        const Clause& b = log[step.parents[1]].clause;
        if (step.literals.size() != 2 || step.literals[0] >= a.size() || step.literals[1] >= b.size()) return false;
        const auto& la = a.literals()[step.literals[0]];
        const auto lb = rename(b.literals()[step.literals[1]], variable_names(b, "R"));
        if (la.positive == lb.positive || fol::apply(la.atom, step.unifier) != fol::apply(lb.atom, step.unifier)) return false;
        auto r = resolve(a, step.literals[0], b, step.literals[1]);
        if (!r || r->first != step.clause) return false;
    }
    return true;
}

enum class FolErrorKind : std::uint8_t { InconsistentFacts, ClauseExplosion };

inline std::string_view to_string(FolErrorKind k) {
    return k == FolErrorKind::InconsistentFacts ? "InconsistentFacts" : "ClauseExplosion";
}

struct FolError {
    FolErrorKind kind;
    std::string message;
};

struct EntailmentResult {
    TruthValue value = TruthValue::Unknown;
    std::optional<FolError> error;
    std::vector<std::string> warnings;
    SaturationResult refute_negated_query;  // facts ∪ {¬query}
    SaturationResult refute_query;          // facts ∪ {query}

    std::size_t steps() const noexcept { return refute_negated_query.steps + refute_query.steps; }
};

/// Proved iff facts ∪ {¬query} is refuted, Disproved iff facts ∪ {query} is,
/// Unknown otherwise. A refutation that needs no goal clause, or refutations
/// on both sides, report InconsistentFacts.
inline EntailmentResult resolve_entailment(const std::vector<Formula>& facts, const Formula& query,
                                           const ProverLimits& limits = {}) {
    EntailmentResult result;
    SkolemState state;
    for (const auto& f : facts) state.reserve_symbols(f);
    state.reserve_symbols(query);

    std::vector<Clause> axioms;
    auto add = [&](const ClausifyResult& r, std::vector<Clause>& into) {
        if (r.explosion) return false;
        into.insert(into.end(), r.clauses.begin(), r.clauses.end());
        return true;
    };
    for (const auto& f : facts) {
        if (!add(clausify(f, state, limits.max_clauses), axioms)) {
            result.warnings.push_back("ClauseExplosion: CNF of a fact exceeds " + std::to_string(limits.max_clauses) +
                                      " clauses");
            return result;
        }
    }
    std::vector<Clause> negated, positive;
    if (!add(clausify(Formula::negation(query), state, limits.max_clauses), negated) ||
        !add(clausify(query, state, limits.max_clauses), positive)) {
        result.warnings.push_back("ClauseExplosion: CNF of the query exceeds " + std::to_string(limits.max_clauses) +
                                  " clauses");
        return result;
    }

    result.refute_negated_query = saturate(axioms, negated, limits);
    result.refute_query = saturate(axioms, positive, limits);
    const auto& a = result.refute_negated_query;
    const auto& b = result.refute_query;
    for (const auto* side : {&a, &b})
        if (side->status == SaturationStatus::LimitReached) result.warnings.push_back("ResourceExhausted: " + side->warning);

    bool facts_only = (a.refuted() && !a.goal_used()) || (b.refuted() && !b.goal_used());
    if (facts_only || (a.refuted() && b.refuted())) {
        result.error = FolError{FolErrorKind::InconsistentFacts,
                                "the facts are contradictory: resolution derives the empty clause from them alone"};
        return result;
    }
    result.value = a.refuted() ? TruthValue::Proved : b.refuted() ? TruthValue::Disproved : TruthValue::Unknown;
    return result;
}

} // namespace logiclm::fol
