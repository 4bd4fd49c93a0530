#pragma once

// Deductive reasoner over logic programs: semi-naive forward chaining to the
// least fixpoint, goal-directed backward proofs and an open-world three-valued
// query that reads the last boolean argument as the polarity.

#include "lp_program.hpp"

#include <chrono>
#include <functional>
#include <map>

namespace logiclm::lp {

using Clock = std::chrono::steady_clock;

struct LpLimits {
    std::size_t max_derived_facts = 100000;
    std::size_t max_iterations = 1000;
    std::optional<Clock::time_point> deadline;
};

/// Ground atoms with set semantics, iterated in insertion order.
class FactSet {
public:
    bool insert(Atom a) {
        if (index_.contains(a)) return false;
        index_.insert(a);
        by_predicate_[a.predicate].push_back(atoms_.size());
        atoms_.push_back(std::move(a));
        return true;
    }

    bool contains(const Atom& a) const { return index_.contains(a); }
    std::size_t size() const noexcept { return atoms_.size(); }
    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    const Atom& operator[](std::size_t i) const { return atoms_[i]; }

    const std::vector<std::size_t>& with_predicate(const std::string& predicate) const {
        static const std::vector<std::size_t> kNone;
        auto it = by_predicate_.find(predicate);
        return it == by_predicate_.end() ? kNone : it->second;
    }

    /// Order-free view used for equality.
    const std::set<Atom>& as_set() const noexcept { return index_; }

    bool operator==(const FactSet& other) const { return index_ == other.index_; }

private:
    std::vector<Atom> atoms_;
    std::set<Atom> index_;
    std::map<std::string, std::vector<std::size_t>> by_predicate_;
};

using Bindings = std::map<std::string, Term>;

/// Extends `b` so that `pattern` instantiated by it equals `ground`.
inline bool match(const Atom& pattern, const Atom& ground, Bindings& b) {
    if (pattern.predicate != ground.predicate || pattern.arity() != ground.arity()) return false;
    for (std::size_t i = 0; i < pattern.args.size(); ++i) {
        const Term& p = pattern.args[i];
        const Term& g = ground.args[i];
        if (p.is_variable()) {
            auto [it, inserted] = b.emplace(p.name(), g);
            if (!inserted && it->second != g) return false;
        } else if (p != g) {
            return false;
        }
    }
    return true;
}

inline Atom substitute(const Atom& a, const Bindings& b) {
    Atom out{a.predicate, {}};
    out.args.reserve(a.args.size());
    for (const auto& t : a.args) {
        if (t.is_variable()) {
            auto it = b.find(t.name());
            out.args.push_back(it == b.end() ? t : it->second);
        } else {
            out.args.push_back(t);
        }
    }
    return out;
}

/// Rules with a single head atom; conjunctive heads are split here.
inline std::vector<LpRule> split_rules(const LpProgram& p) {
    std::vector<LpRule> out;
    for (const auto& r : p.rules)
        for (const auto& h : r.head) out.push_back({r.body, {h}, r.gloss});
    return out;
}

enum class LpErrorKind : std::uint8_t { NonGroundQuery, InconsistentProgram, ResourceExhausted };

inline std::string_view to_string(LpErrorKind k) {
    switch (k) {
    case LpErrorKind::NonGroundQuery: return "NonGroundQuery";
    case LpErrorKind::InconsistentProgram: return "InconsistentProgram";
    case LpErrorKind::ResourceExhausted: return "ResourceExhausted";
    }
    return "ResourceExhausted";
}

struct LpError {
    LpErrorKind kind;
    std::string message;
};

struct ChainResult {
    FactSet facts;
    std::size_t iterations = 0;
    bool exhausted = false;
    std::string warning;
};

namespace detail {

class Joiner {
public:
    Joiner(const FactSet& facts, std::size_t delta_begin, std::size_t snapshot, std::vector<Atom>& out)
        : facts_(facts), delta_begin_(delta_begin), snapshot_(snapshot), out_(out) {}

    void run(const LpRule& rule, std::size_t delta_pos) {
        rule_ = &rule;
        delta_pos_ = delta_pos;
        Bindings b;
        join(0, b);
    }

private:
    void join(std::size_t pos, Bindings& b) {
        if (pos == rule_->body.size()) {
            out_.push_back(substitute(rule_->head.front(), b));
            return;
        }
        const Atom& pattern = rule_->body[pos];
        for (std::size_t idx : facts_.with_predicate(pattern.predicate)) {
            if (idx >= snapshot_) break;
            if (pos == delta_pos_ && idx < delta_begin_) continue;
            Bindings next = b;
            if (match(pattern, facts_[idx], next)) join(pos + 1, next);
        }
    }

    const FactSet& facts_;
    std::size_t delta_begin_;
    std::size_t snapshot_;
    std::vector<Atom>& out_;
    const LpRule* rule_ = nullptr;
    std::size_t delta_pos_ = 0;
};

inline bool past(const std::optional<Clock::time_point>& deadline) {
    return deadline && Clock::now() > *deadline;
}

} // namespace detail

/// Least fixpoint of the program's rules over its base facts. Each round only
/// joins rule bodies that use at least one fact derived in the previous round.
inline ChainResult forward_chain(const LpProgram& p, const LpLimits& limits = {}) {
    ChainResult result;
    auto rules = split_rules(p);
    for (const auto& f : p.facts) result.facts.insert(f.atom);
    for (const auto& r : rules)
        if (r.body.empty() && r.head.front().is_ground()) result.facts.insert(r.head.front());

    std::size_t delta_begin = 0;
    for (;;) {
        std::size_t snapshot = result.facts.size();
        if (delta_begin == snapshot) break;
        if (result.iterations >= limits.max_iterations) {
            result.exhausted = true;
            result.warning = "forward chaining stopped after " + std::to_string(result.iterations) + " iterations";
            break;
        }
        if (detail::past(limits.deadline)) {
            result.exhausted = true;
            result.warning = "forward chaining exceeded its time budget";
            break;
        }
        ++result.iterations;
        std::vector<Atom> derived;
        detail::Joiner joiner(result.facts, delta_begin, snapshot, derived);
        for (const auto& r : rules)
            for (std::size_t pos = 0; pos < r.body.size(); ++pos) joiner.run(r, pos);
        for (auto& a : derived) {
            result.facts.insert(std::move(a));
            if (result.facts.size() > limits.max_derived_facts) break;
        }
        if (result.facts.size() > limits.max_derived_facts) {
            result.exhausted = true;
            result.warning = "forward chaining exceeded " + std::to_string(limits.max_derived_facts) + " facts";
            break;
        }
        delta_begin = snapshot;
    }
    return result;
}

struct QueryAnswer {
    TruthValue value = TruthValue::Unknown;
    std::optional<LpError> error;
    std::vector<std::string> warnings;
};

/// Q with its trailing boolean flipped, when the last argument is a boolean.
inline std::optional<Atom> flipped_polarity(const Atom& q) {
    if (q.args.empty() || q.args.back().kind() != TermKind::Boolean) return std::nullopt;
    Atom out = q;
    out.args.back() = Term::boolean(!q.args.back().bool_value());
    return out;
}

/// Proved if the query is derivable, Disproved if its polarity-flipped form is,
/// otherwise Unknown (open world).
inline QueryAnswer lp_query(const LpProgram& p, const LpLimits& limits = {}) {
    QueryAnswer answer;
    if (!p.query.is_ground()) {
        answer.error = LpError{LpErrorKind::NonGroundQuery,
                               "query " + to_string(p.query) + " contains variables; queries must be ground facts"};
        return answer;
    }
    auto negative = flipped_polarity(p.query);
    if (!negative)
        answer.warnings.push_back("query " + to_string(p.query) +
                                  " has no trailing True/False argument; it can only be proved, never disproved");
    auto chained = forward_chain(p, limits);
    if (chained.exhausted) {
        answer.warnings.push_back("ResourceExhausted: " + chained.warning);
        return answer;
    }
    bool pos = chained.facts.contains(p.query);
    bool neg = negative && chained.facts.contains(*negative);
    if (pos && neg) {
        answer.error = LpError{LpErrorKind::InconsistentProgram,
                               "both " + to_string(p.query) + " and " + to_string(*negative) +
                                   " are derivable; the facts and rules contradict each other"};
        return answer;
    }
    answer.value = pos ? TruthValue::Proved : neg ? TruthValue::Disproved : TruthValue::Unknown;
    return answer;
}

struct ProofTree {
    Atom root;
    std::vector<ProofTree> children;
    std::optional<LpRule> rule_used;  // absent for base facts

    bool is_leaf() const noexcept { return !rule_used.has_value(); }
    std::size_t depth() const {
        std::size_t d = 0;
        for (const auto& c : children) d = std::max(d, c.depth() + 1);
        return d;
    }
};

struct BackwardResult {
    std::optional<ProofTree> proof;
    bool exhausted = false;
    std::string warning;
};

namespace detail {

class BackwardProver {
public:
    BackwardProver(const LpProgram& p, const LpLimits& limits) : limits_(limits), rules_(split_rules(p)) {
        for (const auto& f : p.facts) base_.insert(f.atom);
        auto add_terms = [&](const Atom& a) {
            for (const auto& t : a.args)
                if (t.is_ground() && std::find(universe_.begin(), universe_.end(), t) == universe_.end())
                    universe_.push_back(t);
        };
        for (const auto& f : p.facts) add_terms(f.atom);
        for (const auto& r : rules_) {
            for (const auto& a : r.body) add_terms(a);
            add_terms(r.head.front());
        }
        add_terms(p.query);
    }

    void add_universe(const Atom& a) {
        for (const auto& t : a.args)
            if (t.is_ground() && std::find(universe_.begin(), universe_.end(), t) == universe_.end())
                universe_.push_back(t);
    }

    std::optional<ProofTree> prove(const Atom& goal) {
        if (exhausted_) return std::nullopt;
        if (auto it = proven_.find(goal); it != proven_.end()) return it->second;
        if (base_.contains(goal)) return ProofTree{goal, {}, std::nullopt};
        // Each goal is expanded at most once per pass; a revisit (in progress
        // or already failed this pass) counts as failure.
        if (!visited_.insert(goal).second) return std::nullopt;
        if (++steps_ > limits_.max_derived_facts || past(limits_.deadline)) {
            exhausted_ = true;
            return std::nullopt;
        }
        std::optional<ProofTree> found;
        for (const auto& rule : rules_) {
            Bindings b;
            if (!match(rule.head.front(), goal, b)) continue;
            std::vector<ProofTree> children;
            if (prove_body(rule, 0, b, children)) {
                found = ProofTree{goal, std::move(children), rule};
                break;
            }
            if (exhausted_) break;
        }
        if (found) proven_.emplace(goal, *found);
        return found;
    }

    /// Passes repeat while they prove something new: a failure in one pass
    /// may only reflect the order goals were visited in.
    std::optional<ProofTree> prove_to_fixpoint(const Atom& goal) {
        for (;;) {
            visited_.clear();
            std::size_t known = proven_.size();
            auto tree = prove(goal);
            if (tree || exhausted_ || proven_.size() == known) return tree;
        }
    }

    bool exhausted() const { return exhausted_; }

private:
    bool prove_body(const LpRule& rule, std::size_t pos, const Bindings& b, std::vector<ProofTree>& children) {
        if (pos == rule.body.size()) return true;
        Atom sub = substitute(rule.body[pos], b);
        std::vector<std::string> unbound;
        for (const auto& t : sub.args)
            if (t.is_variable() && std::find(unbound.begin(), unbound.end(), t.name()) == unbound.end())
                unbound.push_back(t.name());
        // Remaining variables range over the program's ground terms.
        return ground_and_prove(rule, pos, b, unbound, 0, children);
    }

    bool ground_and_prove(const LpRule& rule, std::size_t pos, const Bindings& b, const std::vector<std::string>& vars,
                          std::size_t k, std::vector<ProofTree>& children) {
        if (exhausted_) return false;
        if (k == vars.size()) {
            auto tree = prove(substitute(rule.body[pos], b));
            if (!tree) return false;
            children.push_back(std::move(*tree));
            if (prove_body(rule, pos + 1, b, children)) return true;
            children.pop_back();
            return false;
        }
        for (const auto& value : universe_) {
            Bindings next = b;
            next.emplace(vars[k], value);
            if (ground_and_prove(rule, pos, next, vars, k + 1, children)) return true;
            if (exhausted_) return false;
        }
        return false;
    }

    const LpLimits& limits_;
    std::vector<LpRule> rules_;
    std::set<Atom> base_;
    std::vector<Term> universe_;
    std::set<Atom> visited_;
    std::map<Atom, ProofTree> proven_;
    std::size_t steps_ = 0;
    bool exhausted_ = false;
};

} // namespace detail

/// Goal-directed proof search. A visited-goal set stops re-expansion within a
/// pass, so cyclic rule sets terminate. `max_derived_facts` bounds the
/// number of goal expansions.
inline BackwardResult backward_prove(const LpProgram& p, const Atom& goal, const LpLimits& limits = {}) {
    BackwardResult result;
    if (!goal.is_ground()) {
        result.warning = "goal " + to_string(goal) + " is not ground";
        return result;
    }
    detail::BackwardProver prover(p, limits);
    prover.add_universe(goal);
    result.proof = prover.prove_to_fixpoint(goal);
    if (!result.proof && prover.exhausted()) {
        result.exhausted = true;
        result.warning = "backward chaining exceeded its budget";
    }
    return result;
}

/// Checks that every node of `tree` is a base fact or an instance of one of
/// the program's (split) rules whose body instantiates to the children.
inline bool validate_proof(const LpProgram& p, const ProofTree& tree) {
    if (!tree.root.is_ground()) return false;
    if (tree.is_leaf()) {
        if (!tree.children.empty()) return false;
        for (const auto& f : p.facts)
            if (f.atom == tree.root) return true;
        return false;
    }
    const auto& rule = *tree.rule_used;
    auto rules = split_rules(p);
    bool known = false;
    for (const auto& r : rules) known = known || (r.body == rule.body && r.head == rule.head);
    if (!known || rule.body.size() != tree.children.size()) return false;
    Bindings b;
    if (!match(rule.head.front(), tree.root, b)) return false;
    for (std::size_t i = 0; i < rule.body.size(); ++i)
        if (!match(rule.body[i], tree.children[i].root, b)) return false;
    for (const auto& c : tree.children)
        if (!validate_proof(p, c)) return false;
    return true;
}

} // namespace logiclm::lp
