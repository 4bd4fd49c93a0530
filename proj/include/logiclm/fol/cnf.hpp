#pragma once

// Clausal normal form pipeline:
// desugar -> NNF -> standardize apart -> Skolemize -> distribute -> clauses.

#include "unify.hpp"

#include <optional>

namespace logiclm::fol {

/// Negation normal form: implications eliminated, negations pushed onto atoms,
/// quantifier duals applied. Xor/Equiv/lists are desugared on the way.
inline Formula to_nnf(const Formula& f, bool negate = false) {
    switch (f.kind()) {
    case FormulaKind::Atom: return negate ? Formula::negation(f) : f;
    case FormulaKind::Not: return to_nnf(f.child(), !negate);
    case FormulaKind::And:
        return negate ? Formula::disj(to_nnf(f.lhs(), true), to_nnf(f.rhs(), true))
                      : Formula::conj(to_nnf(f.lhs(), false), to_nnf(f.rhs(), false));
    case FormulaKind::Or:
        return negate ? Formula::conj(to_nnf(f.lhs(), true), to_nnf(f.rhs(), true))
                      : Formula::disj(to_nnf(f.lhs(), false), to_nnf(f.rhs(), false));
    case FormulaKind::Implies:
        return negate ? Formula::conj(to_nnf(f.lhs(), false), to_nnf(f.rhs(), true))
                      : Formula::disj(to_nnf(f.lhs(), true), to_nnf(f.rhs(), false));
    case FormulaKind::Exists:
        return negate ? Formula::forall(f.variable(), to_nnf(f.child(), true))
                      : Formula::exists(f.variable(), to_nnf(f.child(), false));
    case FormulaKind::Forall:
        return negate ? Formula::exists(f.variable(), to_nnf(f.child(), true))
                      : Formula::forall(f.variable(), to_nnf(f.child(), false));
    case FormulaKind::Xor:
    case FormulaKind::Equiv:
    case FormulaKind::AndList:
    case FormulaKind::OrList: return to_nnf(desugar(f), negate);
    }
    return f;
}

/// Fresh-name source for standardizing apart and Skolemization. Generated
/// names skip anything registered as reserved.
class SkolemState {
public:
    void reserve(const std::string& name) { reserved_.insert(name); }

    void reserve_symbols(const Formula& f) {
        if (f.kind() == FormulaKind::Atom) {
            for (const auto& t : f.atom().args) reserve_term(t);
            return;
        }
        for (const auto& c : f.children()) reserve_symbols(c);
    }

    std::string fresh_constant() { return fresh("skc"); }
    std::string fresh_function() { return fresh("skf"); }
    std::string fresh_variable() { return "v" + std::to_string(++variables_); }
    int counter() const noexcept { return counter_; }

private:
    void reserve_term(const Term& t) {
        if (t.kind() == TermKind::Constant || t.is_function()) reserved_.insert(t.name());
        for (const auto& a : t.args()) reserve_term(a);
    }

    std::string fresh(const std::string& prefix) {
        for (;;) {
            std::string name = prefix + std::to_string(++counter_);
            if (!reserved_.contains(name)) {
                reserved_.insert(name);
                return name;
            }
        }
    }

    std::set<std::string> reserved_;
    int counter_ = 0;
    int variables_ = 0;
};

namespace detail {

inline Formula substitute_formula(const Formula& f, const Substitution& s) {
    switch (f.kind()) {
    case FormulaKind::Atom: return Formula::atom(fol::apply(f.atom(), s));
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
        Substitution inner = s;
        inner.erase(f.variable());
        auto body = substitute_formula(f.child(), inner);
        return f.kind() == FormulaKind::Exists ? Formula::exists(f.variable(), std::move(body))
                                               : Formula::forall(f.variable(), std::move(body));
    }
    case FormulaKind::Not: return Formula::negation(substitute_formula(f.child(), s));
    case FormulaKind::And: return Formula::conj(substitute_formula(f.lhs(), s), substitute_formula(f.rhs(), s));
    case FormulaKind::Or: return Formula::disj(substitute_formula(f.lhs(), s), substitute_formula(f.rhs(), s));
    case FormulaKind::Implies:
        return Formula::implies(substitute_formula(f.lhs(), s), substitute_formula(f.rhs(), s));
    default: return substitute_formula(desugar(f), s);
    }
}

} // namespace detail

/// Gives every quantifier a distinct fresh variable.
inline Formula standardize_apart(const Formula& f, SkolemState& state) {
    switch (f.kind()) {
    case FormulaKind::Atom: return f;
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
        std::string fresh = state.fresh_variable();
        auto body = detail::substitute_formula(f.child(), {{f.variable(), Term::variable(fresh)}});
        body = standardize_apart(body, state);
        return f.kind() == FormulaKind::Exists ? Formula::exists(fresh, std::move(body))
                                               : Formula::forall(fresh, std::move(body));
    }
    case FormulaKind::Not: return Formula::negation(standardize_apart(f.child(), state));
    case FormulaKind::And: return Formula::conj(standardize_apart(f.lhs(), state), standardize_apart(f.rhs(), state));
    case FormulaKind::Or: return Formula::disj(standardize_apart(f.lhs(), state), standardize_apart(f.rhs(), state));
    case FormulaKind::Implies:
        return Formula::implies(standardize_apart(f.lhs(), state), standardize_apart(f.rhs(), state));
    default: return standardize_apart(desugar(f), state);
    }
}

namespace detail {

inline Formula skolemize_rec(const Formula& f, SkolemState& state, std::vector<std::string>& universals,
                             const Substitution& s) {
    switch (f.kind()) {
    case FormulaKind::Atom: return Formula::atom(fol::apply(f.atom(), s));
    case FormulaKind::Not: return Formula::negation(skolemize_rec(f.child(), state, universals, s));
    case FormulaKind::And:
        return Formula::conj(skolemize_rec(f.lhs(), state, universals, s), skolemize_rec(f.rhs(), state, universals, s));
    case FormulaKind::Or:
        return Formula::disj(skolemize_rec(f.lhs(), state, universals, s), skolemize_rec(f.rhs(), state, universals, s));
    case FormulaKind::Forall: {
        Substitution inner = s;
        inner.erase(f.variable());
        universals.push_back(f.variable());
        auto out = skolemize_rec(f.child(), state, universals, inner);
        universals.pop_back();
        return out;
    }
    case FormulaKind::Exists: {
        Term witness;
        if (universals.empty()) {
            witness = Term::constant(state.fresh_constant());
        } else {
            std::vector<Term> args;
            for (const auto& u : universals) args.push_back(Term::variable(u));
            witness = Term::function(state.fresh_function(), std::move(args));
        }
        Substitution inner = s;
        inner[f.variable()] = witness;
        return skolemize_rec(f.child(), state, universals, inner);
    }
    default: return skolemize_rec(to_nnf(f), state, universals, s);
    }
}

} // namespace detail

/// Replaces existentials by Skolem constants (no enclosing universal) or
/// Skolem functions of the enclosing universals, and drops universal
/// quantifiers. Input must be in NNF.
inline Formula skolemize(const Formula& nnf, SkolemState& state) {
    std::vector<std::string> universals;
    return detail::skolemize_rec(nnf, state, universals, {});
}

struct ClauseExplosion {
    std::size_t limit = 0;
    std::string message;
};

struct ClausifyResult {
    std::vector<Clause> clauses;
    std::optional<ClauseExplosion> explosion;
};

namespace detail {

using RawClauses = std::vector<std::vector<Literal>>;

inline bool distribute(const Formula& f, RawClauses& out, std::size_t max_clauses) {
    switch (f.kind()) {
    case FormulaKind::Atom: out = {{Literal{true, f.atom()}}}; return true;
    case FormulaKind::Not:
        if (f.child().kind() != FormulaKind::Atom) return distribute(to_nnf(f), out, max_clauses);
        out = {{Literal{false, f.child().atom()}}};
        return true;
    case FormulaKind::And: {
        RawClauses a, b;
        if (!distribute(f.lhs(), a, max_clauses) || !distribute(f.rhs(), b, max_clauses)) return false;
        if (a.size() + b.size() > max_clauses) return false;
        out = std::move(a);
        out.insert(out.end(), std::make_move_iterator(b.begin()), std::make_move_iterator(b.end()));
        return true;
    }
    case FormulaKind::Or: {
        RawClauses a, b;
        if (!distribute(f.lhs(), a, max_clauses) || !distribute(f.rhs(), b, max_clauses)) return false;
        if (a.size() * b.size() > max_clauses) return false;
        out.clear();
        for (const auto& ca : a) {
            for (const auto& cb : b) {
                auto merged = ca;
                merged.insert(merged.end(), cb.begin(), cb.end());
                out.push_back(std::move(merged));
            }
        }
        return true;
    }
    default: return distribute(to_nnf(f), out, max_clauses);
    }
}

} // namespace detail

/// Full pipeline for one closed formula. Tautologies are dropped and
/// duplicate clauses merged; the result is equisatisfiable with `f`.
inline ClausifyResult clausify(const Formula& f, SkolemState& state, std::size_t max_clauses = 20000) {
    ClausifyResult result;
    state.reserve_symbols(f);
    auto nnf = to_nnf(desugar(f));
    auto apart = standardize_apart(nnf, state);
    auto matrix = skolemize(apart, state);
    detail::RawClauses raw;
    if (!detail::distribute(matrix, raw, max_clauses)) {
        result.explosion = ClauseExplosion{max_clauses, "CNF conversion exceeds " + std::to_string(max_clauses) +
                                                            " clauses"};
        return result;
    }
    std::set<Clause> seen;
    for (auto& lits : raw) {
        Clause c(std::move(lits));
        if (c.is_tautology() || !seen.insert(c).second) continue;
        result.clauses.push_back(std::move(c));
    }
    return result;
}

inline ClausifyResult clausify(const Formula& f, std::size_t max_clauses = 20000) {
    SkolemState state;
    return clausify(f, state, max_clauses);
}

} // namespace logiclm::fol
