#pragma once

// Brute-force model enumeration over a small finite universe. Used as an
// independent oracle for the prover: formulas are evaluated directly, with no
// normal-form conversion involved.

#include "../core_ir.hpp"
#include "cnf.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <variant>

namespace logiclm::fol {

inline constexpr std::size_t kMaxOracleAtoms = 24;
inline constexpr std::size_t kMaxOracleUniverse = 4;

/// Interpretation over a named universe: every constant denotes itself and
/// every ground atom over the universe has a truth value.
class FiniteModel {
public:
    FiniteModel(std::vector<std::string> universe, std::map<Atom, std::size_t> index)
        : universe_(std::move(universe)), index_(std::move(index)) {}

    const std::vector<std::string>& universe() const noexcept { return universe_; }
    std::size_t atom_count() const noexcept { return index_.size(); }
    void set_bits(std::uint32_t bits) noexcept { bits_ = bits; }

    bool holds(const Atom& ground) const {
        auto it = index_.find(ground);
        return it != index_.end() && ((bits_ >> it->second) & 1U);
    }

private:
    std::vector<std::string> universe_;
    std::map<Atom, std::size_t> index_;
    std::uint32_t bits_ = 0;
};

namespace detail {

inline Term element(const Term& t) {
    switch (t.kind()) {
    case TermKind::Integer:
    case TermKind::Boolean: return Term::constant(logiclm::to_string(t));
    default: return t;
    }
}

inline Atom ground_atom(const Atom& a, const std::map<std::string, std::string>& env) {
    Atom out{a.predicate, {}};
    for (const auto& t : a.args) {
        if (t.is_variable()) {
            auto it = env.find(t.name());
            out.args.push_back(it == env.end() ? t : Term::constant(it->second));
        } else {
            out.args.push_back(element(t));
        }
    }
    return out;
}

inline bool eval(const Formula& f, const FiniteModel& m, std::map<std::string, std::string>& env) {
    switch (f.kind()) {
    case FormulaKind::Atom: return m.holds(ground_atom(f.atom(), env));
    case FormulaKind::Not: return !eval(f.child(), m, env);
    case FormulaKind::And: return eval(f.lhs(), m, env) && eval(f.rhs(), m, env);
    case FormulaKind::Or: return eval(f.lhs(), m, env) || eval(f.rhs(), m, env);
    case FormulaKind::Implies: return !eval(f.lhs(), m, env) || eval(f.rhs(), m, env);
    case FormulaKind::Equiv: return eval(f.lhs(), m, env) == eval(f.rhs(), m, env);
    case FormulaKind::Xor: return eval(f.lhs(), m, env) != eval(f.rhs(), m, env);
    case FormulaKind::AndList:
        for (const auto& c : f.children())
            if (!eval(c, m, env)) return false;
        return true;
    case FormulaKind::OrList:
        for (const auto& c : f.children())
            if (eval(c, m, env)) return true;
        return false;
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
        const bool want = f.kind() == FormulaKind::Exists;
        auto saved = env.find(f.variable()) == env.end() ? std::optional<std::string>{}
                                                         : std::optional<std::string>{env[f.variable()]};
        bool result = !want;
        for (const auto& e : m.universe()) {
            env[f.variable()] = e;
            if (eval(f.child(), m, env) == want) {
                result = want;
                break;
            }
        }
        if (saved) env[f.variable()] = *saved;
        else env.erase(f.variable());
        return result;
    }
    }
    return false;
}

inline bool has_function(const Term& t) { return t.is_function(); }

inline void scan(const Formula& f, std::set<std::string>& constants, std::map<std::string, std::size_t>& arity,
                 bool& functions) {
    std::vector<Atom> atoms;
    collect_atoms(f, atoms);
    for (const auto& a : atoms) {
        arity[a.predicate] = a.arity();
        for (const auto& t : a.args) {
            if (has_function(t)) functions = true;
            else if (!t.is_variable()) constants.insert(logiclm::to_string(element(t)));
        }
    }
}

inline void all_ground(const std::string& pred, std::size_t arity, const std::vector<std::string>& universe,
                       std::vector<Atom>& out) {
    std::vector<std::size_t> idx(arity, 0);
    for (;;) {
        Atom a{pred, {}};
        for (auto i : idx) a.args.push_back(Term::constant(universe[i]));
        out.push_back(std::move(a));
        std::size_t k = 0;
        while (k < arity && ++idx[k] == universe.size()) idx[k++] = 0;
        if (k == arity) return;
    }
}

} // namespace detail

inline bool evaluate(const Formula& f, const FiniteModel& m) {
    std::map<std::string, std::string> env;
    return detail::eval(f, m, env);
}

/// A clause is true when every assignment of universe elements to its
/// variables satisfies some literal.
inline bool evaluate(const Clause& c, const FiniteModel& m) {
    std::set<std::string> var_set;
    for (const auto& l : c.literals()) collect_variables(l.atom, var_set);
    std::vector<std::string> vars(var_set.begin(), var_set.end());
    std::vector<std::size_t> idx(vars.size(), 0);
    const auto& u = m.universe();
    for (;;) {
        std::map<std::string, std::string> env;
        for (std::size_t i = 0; i < vars.size(); ++i) env[vars[i]] = u[idx[i]];
        bool sat = false;
        for (const auto& l : c.literals()) {
            if (m.holds(detail::ground_atom(l.atom, env)) == l.positive) {
                sat = true;
                break;
            }
        }
        if (!sat) return false;
        std::size_t k = 0;
        while (k < vars.size() && ++idx[k] == u.size()) idx[k++] = 0;
        if (k == vars.size()) return true;
    }
}

struct ModelCount {
    std::uint64_t models = 0;
    std::uint64_t interpretations = 0;
    bool satisfiable() const noexcept { return models > 0; }
};

struct OracleTooLarge {
    std::string message;
};

/// Counts the interpretations over `universe` (named constants of the input
/// are added automatically, then `extra_elements` anonymous ones) in which
/// every formula holds. Refuses function terms, universes above 4 elements
/// and more than `max_atoms` (at most 24) ground atoms.
template <typename Item>
std::variant<ModelCount, OracleTooLarge> enumerate_models(const std::vector<Item>& items,
                                                          std::vector<std::string> universe = {},
                                                          std::size_t extra_elements = 0,
                                                          std::size_t max_atoms = kMaxOracleAtoms) {
    std::set<std::string> constants(universe.begin(), universe.end());
    std::map<std::string, std::size_t> arity;
    bool functions = false;
    for (const auto& item : items) {
        if constexpr (std::is_same_v<Item, Clause>) {
            for (const auto& l : item.literals()) detail::scan(Formula::atom(l.atom), constants, arity, functions);
        } else {
            detail::scan(item, constants, arity, functions);
        }
    }
    if (functions) return OracleTooLarge{"function terms make the universe infinite"};
    for (const auto& c : constants)
        if (std::find(universe.begin(), universe.end(), c) == universe.end()) universe.push_back(c);
    for (std::size_t i = 0; i < extra_elements; ++i) universe.push_back("_e" + std::to_string(i));
    if (universe.empty()) universe.push_back("_e");
    if (universe.size() > kMaxOracleUniverse)
        return OracleTooLarge{"universe of " + std::to_string(universe.size()) + " elements exceeds " +
                              std::to_string(kMaxOracleUniverse)};

    std::vector<Atom> atoms;
    for (const auto& [pred, n] : arity) {
        double count = 1;
        for (std::size_t i = 0; i < n; ++i) count *= static_cast<double>(universe.size());
        if (count + static_cast<double>(atoms.size()) > static_cast<double>(std::min(max_atoms, kMaxOracleAtoms)))
            return OracleTooLarge{"more than " + std::to_string(std::min(max_atoms, kMaxOracleAtoms)) + " ground atoms"};
        detail::all_ground(pred, n, universe, atoms);
    }
    std::map<Atom, std::size_t> index;
    for (std::size_t i = 0; i < atoms.size(); ++i) index.emplace(atoms[i], i);
    FiniteModel m(universe, std::move(index));

    ModelCount out;
    const std::uint64_t total = std::uint64_t{1} << atoms.size();
    for (std::uint64_t bits = 0; bits < total; ++bits) {
        m.set_bits(static_cast<std::uint32_t>(bits));
        ++out.interpretations;
        bool all = true;
        for (const auto& item : items) {
            if (!evaluate(item, m)) {
                all = false;
                break;
            }
        }
        if (all) ++out.models;
    }
    return out;
}

/// Counts the quantifiers in `f` that become existential in negation normal
/// form (negated universals count too).
inline std::size_t existential_count(const Formula& f) {
    Formula nnf = to_nnf(desugar(f));
    std::size_t n = 0;
    std::function<void(const Formula&)> walk = [&](const Formula& g) {
        if (g.kind() == FormulaKind::Exists) ++n;
        for (const auto& c : g.children()) walk(c);
    };
    walk(nnf);
    return n;
}

struct OracleVerdict {
    bool facts_consistent = true;
    bool entailed = false;  // facts |= query
    bool refuted = false;   // facts |= not query
};

/// Decides entailment by model enumeration. Exact for function-free
/// problems whose facts and query have only top-level (non-nested)
/// quantifier alternation of the form exists* forall*: a countermodel, if any,
/// exists with one element per named constant plus one per existential.
inline std::variant<OracleVerdict, OracleTooLarge> oracle_entailment(const std::vector<Formula>& facts,
                                                                     const Formula& query,
                                                                     std::size_t max_atoms = kMaxOracleAtoms) {
    auto sat_with = [&](std::optional<Formula> q) -> std::variant<bool, OracleTooLarge> {
        auto items = facts;
        if (q) items.push_back(*q);
        std::size_t extra = 0;
        for (const auto& f : items) extra += existential_count(f);
        auto r = enumerate_models(items, {}, extra, max_atoms);
        if (auto* e = std::get_if<OracleTooLarge>(&r)) return *e;
        return std::get<ModelCount>(r).satisfiable();
    };
    OracleVerdict v;
    auto base = sat_with(std::nullopt);
    if (auto* e = std::get_if<OracleTooLarge>(&base)) return *e;
    v.facts_consistent = std::get<bool>(base);
    auto with_neg = sat_with(Formula::negation(query));
    if (auto* e = std::get_if<OracleTooLarge>(&with_neg)) return *e;
    auto with_pos = sat_with(query);
    if (auto* e = std::get_if<OracleTooLarge>(&with_pos)) return *e;
    v.entailed = !std::get<bool>(with_neg);
    v.refuted = !std::get<bool>(with_pos);
    return v;
}

} // namespace logiclm::fol
