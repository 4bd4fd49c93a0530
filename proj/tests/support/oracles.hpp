#pragma once

// Reference implementations kept deliberately naive and separate from the
// engines: no indexing, no propagation, no shared helpers beyond the IR.

#include <logiclm/core_ir.hpp>
#include <logiclm/csp_model.hpp>
#include <logiclm/lp_program.hpp>

#include <map>
#include <set>

namespace oracle {

using logiclm::Atom;
using logiclm::Term;

// ---------------------------------------------------------------- LP

/// Iterates every rule under every assignment of its variables to the
/// program's ground terms until nothing changes.
inline std::set<Atom> lp_fixpoint(const logiclm::lp::LpProgram& p) {
    std::set<Atom> facts;
    std::vector<Term> universe;
    auto add_terms = [&](const Atom& a) {
        for (const auto& t : a.args)
            if (!t.is_variable() && std::find(universe.begin(), universe.end(), t) == universe.end())
                universe.push_back(t);
    };
    for (const auto& f : p.facts) {
        facts.insert(f.atom);
        add_terms(f.atom);
    }
    for (const auto& r : p.rules) {
        for (const auto& a : r.body) add_terms(a);
        for (const auto& a : r.head) add_terms(a);
    }

    auto instantiate = [](const Atom& a, const std::map<std::string, Term>& env) {
        Atom out{a.predicate, {}};
        for (const auto& t : a.args) out.args.push_back(t.is_variable() ? env.at(t.name()) : t);
        return out;
    };

    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& r : p.rules) {
            std::set<std::string> var_set;
            for (const auto& a : r.body) logiclm::collect_variables(a, var_set);
            std::vector<std::string> vars(var_set.begin(), var_set.end());
            if (universe.empty() && !vars.empty()) continue;
            std::vector<std::size_t> idx(vars.size(), 0);
            for (;;) {
                std::map<std::string, Term> env;
                for (std::size_t i = 0; i < vars.size(); ++i) env.emplace(vars[i], universe[idx[i]]);
                bool fires = true;
                for (const auto& a : r.body) fires = fires && facts.contains(instantiate(a, env));
                if (fires)
                    for (const auto& h : r.head) changed = facts.insert(instantiate(h, env)).second || changed;
                std::size_t k = 0;
                while (k < vars.size() && ++idx[k] == universe.size()) idx[k++] = 0;
                if (k == vars.size()) break;
            }
        }
    }
    return facts;
}

// ---------------------------------------------------------------- CSP

inline std::int64_t value_of(const logiclm::csp::LinearTerm& t, const std::map<std::string, std::int64_t>& a) {
    return (t.var ? a.at(*t.var) : 0) + t.offset;
}

inline bool holds(const logiclm::csp::ConstraintExpr& e, const std::map<std::string, std::int64_t>& a) {
    using namespace logiclm::csp;
    if (const auto* ad = std::get_if<AllDifferent>(&e)) {
        std::set<std::string> names(ad->vars.begin(), ad->vars.end());
        std::set<std::int64_t> seen;
        for (const auto& n : names)
            if (!seen.insert(a.at(n)).second) return false;
        return true;
    }
    const auto& c = std::get<Comparison>(e);
    auto l = value_of(c.lhs, a);
    auto r = value_of(c.rhs, a);
    switch (c.op) {
    case CmpOp::Eq: return l == r;
    case CmpOp::Ne: return l != r;
    case CmpOp::Lt: return l < r;
    case CmpOp::Gt: return l > r;
    case CmpOp::Le: return l <= r;
    case CmpOp::Ge: return l >= r;
    }
    return false;
}

/// Every point of the Cartesian product of the domains that satisfies all
/// constraints.
inline std::set<std::map<std::string, std::int64_t>> csp_brute_force(const logiclm::csp::CspModel& m) {
    std::set<std::map<std::string, std::int64_t>> out;
    std::vector<std::size_t> idx(m.variables.size(), 0);
    for (const auto& v : m.variables)
        if (v.domain.empty()) return out;
    for (;;) {
        std::map<std::string, std::int64_t> a;
        for (std::size_t i = 0; i < idx.size(); ++i) a[m.variables[i].name] = m.variables[i].domain[idx[i]];
        bool ok = true;
        for (const auto& c : m.constraints) ok = ok && holds(c.expr, a);
        if (ok) out.insert(a);
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == m.variables[k].domain.size()) idx[k++] = 0;
        if (k == idx.size()) break;
    }
    return out;
}

// ---------------------------------------------------------------- propositional

/// Truth value of a quantifier-free formula whose atoms are looked up in `v`.
inline bool truth(const logiclm::Formula& f, const std::map<Atom, bool>& v) {
    using logiclm::FormulaKind;
    const auto& c = f.children();
    switch (f.kind()) {
    case FormulaKind::Atom: return v.at(f.atom());
    case FormulaKind::Not: return !truth(c[0], v);
    case FormulaKind::And: return truth(c[0], v) && truth(c[1], v);
    case FormulaKind::Or: return truth(c[0], v) || truth(c[1], v);
    case FormulaKind::Implies: return !truth(c[0], v) || truth(c[1], v);
    case FormulaKind::Equiv: return truth(c[0], v) == truth(c[1], v);
    case FormulaKind::Xor: return truth(c[0], v) != truth(c[1], v);
    case FormulaKind::AndList: return std::all_of(c.begin(), c.end(), [&](const auto& g) { return truth(g, v); });
    case FormulaKind::OrList: return std::any_of(c.begin(), c.end(), [&](const auto& g) { return truth(g, v); });
    default: throw std::logic_error("quantifier in propositional formula");
    }
}

} // namespace oracle
