#pragma once

// Syntactic unification with occurs check, one-way matching and variable
// renaming over the shared term representation.

#include "../core_ir.hpp"

#include <functional>
#include <map>

namespace logiclm::fol {

/// Triangular substitution: bindings may refer to other bound variables.
using Substitution = std::map<std::string, Term>;

inline Term apply(const Term& t, const Substitution& s) {
    if (t.is_variable()) {
        auto it = s.find(t.name());
        return it == s.end() ? t : fol::apply(it->second, s);
    }
    if (!t.is_function()) return t;
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (const auto& a : t.args()) args.push_back(fol::apply(a, s));
    return Term::function(t.name(), std::move(args));
}

inline Atom apply(const Atom& a, const Substitution& s) {
    Atom out{a.predicate, {}};
    out.args.reserve(a.args.size());
    for (const auto& t : a.args) out.args.push_back(fol::apply(t, s));
    return out;
}

inline Literal apply(const Literal& l, const Substitution& s) { return {l.positive, fol::apply(l.atom, s)}; }

namespace detail {

inline Term walk(const Term& t, const Substitution& s) {
    const Term* cur = &t;
    while (cur->is_variable()) {
        auto it = s.find(cur->name());
        if (it == s.end()) break;
        cur = &it->second;
    }
    return *cur;
}

inline bool occurs(const std::string& var, const Term& t, const Substitution& s) {
    Term w = walk(t, s);
    if (w.is_variable()) return w.name() == var;
    for (const auto& a : w.args())
        if (occurs(var, a, s)) return true;
    return false;
}

} // namespace detail

/// Extends `s` to a most general unifier of `a` and `b`; false if none exists.
/// `s` is unspecified on failure.
inline bool unify(const Term& a, const Term& b, Substitution& s) {
    Term x = detail::walk(a, s);
    Term y = detail::walk(b, s);
    if (x.is_variable() && y.is_variable() && x.name() == y.name()) return true;
    if (x.is_variable()) {
        if (detail::occurs(x.name(), y, s)) return false;
        s.emplace(x.name(), std::move(y));
        return true;
    }
    if (y.is_variable()) {
        if (detail::occurs(y.name(), x, s)) return false;
        s.emplace(y.name(), std::move(x));
        return true;
    }
    if (x.kind() != y.kind()) return false;
    if (!x.is_function()) return x == y;
    if (x.name() != y.name() || x.args().size() != y.args().size()) return false;
    for (std::size_t i = 0; i < x.args().size(); ++i)
        if (!unify(x.args()[i], y.args()[i], s)) return false;
    return true;
}

inline bool unify(const Atom& a, const Atom& b, Substitution& s) {
    if (a.predicate != b.predicate || a.arity() != b.arity()) return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!unify(a.args[i], b.args[i], s)) return false;
    return true;
}

/// One-way matching: binds only variables of `pattern`; variables of
/// `target` are treated as opaque symbols.
inline bool match(const Term& pattern, const Term& target, Substitution& s) {
    if (pattern.is_variable()) {
        auto [it, inserted] = s.emplace(pattern.name(), target);
        return inserted || it->second == target;
    }
    if (pattern.kind() != target.kind()) return false;
    if (!pattern.is_function()) return pattern == target;
    if (pattern.name() != target.name() || pattern.args().size() != target.args().size()) return false;
    for (std::size_t i = 0; i < pattern.args().size(); ++i)
        if (!match(pattern.args()[i], target.args()[i], s)) return false;
    return true;
}

inline bool match(const Atom& pattern, const Atom& target, Substitution& s) {
    if (pattern.predicate != target.predicate || pattern.arity() != target.arity()) return false;
    for (std::size_t i = 0; i < pattern.args.size(); ++i)
        if (!match(pattern.args[i], target.args[i], s)) return false;
    return true;
}

inline Term rename(const Term& t, const std::map<std::string, std::string>& names) {
    if (t.is_variable()) {
        auto it = names.find(t.name());
        return it == names.end() ? t : Term::variable(it->second);
    }
    if (!t.is_function()) return t;
    std::vector<Term> args;
    for (const auto& a : t.args()) args.push_back(rename(a, names));
    return Term::function(t.name(), std::move(args));
}

/// Maps the variables of `c` to `<prefix>0`, `<prefix>1`, ... in order of
/// first occurrence.
inline std::map<std::string, std::string> variable_names(const Clause& c, const std::string& prefix) {
    std::map<std::string, std::string> names;
    std::function<void(const Term&)> visit = [&](const Term& t) {
        if (t.is_variable() && !names.contains(t.name()))
            names.emplace(t.name(), prefix + std::to_string(names.size()));
        for (const auto& a : t.args()) visit(a);
    };
    for (const auto& l : c.literals())
        for (const auto& t : l.atom.args) visit(t);
    return names;
}

inline Literal rename(const Literal& l, const std::map<std::string, std::string>& names) {
    Atom a{l.atom.predicate, {}};
    for (const auto& t : l.atom.args) a.args.push_back(rename(t, names));
    return {l.positive, std::move(a)};
}

/// Renamed copy of `c` (see variable_names). Literal order may change.
inline Clause rename_variables(const Clause& c, const std::string& prefix) {
    auto names = variable_names(c, prefix);
    std::vector<Literal> lits;
    for (const auto& l : c.literals()) lits.push_back(rename(l, names));
    return Clause(std::move(lits));
}

inline std::string to_string(const Substitution& s) {
    std::string out = "{";
    bool first = true;
    for (const auto& [v, t] : s) {
        if (!first) out += ", ";
        first = false;
        out += "$" + v + " -> " + logiclm::to_string(t);
    }
    return out + "}";
}

} // namespace logiclm::fol
