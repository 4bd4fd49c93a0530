#pragma once

// Shared symbolic IR: terms, atoms, first-order formulas, clauses and the
// three-valued verdict used by every parser and engine.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace logiclm {

enum class TermKind : std::uint8_t { Constant, Variable, Integer, Boolean, Function };

/// A first-order term. Variables are stored without their `$` marker.
/// Function applications only arise from Skolemization.
class Term {
public:
    Term() = default;

    static Term constant(std::string name) { return Term(TermKind::Constant, std::move(name)); }

    static Term variable(std::string name) {
        if (name.empty()) throw std::invalid_argument("variable name must be nonempty");
        return Term(TermKind::Variable, std::move(name));
    }

    static Term integer(std::int64_t value) {
        Term t(TermKind::Integer, {});
        t.value_ = value;
        return t;
    }

    static Term boolean(bool value) {
        Term t(TermKind::Boolean, {});
        t.value_ = value ? 1 : 0;
        return t;
    }

    static Term function(std::string name, std::vector<Term> args) {
        if (args.empty()) throw std::invalid_argument("function application needs arity >= 1");
        Term t(TermKind::Function, std::move(name));
        t.args_ = std::move(args);
        return t;
    }

    TermKind kind() const noexcept { return kind_; }
    bool is_variable() const noexcept { return kind_ == TermKind::Variable; }
    bool is_function() const noexcept { return kind_ == TermKind::Function; }
    const std::string& name() const noexcept { return name_; }
    std::int64_t int_value() const noexcept { return value_; }
    bool bool_value() const noexcept { return value_ != 0; }
    const std::vector<Term>& args() const noexcept { return args_; }

    bool is_ground() const {
        if (kind_ == TermKind::Variable) return false;
        for (const auto& a : args_)
            if (!a.is_ground()) return false;
        return true;
    }

    /// Nesting depth; constants and variables have depth 1.
    int depth() const {
        int d = 0;
        for (const auto& a : args_) d = std::max(d, a.depth());
        return d + 1;
    }

    std::strong_ordering operator<=>(const Term& other) const {
        if (auto c = kind_ <=> other.kind_; c != 0) return c;
        if (auto c = value_ <=> other.value_; c != 0) return c;
        if (auto c = name_.compare(other.name_); c != 0) return c <=> 0;
        if (auto c = args_.size() <=> other.args_.size(); c != 0) return c;
        for (std::size_t i = 0; i < args_.size(); ++i)
            if (auto c = args_[i] <=> other.args_[i]; c != 0) return c;
        return std::strong_ordering::equal;
    }
    bool operator==(const Term& other) const { return (*this <=> other) == 0; }

private:
    Term(TermKind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

    TermKind kind_ = TermKind::Constant;
    std::string name_;
    std::int64_t value_ = 0;
    std::vector<Term> args_;
};

/// Plain rendering: `$x`, `Alex`, `31`, `True`, `skf1($x)`.
inline std::string to_string(const Term& t) {
    switch (t.kind()) {
    case TermKind::Constant: return t.name();
    case TermKind::Variable: return "$" + t.name();
    case TermKind::Integer: return std::to_string(t.int_value());
    case TermKind::Boolean: return t.bool_value() ? "True" : "False";
    case TermKind::Function: {
        std::string out = t.name() + "(";
        for (std::size_t i = 0; i < t.args().size(); ++i) {
            if (i) out += ", ";
            out += to_string(t.args()[i]);
        }
        return out + ")";
    }
    }
    return {};
}

struct Atom {
    std::string predicate;
    std::vector<Term> args;

    std::size_t arity() const noexcept { return args.size(); }

    bool is_ground() const {
        for (const auto& a : args)
            if (!a.is_ground()) return false;
        return true;
    }

    auto operator<=>(const Atom&) const = default;
    bool operator==(const Atom&) const = default;
};

inline std::string to_string(const Atom& a) {
    std::string out = a.predicate + "(";
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i) out += ", ";
        out += to_string(a.args[i]);
    }
    return out + ")";
}

inline void collect_variables(const Term& t, std::set<std::string>& out) {
    if (t.is_variable()) out.insert(t.name());
    for (const auto& a : t.args()) collect_variables(a, out);
}

inline void collect_variables(const Atom& a, std::set<std::string>& out) {
    for (const auto& t : a.args) collect_variables(t, out);
}

enum class FormulaKind : std::uint8_t {
    Atom, Not, And, AndList, Or, OrList, Implies, Equiv, Xor, Exists, Forall
};

/// Immutable first-order formula over the constructor vocabulary of the
/// textual FOL notation (`Atom`, `Not`, `And`, `AndList`, ... `Forall`).
class Formula {
public:
    static Formula atom(Atom a) {
        Formula f(FormulaKind::Atom);
        f.atom_ = std::move(a);
        return f;
    }
    static Formula negation(Formula g) { return unary(FormulaKind::Not, std::move(g)); }
    static Formula conj(Formula a, Formula b) { return binary(FormulaKind::And, std::move(a), std::move(b)); }
    static Formula disj(Formula a, Formula b) { return binary(FormulaKind::Or, std::move(a), std::move(b)); }
    static Formula implies(Formula a, Formula b) { return binary(FormulaKind::Implies, std::move(a), std::move(b)); }
    static Formula equiv(Formula a, Formula b) { return binary(FormulaKind::Equiv, std::move(a), std::move(b)); }
    static Formula exclusive_or(Formula a, Formula b) { return binary(FormulaKind::Xor, std::move(a), std::move(b)); }
    static Formula and_list(std::vector<Formula> fs) { return list(FormulaKind::AndList, std::move(fs)); }
    static Formula or_list(std::vector<Formula> fs) { return list(FormulaKind::OrList, std::move(fs)); }
    static Formula exists(std::string var, Formula body) { return quantified(FormulaKind::Exists, std::move(var), std::move(body)); }
    static Formula forall(std::string var, Formula body) { return quantified(FormulaKind::Forall, std::move(var), std::move(body)); }

    FormulaKind kind() const noexcept { return kind_; }
    const Atom& atom() const noexcept { return atom_; }
    const std::vector<Formula>& children() const noexcept { return children_; }
    const Formula& child(std::size_t i = 0) const { return children_.at(i); }
    const Formula& lhs() const { return children_.at(0); }
    const Formula& rhs() const { return children_.at(1); }
    /// Bound variable name (without `$`) for quantifiers.
    const std::string& variable() const noexcept { return var_; }

    bool is_quantifier() const noexcept { return kind_ == FormulaKind::Exists || kind_ == FormulaKind::Forall; }

    bool operator==(const Formula&) const = default;

private:
    explicit Formula(FormulaKind k) : kind_(k) {}

    static Formula unary(FormulaKind k, Formula g) {
        Formula f(k);
        f.children_.push_back(std::move(g));
        return f;
    }
    static Formula binary(FormulaKind k, Formula a, Formula b) {
        Formula f(k);
        f.children_.push_back(std::move(a));
        f.children_.push_back(std::move(b));
        return f;
    }
    static Formula list(FormulaKind k, std::vector<Formula> fs) {
        if (fs.size() < 2) throw std::invalid_argument("AndList/OrList need at least two members");
        Formula f(k);
        f.children_ = std::move(fs);
        return f;
    }
    static Formula quantified(FormulaKind k, std::string var, Formula body) {
        if (var.empty()) throw std::invalid_argument("quantified variable must be nonempty");
        Formula f(k);
        f.var_ = std::move(var);
        f.children_.push_back(std::move(body));
        return f;
    }

    FormulaKind kind_;
    Atom atom_;
    std::string var_;
    std::vector<Formula> children_;
};

namespace detail {
inline void free_vars(const Formula& f, std::multiset<std::string>& bound, std::set<std::string>& out) {
    if (f.kind() == FormulaKind::Atom) {
        std::set<std::string> vars;
        collect_variables(f.atom(), vars);
        for (const auto& v : vars)
            if (!bound.contains(v)) out.insert(v);
        return;
    }
    if (f.is_quantifier()) {
        auto it = bound.insert(f.variable());
        free_vars(f.child(), bound, out);
        bound.erase(it);
        return;
    }
    for (const auto& c : f.children()) free_vars(c, bound, out);
}
} // namespace detail

/// Variables (names without `$`) occurring outside every binding quantifier.
inline std::set<std::string> free_variables(const Formula& f) {
    std::multiset<std::string> bound;
    std::set<std::string> out;
    detail::free_vars(f, bound, out);
    return out;
}

/// Rewrites Xor, Equiv, AndList and OrList into Not/And/Or/Implies.
/// Lists fold left-associatively.
inline Formula desugar(const Formula& f) {
    switch (f.kind()) {
    case FormulaKind::Atom: return f;
    case FormulaKind::Not: return Formula::negation(desugar(f.child()));
    case FormulaKind::And: return Formula::conj(desugar(f.lhs()), desugar(f.rhs()));
    case FormulaKind::Or: return Formula::disj(desugar(f.lhs()), desugar(f.rhs()));
    case FormulaKind::Implies: return Formula::implies(desugar(f.lhs()), desugar(f.rhs()));
    case FormulaKind::Xor: {
        auto a = desugar(f.lhs());
        auto b = desugar(f.rhs());
        return Formula::conj(Formula::disj(a, b), Formula::negation(Formula::conj(a, b)));
    }
    case FormulaKind::Equiv: {
        auto a = desugar(f.lhs());
        auto b = desugar(f.rhs());
        return Formula::conj(Formula::implies(a, b), Formula::implies(b, a));
    }
    case FormulaKind::AndList:
    case FormulaKind::OrList: {
        bool is_and = f.kind() == FormulaKind::AndList;
        Formula acc = desugar(f.children().front());
        for (std::size_t i = 1; i < f.children().size(); ++i) {
            auto next = desugar(f.children()[i]);
            acc = is_and ? Formula::conj(std::move(acc), std::move(next))
                         : Formula::disj(std::move(acc), std::move(next));
        }
        return acc;
    }
    case FormulaKind::Exists: return Formula::exists(f.variable(), desugar(f.child()));
    case FormulaKind::Forall: return Formula::forall(f.variable(), desugar(f.child()));
    }
    return f;
}

/// Collects every atom of `f` in first-occurrence order.
inline void collect_atoms(const Formula& f, std::vector<Atom>& out) {
    if (f.kind() == FormulaKind::Atom) {
        for (const auto& a : out)
            if (a == f.atom()) return;
        out.push_back(f.atom());
        return;
    }
    for (const auto& c : f.children()) collect_atoms(c, out);
}

struct Literal {
    bool positive = true;
    Atom atom;

    Literal negated() const { return {!positive, atom}; }

    auto operator<=>(const Literal&) const = default;
    bool operator==(const Literal&) const = default;
};

inline std::string to_string(const Literal& l) { return (l.positive ? "" : "~") + to_string(l.atom); }

/// A disjunction of literals, kept sorted and duplicate-free.
/// The empty clause denotes contradiction.
class Clause {
public:
    Clause() = default;
    explicit Clause(std::vector<Literal> lits) : literals_(std::move(lits)) { normalize(); }

    const std::vector<Literal>& literals() const noexcept { return literals_; }
    std::size_t size() const noexcept { return literals_.size(); }
    bool empty() const noexcept { return literals_.empty(); }

    bool is_tautology() const {
        for (std::size_t i = 0; i + 1 < literals_.size(); ++i)
            for (std::size_t j = i + 1; j < literals_.size(); ++j)
                if (literals_[i].atom == literals_[j].atom && literals_[i].positive != literals_[j].positive)
                    return true;
        return false;
    }

    int max_term_depth() const {
        int d = 0;
        for (const auto& l : literals_)
            for (const auto& t : l.atom.args) d = std::max(d, t.depth());
        return d;
    }

    auto operator<=>(const Clause&) const = default;
    bool operator==(const Clause&) const = default;

private:
    void normalize() {
        std::sort(literals_.begin(), literals_.end());
        literals_.erase(std::unique(literals_.begin(), literals_.end()), literals_.end());
    }

    std::vector<Literal> literals_;
};

inline std::string to_string(const Clause& c) {
    if (c.empty()) return "[]";
    std::string out;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) out += " | ";
        out += to_string(c.literals()[i]);
    }
    return out;
}

enum class TruthValue : std::uint8_t { Proved, Disproved, Unknown };

inline std::string_view to_string(TruthValue v) {
    switch (v) {
    case TruthValue::Proved: return "Proved";
    case TruthValue::Disproved: return "Disproved";
    case TruthValue::Unknown: return "Unknown";
    }
    return "Unknown";
}

struct SourceSpan {
    int line = 1;    // 1-based
    int column = 1;  // 1-based
    int length = 0;

    bool operator==(const SourceSpan&) const = default;
};

} // namespace logiclm
