#pragma once

// Finite-domain solver: AC-3 propagation, backtracking with MRV and forward
// checking, complete solution enumeration and per-option verdicts.

#include "core_ir.hpp"
#include "csp_model.hpp"

#include <chrono>
#include <deque>
#include <map>

namespace logiclm::csp {

using Clock = std::chrono::steady_clock;
using Assignment = std::map<std::string, std::int64_t>;
using Domains = std::map<std::string, std::vector<std::int64_t>>;

inline std::string to_string(const Assignment& a) {
    std::string out = "{";
    for (auto it = a.begin(); it != a.end(); ++it) {
        if (it != a.begin()) out += ", ";
        out += it->first + ": " + std::to_string(it->second);
    }
    return out + "}";
}

/// Evaluates `e` when every referenced variable is bound in `a`.
inline bool satisfies(const ConstraintExpr& e, const Assignment& a) {
    if (const auto* c = std::get_if<Comparison>(&e)) {
        auto value = [&](const LinearTerm& t) { return (t.var ? a.at(*t.var) : 0) + t.offset; };
        return holds(value(c->lhs), c->op, value(c->rhs));
    }
    const auto& vars = std::get<AllDifferent>(e).vars;
    for (std::size_t i = 0; i < vars.size(); ++i)
        for (std::size_t j = i + 1; j < vars.size(); ++j)
            if (vars[i] != vars[j] && a.at(vars[i]) == a.at(vars[j])) return false;
    return true;
}

inline bool satisfies_all(const CspModel& m, const Assignment& a) {
    for (const auto& c : m.constraints)
        if (!satisfies(c.expr, a)) return false;
    return true;
}

struct PropagationResult {
    std::optional<Domains> domains;  // empty when some domain was wiped out
    std::string message;

    bool unsatisfiable() const noexcept { return !domains.has_value(); }
};

namespace detail {

/// A binary (or unary) view of one comparison or one AllDifferent pair.
struct Arc {
    std::string x;
    std::optional<std::string> y;  // absent for unary constraints
    ConstraintExpr expr;
};

inline std::vector<Arc> decompose(const CspModel& m) {
    std::vector<Arc> arcs;
    for (const auto& c : m.constraints) {
        if (std::holds_alternative<Comparison>(c.expr)) {
            auto vars = referenced_variables(c.expr);
            if (vars.empty()) {
                arcs.push_back({"", std::nullopt, c.expr});
            } else if (vars.size() == 1 || vars[0] == vars[1]) {
                arcs.push_back({vars[0], std::nullopt, c.expr});
            } else {
                arcs.push_back({vars[0], vars[1], c.expr});
            }
            continue;
        }
        const auto& vars = std::get<AllDifferent>(c.expr).vars;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            for (std::size_t j = i + 1; j < vars.size(); ++j) {
                if (vars[i] == vars[j]) continue;
                arcs.push_back({vars[i], vars[j], Comparison{LinearTerm::variable(vars[i]), CmpOp::Ne,
                                                             LinearTerm::variable(vars[j])}});
            }
        }
    }
    return arcs;
}

/// Removes values of `x` without support in `y`; returns true if anything changed.
inline bool revise(Domains& d, const std::string& x, const std::string& y, const ConstraintExpr& e) {
    auto& dx = d[x];
    const auto& dy = d[y];
    Assignment a;
    std::vector<std::int64_t> kept;
    for (auto vx : dx) {
        a[x] = vx;
        bool supported = false;
        for (auto vy : dy) {
            a[y] = vy;
            if (satisfies(e, a)) {
                supported = true;
                break;
            }
        }
        if (supported) kept.push_back(vx);
    }
    if (kept.size() == dx.size()) return false;
    dx = std::move(kept);
    return true;
}

} // namespace detail

/// Arc consistency over the binary decomposition of the constraints.
inline PropagationResult propagate(const CspModel& m) {
    Domains d;
    for (const auto& v : m.variables) d[v.name] = v.domain;
    PropagationResult out;
    auto wiped = [&](const std::string& name) {
        out.message = "the domain of '" + name + "' becomes empty";
        return out;
    };
    for (const auto& v : m.variables)
        if (v.domain.empty()) return wiped(v.name);

    auto arcs = detail::decompose(m);
    for (const auto& arc : arcs) {
        if (arc.x.empty()) {
            if (!satisfies(arc.expr, {})) {
                out.message = "constraint '" + print_expr(arc.expr) + "' is false";
                return out;
            }
            continue;
        }
        if (arc.y) continue;
        auto& dx = d[arc.x];
        std::erase_if(dx, [&](std::int64_t v) { return !satisfies(arc.expr, {{arc.x, v}}); });
        if (dx.empty()) return wiped(arc.x);
    }

    // Directed arcs: (x, y, expr) revises x against y.
    struct Directed {
        std::string x, y;
        const ConstraintExpr* expr;
    };
    std::vector<Directed> directed;
    for (const auto& arc : arcs) {
        if (!arc.y) continue;
        directed.push_back({arc.x, *arc.y, &arc.expr});
        directed.push_back({*arc.y, arc.x, &arc.expr});
    }
    std::deque<std::size_t> queue;
    std::vector<bool> queued(directed.size(), true);
    for (std::size_t i = 0; i < directed.size(); ++i) queue.push_back(i);
    while (!queue.empty()) {
        std::size_t i = queue.front();
        queue.pop_front();
        queued[i] = false;
        const auto& arc = directed[i];
        if (!detail::revise(d, arc.x, arc.y, *arc.expr)) continue;
        if (d[arc.x].empty()) return wiped(arc.x);
        for (std::size_t k = 0; k < directed.size(); ++k) {
            if (!queued[k] && directed[k].y == arc.x && !(directed[k].x == arc.y && directed[k].expr == arc.expr)) {
                queued[k] = true;
                queue.push_back(k);
            }
        }
    }
    out.domains = std::move(d);
    return out;
}

struct SearchStats {
    std::size_t nodes_expanded = 0;
    std::size_t backtracks = 0;
    std::size_t solutions_found = 0;
};

enum class CspErrorKind : std::uint8_t { SolutionCapExceeded, UnsatisfiableModel, ResourceExhausted };

inline std::string_view to_string(CspErrorKind k) {
    switch (k) {
    case CspErrorKind::SolutionCapExceeded: return "SolutionCapExceeded";
    case CspErrorKind::UnsatisfiableModel: return "UnsatisfiableModel";
    case CspErrorKind::ResourceExhausted: return "ResourceExhausted";
    }
    return "";
}

struct CspError {
    CspErrorKind kind;
    std::string message;
};

struct CspLimits {
    std::size_t max_solutions = 10000;
    std::optional<Clock::time_point> deadline;
};

struct SolveResult {
    std::vector<Assignment> solutions;
    SearchStats stats;
    std::optional<CspError> error;  // enumeration stopped early
};

namespace detail {

class Search {
public:
    Search(const CspModel& m, const CspLimits& limits) : model_(m), limits_(limits) {
        for (std::size_t i = 0; i < m.variables.size(); ++i) index_[m.variables[i].name] = i;
        watch_.resize(m.variables.size());
        for (std::size_t c = 0; c < m.constraints.size(); ++c) {
            std::set<std::size_t> seen;
            for (const auto& v : referenced_variables(m.constraints[c].expr))
                if (seen.insert(index_.at(v)).second) watch_[index_.at(v)].push_back(c);
        }
    }

    SolveResult run() {
        auto reduced = propagate(model_);
        if (reduced.unsatisfiable()) return std::move(result_);
        std::vector<std::vector<std::int64_t>> domains;
        for (const auto& v : model_.variables) domains.push_back(reduced.domains->at(v.name));
        assigned_.assign(model_.variables.size(), std::nullopt);
        descend(domains);
        return std::move(result_);
    }

private:
    using Live = std::vector<std::vector<std::int64_t>>;

    bool stopped() const { return result_.error.has_value(); }

    std::optional<std::size_t> pick(const Live& domains) const {
        std::optional<std::size_t> best;
        for (std::size_t i = 0; i < domains.size(); ++i) {
            if (assigned_[i]) continue;
            if (!best || domains[i].size() < domains[*best].size()) best = i;
        }
        return best;
    }

    Assignment partial() const {
        Assignment a;
        for (std::size_t i = 0; i < assigned_.size(); ++i)
            if (assigned_[i]) a[model_.variables[i].name] = *assigned_[i];
        return a;
    }

    /// Constraints on `var` whose variables are all bound must hold; the
    /// AllDifferent check uses the bound members only.
    bool consistent(std::size_t var, const Assignment& a) const {
        for (std::size_t c : watch_[var]) {
            const auto& expr = model_.constraints[c].expr;
            if (const auto* ad = std::get_if<AllDifferent>(&expr)) {
                std::int64_t mine = a.at(model_.variables[var].name);
                for (const auto& other : ad->vars) {
                    if (other == model_.variables[var].name) continue;
                    auto it = a.find(other);
                    if (it != a.end() && it->second == mine) return false;
                }
                continue;
            }
            bool bound = true;
            for (const auto& v : referenced_variables(expr)) bound = bound && a.contains(v);
            if (bound && !satisfies(expr, a)) return false;
        }
        return true;
    }

    /// Forward checking: prunes the domains of unassigned neighbours of
    /// `var`. Returns false on a wipe-out.
    bool forward_check(std::size_t var, Assignment& a, Live& domains) const {
        for (std::size_t c : watch_[var]) {
            const auto& expr = model_.constraints[c].expr;
            for (const auto& name : referenced_variables(expr)) {
                std::size_t other = index_.at(name);
                if (assigned_[other]) continue;
                // Only prune when `other` is the last unbound variable of the constraint.
                bool last = true;
                if (std::holds_alternative<Comparison>(expr)) {
                    for (const auto& v : referenced_variables(expr))
                        if (v != name && !a.contains(v)) last = false;
                }
                if (!last) continue;
                auto& d = domains[other];
                std::erase_if(d, [&](std::int64_t value) {
                    a[name] = value;
                    bool ok = std::holds_alternative<Comparison>(expr) ? satisfies(expr, a)
                                                                       : value != a.at(model_.variables[var].name);
                    a.erase(name);
                    return !ok;
                });
                if (d.empty()) return false;
            }
        }
        return true;
    }

    void descend(Live& domains) {
        if (stopped()) return;
        if (limits_.deadline && Clock::now() > *limits_.deadline) {
            result_.error = CspError{CspErrorKind::ResourceExhausted, "time budget exhausted during search"};
            return;
        }
        auto var = pick(domains);
        if (!var) {
            if (result_.solutions.size() == limits_.max_solutions) {
                result_.error = CspError{CspErrorKind::SolutionCapExceeded,
                                         "more than " + std::to_string(limits_.max_solutions) + " solutions"};
                return;
            }
            result_.solutions.push_back(partial());
            ++result_.stats.solutions_found;
            return;
        }
        const auto values = domains[*var];
        for (auto value : values) {
            ++result_.stats.nodes_expanded;
            assigned_[*var] = value;
            Assignment a = partial();
            bool ok = consistent(*var, a);
            if (ok) {
                Live next = domains;
                next[*var] = {value};
                if (forward_check(*var, a, next)) descend(next);
            }
            assigned_[*var].reset();
            if (stopped()) return;
            ++result_.stats.backtracks;
        }
    }

    const CspModel& model_;
    CspLimits limits_;
    std::map<std::string, std::size_t> index_;
    std::vector<std::vector<std::size_t>> watch_;
    std::vector<std::optional<std::int64_t>> assigned_;
    SolveResult result_;
};

} // namespace detail

/// Enumerates every solution (up to the cap) in a deterministic order:
/// MRV variable choice with ties broken by declaration order, values ascending.
inline SolveResult solve_all(const CspModel& m, const CspLimits& limits = {}) {
    return detail::Search(m, limits).run();
}

inline SolveResult solve_all(const CspModel& m, std::size_t max_solutions) {
    CspLimits limits;
    limits.max_solutions = max_solutions;
    return solve_all(m, limits);
}

struct OptionVerdict {
    TruthValue value = TruthValue::Unknown;
    std::optional<CspError> error;
    std::vector<std::string> warnings;
};

/// Verdict of `opt` over an already enumerated solution set.
inline OptionVerdict evaluate_option(const SolveResult& solved, const ConstraintExpr& opt) {
    OptionVerdict out;
    if (solved.error && solved.error->kind != CspErrorKind::SolutionCapExceeded &&
        solved.error->kind != CspErrorKind::ResourceExhausted) {
        out.error = solved.error;
        return out;
    }
    if (solved.solutions.empty() && !solved.error) {
        out.error = CspError{CspErrorKind::UnsatisfiableModel, "the constraints admit no solution"};
        return out;
    }
    std::size_t yes = 0;
    for (const auto& s : solved.solutions)
        if (satisfies(opt, s)) ++yes;
    if (solved.error) {
        out.warnings.push_back(std::string(to_string(solved.error->kind)) + ": " + solved.error->message);
        if (yes == 0 || yes == solved.solutions.size()) return out;  // incomplete evidence
    }
    out.value = yes == solved.solutions.size() ? TruthValue::Proved : yes == 0 ? TruthValue::Disproved
                                                                               : TruthValue::Unknown;
    return out;
}

inline OptionVerdict evaluate_option(const CspModel& m, const ConstraintExpr& opt, const CspLimits& limits = {}) {
    return evaluate_option(solve_all(m, limits), opt);
}

/// Verdict for every lettered option of the model, from one enumeration.
inline std::map<char, OptionVerdict> evaluate_options(const CspModel& m, const CspLimits& limits = {}) {
    auto solved = solve_all(m, limits);
    std::map<char, OptionVerdict> out;
    for (const auto& o : m.options) out[o.letter] = evaluate_option(solved, o.expr);
    return out;
}

} // namespace logiclm::csp
