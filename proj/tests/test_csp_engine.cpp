#include <catch_amalgamated.hpp>

#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <logiclm/csp_engine.hpp>

using namespace logiclm;
using namespace logiclm::csp;

namespace {

CspModel parsed(std::string_view text) {
    auto r = parse_csp(text);
    INFO(text);
    REQUIRE(r.ok());
    return *r.value;
}

std::set<Assignment> as_set(const std::vector<Assignment>& v) { return {v.begin(), v.end()}; }

CspModel with_pairwise_ne(CspModel m) {
    std::vector<CspConstraint> out;
    for (auto& c : m.constraints) {
        const auto* ad = std::get_if<AllDifferent>(&c.expr);
        if (!ad) {
            out.push_back(c);
            continue;
        }
        for (std::size_t i = 0; i < ad->vars.size(); ++i)
            for (std::size_t j = i + 1; j < ad->vars.size(); ++j)
                if (ad->vars[i] != ad->vars[j])
                    out.push_back({Comparison{LinearTerm::variable(ad->vars[i]), CmpOp::Ne,
                                              LinearTerm::variable(ad->vars[j])},
                                   std::nullopt});
    }
    m.constraints = std::move(out);
    return m;
}

/// Every surviving value of a variable has a partner in each binary
/// constraint it shares with another variable, and satisfies its unary ones.
bool arc_consistent(const CspModel& m, const Domains& d) {
    auto check = [&](const ConstraintExpr& e, const std::string& x, const std::string& y) {
        for (auto vx : d.at(x)) {
            bool supported = false;
            for (auto vy : d.at(y)) supported = supported || oracle::holds(e, {{x, vx}, {y, vy}});
            if (!supported) return false;
        }
        return true;
    };
    for (const auto& c : m.constraints) {
        std::vector<std::string> vars;
        for (const auto& v : referenced_variables(c.expr))
            if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
        if (const auto* ad = std::get_if<AllDifferent>(&c.expr)) {
            for (const auto& x : vars)
                for (const auto& y : vars) {
                    if (x == y) continue;
                    AllDifferent pair{{x, y}};
                    if (!check(pair, x, y)) return false;
                }
            (void)ad;
            continue;
        }
        if (vars.size() == 1) {
            for (auto v : d.at(vars[0]))
                if (!oracle::holds(c.expr, {{vars[0], v}})) return false;
        } else if (vars.size() == 2) {
            if (!check(c.expr, vars[0], vars[1]) || !check(c.expr, vars[1], vars[0])) return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("propagate narrows an ordering constraint to its supported values") {
    auto m = parsed("Domain:\nVariables:\nblue_book [IN] [1, 2, 3, 4, 5]\nyellow_book [IN] [1, 2, 3, 4, 5]\n"
                    "Constraints:\nblue_book > yellow_book\nQuery:\nA) blue_book == 1\n");
    auto r = propagate(m);
    REQUIRE_FALSE(r.unsatisfiable());
    CHECK(r.domains->at("blue_book") == std::vector<std::int64_t>{2, 3, 4, 5});
    CHECK(r.domains->at("yellow_book") == std::vector<std::int64_t>{1, 2, 3, 4});
}

TEST_CASE("propagate reports a wiped-out domain") {
    auto m = parsed("Domain:\nVariables:\nx [IN] [1, 2]\nConstraints:\nx == 3\nQuery:\nA) x == 1\n");
    auto r = propagate(m);
    CHECK(r.unsatisfiable());
    CHECK(r.message == "the domain of 'x' becomes empty");
}

TEST_CASE("propagate without constraints leaves the domains alone") {
    auto m = parsed("Domain:\nVariables:\nx [IN] [1, 2, 5]\ny [IN] [3]\nConstraints:\nQuery:\nA) x == 1\n");
    auto r = propagate(m);
    REQUIRE_FALSE(r.unsatisfiable());
    CHECK(r.domains->at("x") == std::vector<std::int64_t>{1, 2, 5});
    CHECK(r.domains->at("y") == std::vector<std::int64_t>{3});
}

TEST_CASE("the vehicle ordering has exactly one solution") {
    auto m = parsed(fixtures::kVehicles);
    auto r = solve_all(m);
    CHECK_FALSE(r.error);
    REQUIRE(r.solutions.size() == 1);
    CHECK(r.solutions[0] == Assignment{{"station_wagon", 1}, {"convertible", 2}, {"minivan", 3}});
    CHECK(as_set(r.solutions) == oracle::csp_brute_force(m));

    auto verdicts = evaluate_options(m);
    CHECK(verdicts.at('A').value == TruthValue::Disproved);
    CHECK(verdicts.at('B').value == TruthValue::Proved);
    CHECK(verdicts.at('C').value == TruthValue::Disproved);
}

TEST_CASE("small solve_all cases") {
    auto one = parsed("Domain:\nVariables:\nx [IN] [1, 2]\nConstraints:\nQuery:\nA) x == 1\n");
    auto r = solve_all(one);
    REQUIRE(r.solutions.size() == 2);
    CHECK(r.solutions[0].at("x") == 1);
    CHECK(r.solutions[1].at("x") == 2);
    CHECK(evaluate_option(one, one.options[0].expr).value == TruthValue::Unknown);

    auto cyclic = parsed("Domain:\nVariables:\nx [IN] [1, 2, 3]\ny [IN] [1, 2, 3]\n"
                         "Constraints:\nx < y\ny < x\nQuery:\nA) x == 1\n");
    auto none = solve_all(cyclic);
    CHECK(none.solutions.empty());
    CHECK_FALSE(none.error);
    auto v = evaluate_option(cyclic, cyclic.options[0].expr);
    CHECK(v.value == TruthValue::Unknown);
    REQUIRE(v.error);
    CHECK(v.error->kind == CspErrorKind::UnsatisfiableModel);
}

TEST_CASE("the solution cap stops enumeration with an error") {
    auto m = parsed("Domain:\nVariables:\nx [IN] [1, 2, 3]\ny [IN] [1, 2, 3]\nConstraints:\nQuery:\nA) x == 1\nB) x >= 1\n");
    auto r = solve_all(m, 4);
    REQUIRE(r.error);
    CHECK(r.error->kind == CspErrorKind::SolutionCapExceeded);
    CHECK(r.solutions.size() == 4);
    CHECK(solve_all(m, 9).solutions.size() == 9);
    CHECK_FALSE(solve_all(m, 9).error);

    // Mixed evidence is still a sound Unknown; uniform evidence is withheld.
    auto a = evaluate_option(r, m.options[0].expr);
    CHECK(a.value == TruthValue::Unknown);
    CHECK_FALSE(a.warnings.empty());
    auto b = evaluate_option(r, m.options[1].expr);
    CHECK(b.value == TruthValue::Unknown);
    CHECK(b.warnings.front().starts_with("SolutionCapExceeded"));
}

TEST_CASE("an expired deadline yields ResourceExhausted") {
    auto m = parsed(fixtures::kVehicles);
    CspLimits limits;
    limits.deadline = Clock::now() - std::chrono::seconds(1);
    auto r = solve_all(m, limits);
    REQUIRE(r.error);
    CHECK(r.error->kind == CspErrorKind::ResourceExhausted);
}

TEST_CASE("solve_all agrees with brute-force enumeration") {
    gen::Rng rng(4242);
    std::size_t nonempty = 0;
    for (int n = 0; n < 400; ++n) {
        auto m = gen::csp_model(rng, {.exotic = n % 2 == 1});
        INFO(print_csp(m));
        auto r = solve_all(m);
        REQUIRE_FALSE(r.error);
        auto expected = oracle::csp_brute_force(m);
        REQUIRE(as_set(r.solutions) == expected);
        REQUIRE(r.solutions.size() == expected.size());  // no duplicates
        REQUIRE(r.stats.solutions_found == r.solutions.size());
        if (!expected.empty()) ++nonempty;
    }
    CHECK(nonempty > 100);
}

TEST_CASE("AllDifferent is equivalent to pairwise disequality") {
    gen::Rng rng(99);
    int with_alldiff = 0;
    for (int n = 0; n < 300; ++n) {
        auto m = gen::csp_model(rng);
        if (std::any_of(m.constraints.begin(), m.constraints.end(),
                        [](const auto& c) { return std::holds_alternative<AllDifferent>(c.expr); }))
            ++with_alldiff;
        INFO(print_csp(m));
        REQUIRE(as_set(solve_all(m).solutions) == as_set(solve_all(with_pairwise_ne(m)).solutions));
    }
    CHECK(with_alldiff > 50);
}

TEST_CASE("propagation is sound and reaches arc consistency") {
    gen::Rng rng(1234);
    for (int n = 0; n < 400; ++n) {
        auto m = gen::csp_model(rng, {.exotic = n % 3 == 0});
        INFO(print_csp(m));
        auto solutions = oracle::csp_brute_force(m);
        auto r = propagate(m);
        if (r.unsatisfiable()) {
            REQUIRE(solutions.empty());
            continue;
        }
        for (const auto& s : solutions)
            for (const auto& [name, value] : s) {
                const auto& d = r.domains->at(name);
                REQUIRE(std::binary_search(d.begin(), d.end(), value));
            }
        for (const auto& v : m.variables) {
            const auto& d = r.domains->at(v.name);
            REQUIRE(std::includes(v.domain.begin(), v.domain.end(), d.begin(), d.end()));
        }
        REQUIRE(arc_consistent(m, *r.domains));
    }
}

TEST_CASE("option verdicts follow solution counts") {
    gen::Rng rng(777);
    std::map<TruthValue, int> seen;
    for (int n = 0; n < 300; ++n) {
        auto m = gen::csp_model(rng);
        auto solved = solve_all(m);
        for (const auto& o : m.options) {
            auto v = evaluate_option(solved, o.expr);
            std::size_t yes = 0;
            for (const auto& s : oracle::csp_brute_force(m)) yes += oracle::holds(o.expr, s) ? 1 : 0;
            if (solved.solutions.empty()) {
                REQUIRE(v.error);
                REQUIRE(v.error->kind == CspErrorKind::UnsatisfiableModel);
                continue;
            }
            REQUIRE_FALSE(v.error);
            auto expected = yes == solved.solutions.size() ? TruthValue::Proved
                            : yes == 0                     ? TruthValue::Disproved
                                                           : TruthValue::Unknown;
            REQUIRE(v.value == expected);
            ++seen[v.value];
        }
    }
    CHECK(seen[TruthValue::Proved] > 0);
    CHECK(seen[TruthValue::Disproved] > 0);
    CHECK(seen[TruthValue::Unknown] > 0);
}

TEST_CASE("solution order is deterministic") {
    gen::Rng rng(31);
    for (int n = 0; n < 100; ++n) {
        auto m = gen::csp_model(rng);
        auto a = solve_all(m);
        auto b = solve_all(m);
        REQUIRE(a.solutions == b.solutions);
        REQUIRE(a.stats.nodes_expanded == b.stats.nodes_expanded);
    }
}
