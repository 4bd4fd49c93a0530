#include <catch_amalgamated.hpp>

#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <logiclm/core_ir.hpp>

using namespace logiclm;

namespace {

Formula atom(std::string p, std::vector<Term> args = {}) { return Formula::atom({std::move(p), std::move(args)}); }
Term var(std::string v) { return Term::variable(std::move(v)); }
Term cst(std::string c) { return Term::constant(std::move(c)); }

/// Quantifier-free formulas over the nullary atoms A, B, C.
Formula propositional(gen::Rng& rng, int depth) {
    static const std::vector<std::string> kAtoms{"A", "B", "C"};
    if (depth == 0 || gen::coin(rng, 0.2)) return atom(gen::pick(rng, kAtoms));
    auto sub = [&] { return propositional(rng, depth - 1); };
    switch (gen::uniform(rng, 0, 8)) {
    case 0: return Formula::negation(sub());
    case 1: return Formula::conj(sub(), sub());
    case 2: return Formula::disj(sub(), sub());
    case 3: return Formula::implies(sub(), sub());
    case 4: return Formula::equiv(sub(), sub());
    case 5: return Formula::exclusive_or(sub(), sub());
    case 6: return Formula::and_list({sub(), sub(), sub()});
    case 7: return Formula::or_list({sub(), sub()});
    default: return atom(gen::pick(rng, kAtoms));
    }
}

bool sugar_free(const Formula& f) {
    switch (f.kind()) {
    case FormulaKind::Xor:
    case FormulaKind::Equiv:
    case FormulaKind::AndList:
    case FormulaKind::OrList: return false;
    default:
        for (const auto& c : f.children())
            if (!sugar_free(c)) return false;
        return true;
    }
}

} // namespace

TEST_CASE("free variables follow quantifier scope") {
    CHECK(free_variables(atom("P", {var("x1")})) == std::set<std::string>{"x1"});
    CHECK(free_variables(Formula::forall("x1", atom("P", {var("x1")}))).empty());
    auto f = Formula::exists("x2", Formula::conj(atom("Q", {var("x2")}), atom("R", {var("x3")})));
    CHECK(free_variables(f) == std::set<std::string>{"x3"});
    // A variable bound in one branch stays free in its sibling.
    auto g = Formula::conj(Formula::forall("x", atom("P", {var("x")})), atom("Q", {var("x")}));
    CHECK(free_variables(g) == std::set<std::string>{"x"});
}

TEST_CASE("desugar rewrites the derived connectives") {
    auto a = atom("A"), b = atom("B"), c = atom("C");
    CHECK(desugar(Formula::exclusive_or(a, b)) ==
          Formula::conj(Formula::disj(a, b), Formula::negation(Formula::conj(a, b))));
    CHECK(desugar(Formula::and_list({a, b, c})) == Formula::conj(Formula::conj(a, b), c));
    CHECK(desugar(Formula::or_list({a, b, c})) == Formula::disj(Formula::disj(a, b), c));
    CHECK(desugar(Formula::equiv(a, a)) == Formula::conj(Formula::implies(a, a), Formula::implies(a, a)));
}

TEST_CASE("desugar preserves truth tables, is idempotent and keeps free variables") {
    gen::Rng rng(20240611);
    const std::vector<Atom> atoms{{"A", {}}, {"B", {}}, {"C", {}}};
    for (int n = 0; n < 2000; ++n) {
        auto f = propositional(rng, 4);
        auto d = desugar(f);
        REQUIRE(sugar_free(d));
        REQUIRE(desugar(d) == d);
        for (unsigned bits = 0; bits < 8; ++bits) {
            std::map<Atom, bool> v;
            for (unsigned i = 0; i < 3; ++i) v[atoms[i]] = (bits >> i) & 1U;
            REQUIRE(oracle::truth(f, v) == oracle::truth(d, v));
        }
    }
    gen::Rng rng2(7);
    for (int n = 0; n < 500; ++n) {
        gen::FolSyntaxGenerator g(rng2);
        std::vector<std::string> bound{"free"};
        auto f = g.formula(4, bound);
        REQUIRE(free_variables(desugar(f)) == free_variables(f));
        REQUIRE(desugar(desugar(f)) == desugar(f));
    }
}

TEST_CASE("IR constructors enforce their invariants") {
    CHECK_THROWS_AS(Term::variable(""), std::invalid_argument);
    CHECK_THROWS_AS(Term::function("f", {}), std::invalid_argument);
    CHECK_THROWS_AS(Formula::and_list({atom("A")}), std::invalid_argument);
    CHECK_THROWS_AS(Formula::or_list({}), std::invalid_argument);
    CHECK_THROWS_AS(Formula::forall("", atom("A")), std::invalid_argument);
}

TEST_CASE("literal kinds are distinct and render in surface syntax") {
    CHECK(Term::integer(1) != Term::boolean(true));
    CHECK(Term::constant("True") != Term::boolean(true));
    CHECK(Term::constant("x") != Term::variable("x"));
    CHECK(to_string(Term::variable("x1")) == "$x1");
    CHECK(to_string(Term::integer(-31)) == "-31");
    CHECK(to_string(Atom{"Age", {cst("Peter"), Term::integer(31)}}) == "Age(Peter, 31)");
    CHECK(to_string(Term::function("skf1", {var("x")})) == "skf1($x)");
    CHECK(Term::function("f", {Term::function("g", {var("x")})}).depth() == 3);
    CHECK_FALSE(Term::function("f", {var("x")}).is_ground());
}

TEST_CASE("clauses are duplicate-free and the empty clause exists") {
    Literal p{true, {"P", {cst("a")}}};
    Literal np = p.negated();
    Clause c({p, p, np});
    CHECK(c.size() == 2);
    CHECK(c.is_tautology());
    CHECK(Clause({np, p}) == Clause({p, np}));
    Clause empty;
    CHECK(empty.empty());
    CHECK(to_string(empty) == "[]");
    CHECK(to_string(Clause({np})) == "~P(a)");
}

TEST_CASE("truth values render as their names") {
    CHECK(to_string(TruthValue::Proved) == "Proved");
    CHECK(to_string(TruthValue::Disproved) == "Disproved");
    CHECK(to_string(TruthValue::Unknown) == "Unknown");
}
