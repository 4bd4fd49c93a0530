#include <catch_amalgamated.hpp>

#include "support/fixtures.hpp"
#include "support/generators.hpp"

#include <logiclm/csp_model.hpp>
#include <logiclm/fol_problem.hpp>
#include <logiclm/lp_program.hpp>

using namespace logiclm;

namespace {

Atom atom(std::string p, std::vector<Term> args) { return {std::move(p), std::move(args)}; }
Term cst(std::string c) { return Term::constant(std::move(c)); }
Term var(std::string v) { return Term::variable(std::move(v)); }
Formula fatom(std::string p, std::vector<Term> args) { return Formula::atom(atom(std::move(p), std::move(args))); }

std::vector<std::string> lines_of(std::string_view text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        auto nl = text.find('\n', start);
        out.emplace_back(text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start));
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
    return out;
}

/// Spans are 1-based; a zero-length span may sit one past the end of a line
/// (or on the line after the last one, for "missing X" errors).
bool span_in_bounds(const SourceSpan& s, std::string_view text) {
    auto lines = lines_of(text);
    if (s.line < 1 || s.column < 1 || s.length < 0) return false;
    if (static_cast<std::size_t>(s.line) > lines.size()) return s.length == 0 && s.column == 1;
    const auto& l = lines[static_cast<std::size_t>(s.line - 1)];
    return static_cast<std::size_t>(s.column - 1 + s.length) <= l.size() + 1;
}

template <typename T>
void check_total(const ParseResult<T>& r, std::string_view input) {
    INFO(input);
    REQUIRE(r.value.has_value() != !r.errors.empty());
    for (const auto& e : r.errors) REQUIRE(span_in_bounds(e.span, input));
}

std::string random_bytes(gen::Rng& rng, int max_len) {
    std::string s(static_cast<std::size_t>(gen::uniform(rng, 0, max_len)), '\0');
    for (auto& c : s) c = static_cast<char>(gen::uniform(rng, 0, 255));
    return s;
}

/// Byte-level mutations of a valid text: these reach deep into the parsers,
/// unlike uniform noise which mostly fails at the first header.
std::string mutate(gen::Rng& rng, std::string s) {
    static const std::string kInteresting = "()[],'\"$:>&=!<\n\t #-0123456789";
    int edits = gen::uniform(rng, 1, 4);
    for (int i = 0; i < edits; ++i) {
        auto pos = static_cast<std::size_t>(gen::uniform(rng, 0, static_cast<int>(s.size())));
        switch (gen::uniform(rng, 0, 3)) {
        case 0: if (pos < s.size()) s.erase(pos, static_cast<std::size_t>(gen::uniform(rng, 1, 8))); break;
        case 1: s.insert(pos, 1, kInteresting[static_cast<std::size_t>(gen::uniform(rng, 0, static_cast<int>(kInteresting.size()) - 1))]); break;
        case 2: if (pos < s.size()) s[pos] = static_cast<char>(gen::uniform(rng, 0, 255)); break;
        default: s = s.substr(0, pos); break;
        }
    }
    return s;
}

} // namespace

// ---------------------------------------------------------------- LP

TEST_CASE("parse_lp reads the circuit rule") {
    auto r = lp::parse_lp(fixtures::kCircuit);
    REQUIRE(r.ok());
    const auto& p = *r.value;
    REQUIRE(p.rules.size() == 1);
    CHECK(p.rules[0].body == std::vector<Atom>{atom("Complete", {cst("Circuit"), Term::boolean(true)}),
                                               atom("Has", {cst("Circuit"), cst("LightBulb")})});
    CHECK(p.rules[0].head == std::vector<Atom>{atom("Glowing", {cst("LightBulb"), Term::boolean(true)})});
    CHECK(p.query == atom("Glowing", {cst("LightBulb"), Term::boolean(true)}));
    CHECK(p.predicates[0].params == std::vector<std::string>{"$x", "bool"});
    CHECK(p.predicates[0].gloss == "Is x complete?");
}

TEST_CASE("parse_lp reads an unglossed ground fact") {
    auto r = lp::parse_lp("Predicates:\nTumpuses($x, bool)\nFacts:\nTumpuses(Alex, True)\nRules:\nQuery:\nTumpuses(Alex, True)\n");
    REQUIRE(r.ok());
    REQUIRE(r.value->facts.size() == 1);
    CHECK(r.value->facts[0].atom == atom("Tumpuses", {cst("Alex"), Term::boolean(true)}));
    CHECK_FALSE(r.value->facts[0].gloss.has_value());
    CHECK(r.value->rules.empty());
}

TEST_CASE("parse_lp rejects a head variable missing from the body") {
    std::string text = "Predicates:\nBad($x)\nGood($x)\nFacts:\nBad(a)\nRules:\nBad($x) >>> Good($y)\nQuery:\nGood(a)\n";
    auto r = lp::parse_lp(text);
    REQUIRE_FALSE(r.ok());
    REQUIRE(r.errors.size() == 1);
    CHECK(r.errors[0].kind == ParseErrorKind::UnboundVariable);
    CHECK(r.errors[0].span.line == 7);
    CHECK(r.errors[0].span.column == 18);
    CHECK(r.errors[0].span.length == 2);
    CHECK(r.errors[0].message.find("'$y'") != std::string::npos);
}

TEST_CASE("parse_lp diagnostics name the offending item") {
    SECTION("undeclared predicate, the Quite typo as printed") {
        auto r = lp::parse_lp(fixtures::kProofWriterAsPrinted);
        REQUIRE(r.errors.size() == 1);
        CHECK(render(r.errors[0]) ==
              "line 8, column 1: UnknownPredicate: predicate 'Quite' is not declared in the Predicates section");
    }
    SECTION("arity") {
        auto r = lp::parse_lp("Predicates:\nLikes($x, $y)\nFacts:\nLikes(a)\nRules:\nQuery:\nLikes(a, b)\n");
        REQUIRE(r.errors.size() == 1);
        CHECK(r.errors[0].kind == ParseErrorKind::ArityMismatch);
        CHECK(r.errors[0].message == "predicate 'Likes' used with 1 argument(s) but has arity 2");
    }
    SECTION("non-ground fact") {
        auto r = lp::parse_lp("Predicates:\nP($x)\nFacts:\nP($x)\nRules:\nQuery:\nP(a)\n");
        REQUIRE(r.errors.size() == 1);
        CHECK(r.errors[0].kind == ParseErrorKind::UnboundVariable);
    }
    SECTION("missing section") {
        auto r = lp::parse_lp("Predicates:\nP($x)\nRules:\nQuery:\nP(a)\n");
        REQUIRE_FALSE(r.ok());
        CHECK(r.errors[0].kind == ParseErrorKind::MissingSection);
        CHECK(r.errors[0].message == "missing section header 'Facts:'");
    }
    SECTION("empty input") {
        auto r = lp::parse_lp("");
        REQUIRE_FALSE(r.ok());
        CHECK(r.errors[0].kind == ParseErrorKind::MissingSection);
    }
    SECTION("syntax error names the expected token") {
        auto r = lp::parse_lp("Predicates:\nP($x)\nFacts:\nP(a\nRules:\nQuery:\nP(a)\n");
        REQUIRE(r.errors.size() == 1);
        CHECK(r.errors[0].kind == ParseErrorKind::Syntax);
        CHECK(r.errors[0].message.find("expected") != std::string::npos);
        CHECK(r.errors[0].span.line == 4);
    }
}

TEST_CASE("parse_lp is lenient on layout") {
    auto r = lp::parse_lp("Here is the program.\n  predicates :  \nP($x, bool)\nFACTS:\n```\nP(a, True)\n```\nrules:\n"
                          "Query:\nP(a, True)\n\nI hope this helps!\n");
    REQUIRE(r.ok());
    CHECK(r.value->facts.size() == 1);
    CHECK(r.warnings.size() >= 2);  // leading and trailing prose
}

TEST_CASE("print_lp emits the && body and >>> arrow") {
    auto p = *lp::parse_lp(fixtures::kCircuit).value;
    auto text = lp::print_lp(p);
    CHECK(text.find("Complete(Circuit, True) && Has(Circuit, LightBulb) >>> Glowing(LightBulb, True) ::: If the "
                    "circuit is complete") != std::string::npos);
    CHECK(text == fixtures::kCircuit);
}

// ---------------------------------------------------------------- FOL

TEST_CASE("parse_fol reads a nested existential") {
    std::string text = "Facts:\nQuery:\nExists($x2, Exists($x1, AndList([Atom('Czech', $x1), Atom('Author', $x2, $x1), "
                       "Atom('Book', $x2), Atom('Publish', $x2, 'year1946')])))\n";
    auto r = fol::parse_fol(text);
    REQUIRE(r.ok());
    auto expected = Formula::exists(
        "x2", Formula::exists("x1", Formula::and_list({fatom("Czech", {var("x1")}), fatom("Author", {var("x2"), var("x1")}),
                                                       fatom("Book", {var("x2")}),
                                                       fatom("Publish", {var("x2"), cst("year1946")})})));
    CHECK(r.value->query.formula == expected);
    CHECK(r.value->facts.empty());
}

TEST_CASE("parse_fol reads a bare ground atom with either quote style") {
    auto a = fol::parse_fol("Facts:\nAtom('P','a')\nQuery:\nAtom(\"P\", \"a\")\n");
    REQUIRE(a.ok());
    CHECK(a.value->facts[0].formula == fatom("P", {cst("a")}));
    CHECK(a.value->query.formula == fatom("P", {cst("a")}));
    CHECK(fol::print_formula(a.value->query.formula) == "Atom('P', 'a')");
}

TEST_CASE("parse_fol rejects a variable under the wrong binder") {
    auto r = fol::parse_fol("Facts:\nForall($x1, Atom('P', $x2))\nQuery:\nAtom('P','a')\n");
    REQUIRE(r.errors.size() == 1);
    CHECK(r.errors[0].kind == ParseErrorKind::UnboundVariable);
    CHECK(r.errors[0].message == "free variable '$x2' is not bound to any quantifier");
    CHECK(r.errors[0].span.line == 2);
}

TEST_CASE("parse_fol keeps predicate arities consistent across statements") {
    auto r = fol::parse_fol("Facts:\nAtom('P', 'a')\nQuery:\nAtom('P', 'a', 'b')\n");
    REQUIRE(r.errors.size() == 1);
    CHECK(r.errors[0].kind == ParseErrorKind::ArityMismatch);
}

TEST_CASE("the printed FOLIO excerpt reports its missing comma") {
    auto r = fol::parse_fol(fixtures::kFolioAsPrinted);
    REQUIRE(r.errors.size() == 1);
    CHECK(r.errors[0].kind == ParseErrorKind::Syntax);
    CHECK(r.errors[0].span.line == 2);
    CHECK(r.errors[0].message.find("expected") != std::string::npos);
}

// ---------------------------------------------------------------- CSP

TEST_CASE("parse_csp reads domains, glossed constraints and options") {
    auto r = csp::parse_csp(fixtures::kVehicles);
    REQUIRE(r.ok());
    const auto& m = *r.value;
    CHECK(m.variables.size() == 3);
    CHECK(m.variables[0].domain == std::vector<std::int64_t>{1, 2, 3});
    CHECK(m.legend.size() == 2);
    const auto& c0 = m.constraints[0];
    CHECK(c0.gloss == "The station wagon is the oldest.");
    CHECK(std::get<csp::Comparison>(c0.expr) ==
          csp::Comparison{csp::LinearTerm::variable("station_wagon"), csp::CmpOp::Eq, csp::LinearTerm::constant(1)});
    CHECK(std::get<csp::AllDifferent>(m.constraints[2].expr).vars ==
          std::vector<std::string>{"station_wagon", "convertible", "minivan"});
    REQUIRE(m.options.size() == 3);
    CHECK(m.options[1].letter == 'B');

    auto books = csp::parse_csp("Domain:\n1: leftmost\nVariables:\nblue_book [IN] [1,2,3,4,5]\nConstraints:\nQuery:\nA) blue_book == 1\n");
    REQUIRE(books.ok());
    CHECK(books.value->variables[0].domain == std::vector<std::int64_t>{1, 2, 3, 4, 5});
}

TEST_CASE("parse_csp rejects undeclared variables") {
    auto r = csp::parse_csp("Domain:\nVariables:\ncar [IN] [1, 2]\nConstraints:\ntruck > car\nQuery:\nA) car == 1\n");
    REQUIRE(r.errors.size() == 1);
    CHECK(r.errors[0].kind == ParseErrorKind::UndeclaredVariable);
    CHECK(r.errors[0].message == "variable 'truck' is not declared in the Variables section");
    CHECK(r.errors[0].span == SourceSpan{5, 1, 5});
}

TEST_CASE("an empty Constraints section prints and re-parses") {
    csp::CspModel m;
    m.variables.push_back({"x", {1, 2}});
    m.options.push_back({'A', csp::Comparison{csp::LinearTerm::variable("x"), csp::CmpOp::Eq, csp::LinearTerm::constant(1)}, {}});
    auto text = csp::print_csp(m);
    CHECK(text.find("Constraints:\nQuery:\n") != std::string::npos);
    auto back = csp::parse_csp(text);
    REQUIRE(back.ok());
    CHECK(*back.value == m);
}

// ---------------------------------------------------------------- template fixtures

TEST_CASE("every shipped demonstration parses and round-trips") {
    struct Case {
        std::string id, header;
    };
    for (const auto& c : std::vector<Case>{{"prontoqa", "Predicates:"}, {"proofwriter", "Predicates:"},
                                           {"folio", "Facts:"}, {"logical_deduction", "Domain:"}}) {
        auto programs = fixtures::demo_programs(c.id, c.header);
        CHECK(programs.size() == 5);
        for (const auto& text : programs) {
            INFO(c.id << "\n" << text);
            if (c.header == "Predicates:") {
                auto r = lp::parse_lp(text);
                REQUIRE(r.ok());
                CHECK(r.warnings.empty());
                CHECK(lp::parse_lp(lp::print_lp(*r.value)).value == r.value);
            } else if (c.header == "Facts:") {
                auto r = fol::parse_fol(text);
                REQUIRE(r.ok());
                CHECK(r.warnings.empty());
                CHECK(fol::parse_fol(fol::print_fol(*r.value)).value == r.value);
            } else {
                auto r = csp::parse_csp(text);
                REQUIRE(r.ok());
                CHECK(r.warnings.empty());
                CHECK(csp::parse_csp(csp::print_csp(*r.value)).value == r.value);
            }
        }
    }
}

TEST_CASE("printing canonical demonstrations reproduces them byte for byte") {
    for (const auto& text : fixtures::demo_programs("proofwriter", "Predicates:"))
        CHECK(lp::print_lp(*lp::parse_lp(text).value) == text + "\n");
    for (const auto& text : fixtures::demo_programs("logical_deduction", "Domain:"))
        CHECK(csp::print_csp(*csp::parse_csp(text).value) == text + "\n");
}

// ---------------------------------------------------------------- properties

TEST_CASE("generated programs round-trip through print and parse") {
    gen::Rng rng(1);
    for (int n = 0; n < 1500; ++n) {
        gen::LpShape shape;
        shape.exotic_terms = n % 2 == 0;
        shape.bool_polarity = n % 3 == 0;
        shape.max_arity = 3;
        auto p = gen::lp_program(rng, shape);
        auto text = lp::print_lp(p);
        INFO(text);
        auto r = lp::parse_lp(text);
        REQUIRE(r.errors.empty());
        REQUIRE(*r.value == p);
    }
    for (int n = 0; n < 1500; ++n) {
        gen::FolSyntaxGenerator g(rng);
        auto p = g.problem();
        auto text = fol::print_fol(p);
        INFO(text);
        auto r = fol::parse_fol(text);
        REQUIRE(r.errors.empty());
        REQUIRE(*r.value == p);
    }
    for (int n = 0; n < 1500; ++n) {
        gen::CspShape shape;
        shape.exotic = n % 2 == 0;
        auto m = gen::csp_model(rng, shape);
        auto text = csp::print_csp(m);
        INFO(text);
        auto r = csp::parse_csp(text);
        REQUIRE(r.errors.empty());
        REQUIRE(*r.value == m);
    }
}

TEST_CASE("glosses never change the parsed IR") {
    gen::Rng rng(2);
    for (int n = 0; n < 300; ++n) {
        gen::LpShape shape;
        shape.exotic_terms = true;
        auto p = gen::lp_program(rng, shape);
        auto bare = lp::parse_lp(lp::print_lp(lp::strip_glosses(p)));
        REQUIRE(bare.ok());
        CHECK(lp::strip_glosses(*lp::parse_lp(lp::print_lp(p)).value) == *bare.value);

        gen::FolSyntaxGenerator g(rng);
        auto f = g.problem();
        auto fbare = fol::parse_fol(fol::print_fol(fol::strip_glosses(f)));
        REQUIRE(fbare.ok());
        CHECK(fol::strip_glosses(*fol::parse_fol(fol::print_fol(f)).value) == *fbare.value);

        gen::CspShape cs;
        cs.exotic = true;
        auto m = gen::csp_model(rng, cs);
        auto cbare = csp::parse_csp(csp::print_csp(csp::strip_glosses(m)));
        REQUIRE(cbare.ok());
        CHECK(csp::strip_glosses(*csp::parse_csp(csp::print_csp(m)).value) == *cbare.value);
    }
    // Gloss text that looks like syntax.
    auto r = lp::parse_lp("Predicates:\nP($x) ::: P($y) >>> Q($z) ::: Facts:\nFacts:\nP(a) ::: )))('\nRules:\nQuery:\nP(a) ::: ???\n");
    REQUIRE(r.ok());
    CHECK(r.value->predicates[0].gloss == "P($y) >>> Q($z) ::: Facts:");
}

TEST_CASE("parsers are total on random and mutated input") {
    gen::Rng rng(3);
    std::vector<std::string> seeds;
    for (const auto& t : fixtures::demo_programs("proofwriter", "Predicates:")) seeds.push_back(t);
    for (const auto& t : fixtures::demo_programs("folio", "Facts:")) seeds.push_back(t);
    for (const auto& t : fixtures::demo_programs("logical_deduction", "Domain:")) seeds.push_back(t);
    for (int n = 0; n < 6000; ++n) {
        std::string input = n % 2 ? random_bytes(rng, 200) : mutate(rng, gen::pick(rng, seeds));
        check_total(lp::parse_lp(input), input);
        check_total(fol::parse_fol(input), input);
        check_total(csp::parse_csp(input), input);
    }
}
