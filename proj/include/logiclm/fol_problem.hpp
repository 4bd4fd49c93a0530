#pragma once

// First-order problems in constructor notation:
//   Forall($x1, Implies(Atom('Coffee', $x1), Atom('Caffeine', $x1))) ::: gloss
// split into a Facts section and a single-formula Query section.

#include "parse_support.hpp"

#include <map>

namespace logiclm::fol {

struct FolStatement {
    Formula formula;
    std::optional<std::string> gloss;

    bool operator==(const FolStatement&) const = default;
};

struct FolProblem {
    std::vector<FolStatement> facts;
    FolStatement query{Formula::atom({}), std::nullopt};

    bool operator==(const FolProblem&) const = default;
};

inline const std::vector<std::string>& section_vocabulary() {
    static const std::vector<std::string> kVocabulary{"Predicates", "Facts", "Query"};
    return kVocabulary;
}

namespace detail {

constexpr int kMaxNesting = 256;

struct FreeOccurrence {
    std::string name;
    SourceSpan span;
};

class FormulaParser {
public:
    FormulaParser(TokenStream& ts, std::map<std::string, std::size_t>& arities) : ts_(ts), arities_(arities) {}

    std::optional<Formula> parse() { return formula(0); }

    const ParseError& error() const { return error_; }
    const std::vector<FreeOccurrence>& free_occurrences() const { return free_; }
    const std::vector<ParseError>& semantic_errors() const { return semantic_; }

private:
    std::optional<Formula> fail(ParseError e) {
        error_ = std::move(e);
        return std::nullopt;
    }

    bool expect(TokenKind k, std::string_view what) {
        if (ts_.accept(k)) return true;
        error_ = ts_.expected(what);
        return false;
    }

    std::optional<std::string> variable_name() {
        const Token& t = ts_.peek();
        if (t.kind == TokenKind::Variable) return ts_.next().text;
        if (t.kind == TokenKind::String && t.text.size() > 1 && t.text.front() == '$') {
            bool valid = true;
            for (std::size_t i = 1; i < t.text.size(); ++i) valid = valid && text::is_ident_char(t.text[i]);
            if (valid) return ts_.next().text.substr(1);
        }
        error_ = ts_.expected("a variable such as $x1");
        return std::nullopt;
    }

    std::optional<Term> term() {
        const Token& t = ts_.peek();
        switch (t.kind) {
        case TokenKind::Variable:
        case TokenKind::String: {
            bool is_var = t.kind == TokenKind::Variable || (!t.text.empty() && t.text.front() == '$');
            if (!is_var) return Term::constant(ts_.next().text);
            SourceSpan span = ts_.span_of(t);
            auto name = variable_name();
            if (!name) return std::nullopt;
            if (std::find(bound_.begin(), bound_.end(), *name) == bound_.end()) free_.push_back({*name, span});
            return Term::variable(*name);
        }
        case TokenKind::Integer: return Term::integer(*parse_int(ts_.next().text));
        case TokenKind::Minus: {
            ts_.next();
            if (!ts_.at(TokenKind::Integer)) {
                error_ = ts_.expected("a digit after '-'");
                return std::nullopt;
            }
            return Term::integer(-*parse_int(ts_.next().text));
        }
        case TokenKind::Ident:
            if (t.text == "True" || t.text == "False") return Term::boolean(ts_.next().text == "True");
            return Term::constant(ts_.next().text);
        default:
            error_ = ts_.expected("an argument ('constant', $variable, number or True/False)");
            return std::nullopt;
        }
    }

    std::optional<Formula> atom() {
        const Token& name = ts_.peek();
        if (name.kind != TokenKind::String && name.kind != TokenKind::Ident) {
            error_ = ts_.expected("a quoted predicate name");
            return std::nullopt;
        }
        if (name.text.empty()) {
            error_ = ts_.expected("a nonempty predicate name");
            return std::nullopt;
        }
        SourceSpan span = ts_.span_of(name);
        Atom a{ts_.next().text, {}};
        while (ts_.accept(TokenKind::Comma)) {
            auto t = term();
            if (!t) return std::nullopt;
            a.args.push_back(std::move(*t));
        }
        if (!expect(TokenKind::RParen, "',' or ')' in atom " + text::quote(a.predicate))) return std::nullopt;
        auto [it, inserted] = arities_.emplace(a.predicate, a.arity());
        if (!inserted && it->second != a.arity()) {
            semantic_.push_back({span, ParseErrorKind::ArityMismatch,
                                 "predicate " + text::quote(a.predicate) + " used with " + std::to_string(a.arity()) +
                                     " argument(s) but has arity " + std::to_string(it->second)});
        }
        return Formula::atom(std::move(a));
    }

    std::optional<std::vector<Formula>> members(int depth, std::string_view ctor) {
        bool bracketed = ts_.accept(TokenKind::LBracket);
        std::vector<Formula> out;
        for (;;) {
            auto f = formula(depth + 1);
            if (!f) return std::nullopt;
            out.push_back(std::move(*f));
            if (ts_.accept(TokenKind::Comma)) continue;
            break;
        }
        if (bracketed && !expect(TokenKind::RBracket, "',' or ']'")) return std::nullopt;
        if (!expect(TokenKind::RParen, "')' closing " + std::string(ctor))) return std::nullopt;
        return out;
    }

    std::optional<Formula> formula(int depth) {
        if (depth > kMaxNesting) return fail(ts_.expected("less deeply nested formula"));
        const Token& head = ts_.peek();
        if (head.kind != TokenKind::Ident)
            return fail(ts_.expected("a formula constructor (Atom, Not, And, Or, Implies, Equiv, Xor, AndList, OrList, "
                                     "Exists, Forall)"));
        static const std::map<std::string, FormulaKind, std::less<>> kCtors{
            {"Atom", FormulaKind::Atom},       {"Not", FormulaKind::Not},         {"And", FormulaKind::And},
            {"AndList", FormulaKind::AndList}, {"Or", FormulaKind::Or},           {"OrList", FormulaKind::OrList},
            {"Implies", FormulaKind::Implies}, {"Equiv", FormulaKind::Equiv},     {"Xor", FormulaKind::Xor},
            {"Exists", FormulaKind::Exists},   {"Forall", FormulaKind::Forall}};
        auto it = kCtors.find(head.text);
        if (it == kCtors.end())
            return fail({ts_.span_of(head), ParseErrorKind::Syntax,
                         "unknown formula constructor " + text::quote(head.text) +
                             "; expected one of Atom, Not, And, Or, Implies, Equiv, Xor, AndList, OrList, Exists, "
                             "Forall"});
        const Token ctor = ts_.next();
        if (!expect(TokenKind::LParen, "'(' after " + ctor.text)) return std::nullopt;
        switch (it->second) {
        case FormulaKind::Atom: return atom();
        case FormulaKind::Not: {
            auto f = formula(depth + 1);
            if (!f || !expect(TokenKind::RParen, "')' closing Not")) return std::nullopt;
            return Formula::negation(std::move(*f));
        }
        case FormulaKind::And:
        case FormulaKind::Or:
        case FormulaKind::Implies:
        case FormulaKind::Equiv:
        case FormulaKind::Xor: {
            auto a = formula(depth + 1);
            if (!a || !expect(TokenKind::Comma, "',' between the two arguments of " + ctor.text)) return std::nullopt;
            auto b = formula(depth + 1);
            if (!b || !expect(TokenKind::RParen, "')' closing " + ctor.text)) return std::nullopt;
            switch (it->second) {
            case FormulaKind::And: return Formula::conj(std::move(*a), std::move(*b));
            case FormulaKind::Or: return Formula::disj(std::move(*a), std::move(*b));
            case FormulaKind::Implies: return Formula::implies(std::move(*a), std::move(*b));
            case FormulaKind::Equiv: return Formula::equiv(std::move(*a), std::move(*b));
            default: return Formula::exclusive_or(std::move(*a), std::move(*b));
            }
        }
        case FormulaKind::AndList:
        case FormulaKind::OrList: {
            auto fs = members(depth, ctor.text);
            if (!fs) return std::nullopt;
            if (fs->size() < 2)
                return fail({ts_.span_of(ctor), ParseErrorKind::Syntax,
                             ctor.text + " needs at least two members; use the member formula directly"});
            return it->second == FormulaKind::AndList ? Formula::and_list(std::move(*fs))
                                                      : Formula::or_list(std::move(*fs));
        }
        case FormulaKind::Exists:
        case FormulaKind::Forall: {
            auto var = variable_name();
            if (!var || !expect(TokenKind::Comma, "',' after the quantified variable")) return std::nullopt;
            bound_.push_back(*var);
            auto body = formula(depth + 1);
            bound_.pop_back();
            if (!body || !expect(TokenKind::RParen, "')' closing " + ctor.text)) return std::nullopt;
            return it->second == FormulaKind::Exists ? Formula::exists(*var, std::move(*body))
                                                     : Formula::forall(*var, std::move(*body));
        }
        }
        return std::nullopt;
    }

    TokenStream& ts_;
    std::map<std::string, std::size_t>& arities_;
    std::vector<std::string> bound_;
    std::vector<FreeOccurrence> free_;
    std::vector<ParseError> semantic_;
    ParseError error_;
};

/// Parses one statement line; appends errors and returns the statement on success.
inline std::optional<FolStatement> parse_statement(const SourceLine& line, std::map<std::string, std::size_t>& arities,
                                                   std::vector<ParseError>& errors) {
    auto [formula_text, gloss] = split_gloss(line.text);
    ParseError err;
    auto ts = lex_line(line, formula_text, err);
    if (!ts) {
        errors.push_back(err);
        return std::nullopt;
    }
    FormulaParser parser(*ts, arities);
    auto f = parser.parse();
    if (!f) {
        errors.push_back(parser.error());
        return std::nullopt;
    }
    if (!finish(*ts, "formula (unbalanced parentheses?)", err)) {
        errors.push_back(err);
        return std::nullopt;
    }
    bool ok = parser.semantic_errors().empty();
    for (const auto& e : parser.semantic_errors()) errors.push_back(e);
    if (!parser.free_occurrences().empty()) {
        const auto& occ = parser.free_occurrences().front();
        errors.push_back({occ.span, ParseErrorKind::UnboundVariable,
                          "free variable " + text::quote("$" + occ.name) + " is not bound to any quantifier"});
        ok = false;
    }
    if (!ok) return std::nullopt;
    return FolStatement{std::move(*f), gloss};
}

} // namespace detail

inline ParseResult<FolProblem> parse_fol(std::string_view input) {
    ParseResult<FolProblem> result;
    auto sections = split_sections(input, section_vocabulary());
    result.warnings = sections.warnings;
    auto& errors = result.errors;
    const Section* facts = sections.find("Facts");
    const Section* query = sections.find("Query");
    const int last_line = static_cast<int>(split_lines(input).size());
    if (!facts) errors.push_back({{last_line, 1, 0}, ParseErrorKind::MissingSection, "missing section header 'Facts:'"});
    if (!query) errors.push_back({{last_line, 1, 0}, ParseErrorKind::MissingSection, "missing section header 'Query:'"});
    if (sections.find("Predicates")) result.warnings.push_back("Predicates section ignored for first-order problems");

    FolProblem problem;
    std::map<std::string, std::size_t> arities;
    if (facts) {
        for (const auto& line : facts->lines)
            if (auto st = detail::parse_statement(line, arities, errors)) problem.facts.push_back(std::move(*st));
    }
    if (query) {
        if (query->lines.empty()) {
            errors.push_back({{query->header_line, 1, 1}, ParseErrorKind::EmptySection, "the Query section is empty"});
        } else {
            if (auto st = detail::parse_statement(query->lines.front(), arities, errors)) problem.query = std::move(*st);
            if (query->lines.size() > 1)
                result.warnings.push_back("line " + std::to_string(query->lines[1].number) +
                                          ": trailing text after the query ignored");
        }
    }
    if (errors.empty()) result.value = std::move(problem);
    return result;
}

/// Canonical constructor-notation rendering of one formula.
inline std::string print_formula(const Formula& f) {
    auto quote = [](const std::string& s) {
        char q = s.find('\'') == std::string::npos ? '\'' : '"';
        return q + s + q;
    };
    auto term = [&](const Term& t) { return t.kind() == TermKind::Constant ? quote(t.name()) : to_string(t); };
    switch (f.kind()) {
    case FormulaKind::Atom: {
        std::string out = "Atom(" + quote(f.atom().predicate);
        for (const auto& a : f.atom().args) out += ", " + term(a);
        return out + ")";
    }
    case FormulaKind::Not: return "Not(" + print_formula(f.child()) + ")";
    case FormulaKind::And: return "And(" + print_formula(f.lhs()) + ", " + print_formula(f.rhs()) + ")";
    case FormulaKind::Or: return "Or(" + print_formula(f.lhs()) + ", " + print_formula(f.rhs()) + ")";
    case FormulaKind::Implies: return "Implies(" + print_formula(f.lhs()) + ", " + print_formula(f.rhs()) + ")";
    case FormulaKind::Equiv: return "Equiv(" + print_formula(f.lhs()) + ", " + print_formula(f.rhs()) + ")";
    case FormulaKind::Xor: return "Xor(" + print_formula(f.lhs()) + ", " + print_formula(f.rhs()) + ")";
    case FormulaKind::AndList:
    case FormulaKind::OrList: {
        std::string out = f.kind() == FormulaKind::AndList ? "AndList([" : "OrList([";
        for (std::size_t i = 0; i < f.children().size(); ++i) {
            if (i) out += ", ";
            out += print_formula(f.children()[i]);
        }
        return out + "])";
    }
    case FormulaKind::Exists: return "Exists($" + f.variable() + ", " + print_formula(f.child()) + ")";
    case FormulaKind::Forall: return "Forall($" + f.variable() + ", " + print_formula(f.child()) + ")";
    }
    return {};
}

inline std::string print_fol(const FolProblem& p) {
    auto line = [](const FolStatement& s) {
        std::string out = print_formula(s.formula);
        if (s.gloss) out += " ::: " + *s.gloss;
        return out + "\n";
    };
    std::string out = "Facts:\n";
    for (const auto& f : p.facts) out += line(f);
    out += "Query:\n" + line(p.query);
    return out;
}

inline FolProblem strip_glosses(FolProblem p) {
    for (auto& f : p.facts) f.gloss.reset();
    p.query.gloss.reset();
    return p;
}

} // namespace logiclm::fol
