#pragma once

// Finite-domain constraint problems: Domain legend, `name [IN] [v1, ...]`
// variable declarations, comparison / AllDifferentConstraint lines and
// lettered option expressions in the Query section.

#include "parse_support.hpp"

#include <variant>

namespace logiclm::csp {

/// `var`, `var + k`, `var - k` or an integer literal `k`.
struct LinearTerm {
    std::optional<std::string> var;
    std::int64_t offset = 0;

    static LinearTerm constant(std::int64_t v) { return {std::nullopt, v}; }
    static LinearTerm variable(std::string name, std::int64_t offset = 0) { return {std::move(name), offset}; }

    bool operator==(const LinearTerm&) const = default;
};

enum class CmpOp : std::uint8_t { Eq, Ne, Lt, Gt, Le, Ge };

inline std::string_view to_string(CmpOp op) {
    switch (op) {
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Gt: return ">";
    case CmpOp::Le: return "<=";
    case CmpOp::Ge: return ">=";
    }
    return "==";
}

inline bool holds(std::int64_t a, CmpOp op, std::int64_t b) {
    switch (op) {
    case CmpOp::Eq: return a == b;
    case CmpOp::Ne: return a != b;
    case CmpOp::Lt: return a < b;
    case CmpOp::Gt: return a > b;
    case CmpOp::Le: return a <= b;
    case CmpOp::Ge: return a >= b;
    }
    return false;
}

/// lhs is a variable or integer; rhs may carry an offset.
struct Comparison {
    LinearTerm lhs;
    CmpOp op = CmpOp::Eq;
    LinearTerm rhs;

    bool operator==(const Comparison&) const = default;
};

struct AllDifferent {
    std::vector<std::string> vars;

    bool operator==(const AllDifferent&) const = default;
};

using ConstraintExpr = std::variant<Comparison, AllDifferent>;

struct CspConstraint {
    ConstraintExpr expr;
    std::optional<std::string> gloss;

    bool operator==(const CspConstraint&) const = default;
};

struct CspVariable {
    std::string name;
    std::vector<std::int64_t> domain;  // sorted, duplicate-free

    bool operator==(const CspVariable&) const = default;
};

struct LegendEntry {
    std::int64_t value = 0;
    std::string meaning;

    bool operator==(const LegendEntry&) const = default;
};

struct CspOption {
    char letter = 'A';
    ConstraintExpr expr;
    std::optional<std::string> gloss;

    bool operator==(const CspOption&) const = default;
};

struct CspModel {
    std::vector<LegendEntry> legend;
    std::vector<CspVariable> variables;
    std::vector<CspConstraint> constraints;
    std::vector<CspOption> options;

    const CspVariable* find(std::string_view name) const {
        for (const auto& v : variables)
            if (v.name == name) return &v;
        return nullptr;
    }

    bool operator==(const CspModel&) const = default;
};

inline const std::vector<std::string>& section_vocabulary() {
    static const std::vector<std::string> kVocabulary{"Domain", "Variables", "Constraints", "Query"};
    return kVocabulary;
}

/// Variables referenced by an expression, in order of appearance.
inline std::vector<std::string> referenced_variables(const ConstraintExpr& e) {
    std::vector<std::string> out;
    if (const auto* c = std::get_if<Comparison>(&e)) {
        if (c->lhs.var) out.push_back(*c->lhs.var);
        if (c->rhs.var) out.push_back(*c->rhs.var);
    } else {
        out = std::get<AllDifferent>(e).vars;
    }
    return out;
}

namespace detail {

struct ExprSite {
    ConstraintExpr expr;
    std::vector<std::pair<std::string, SourceSpan>> names;
};

class ExprParser {
public:
    explicit ExprParser(TokenStream& ts) : ts_(ts) {}

    std::optional<ExprSite> parse() {
        const Token& t = ts_.peek();
        if (t.kind == TokenKind::Ident && (t.text == "AllDifferentConstraint" || t.text == "AllDifferent")) {
            SourceSpan ctor_span = ts_.span_of(t);
            ts_.next();
            if (!expect(TokenKind::LParen, "'(' after AllDifferentConstraint") ||
                !expect(TokenKind::LBracket, "'[' opening the variable list"))
                return std::nullopt;
            AllDifferent ad;
            for (;;) {
                if (!ts_.at(TokenKind::Ident)) {
                    error_ = ts_.expected("a variable name");
                    return std::nullopt;
                }
                const Token& v = ts_.next();
                site_.names.emplace_back(v.text, ts_.span_of(v));
                ad.vars.push_back(v.text);
                if (ts_.accept(TokenKind::Comma)) continue;
                break;
            }
            if (!expect(TokenKind::RBracket, "',' or ']'") || !expect(TokenKind::RParen, "')'")) return std::nullopt;
            if (ad.vars.size() < 2) {
                error_ = {ctor_span, ParseErrorKind::Syntax, "AllDifferentConstraint needs at least two variables"};
                return std::nullopt;
            }
            site_.expr = std::move(ad);
            return std::move(site_);
        }
        Comparison cmp;
        auto lhs = operand(false);
        if (!lhs) return std::nullopt;
        cmp.lhs = *lhs;
        static constexpr std::pair<TokenKind, CmpOp> kOps[] = {{TokenKind::Eq, CmpOp::Eq}, {TokenKind::Ne, CmpOp::Ne},
                                                                {TokenKind::Lt, CmpOp::Lt}, {TokenKind::Gt, CmpOp::Gt},
                                                                {TokenKind::Le, CmpOp::Le}, {TokenKind::Ge, CmpOp::Ge}};
        bool found = false;
        for (auto [k, op] : kOps) {
            if (ts_.accept(k)) {
                cmp.op = op;
                found = true;
                break;
            }
        }
        if (!found) {
            error_ = ts_.expected("a comparison operator (==, !=, <, >, <=, >=)");
            return std::nullopt;
        }
        auto rhs = operand(true);
        if (!rhs) return std::nullopt;
        cmp.rhs = *rhs;
        site_.expr = cmp;
        return std::move(site_);
    }

    const ParseError& error() const { return error_; }

private:
    bool expect(TokenKind k, std::string_view what) {
        if (ts_.accept(k)) return true;
        error_ = ts_.expected(what);
        return false;
    }

    std::optional<std::int64_t> integer() {
        bool negative = ts_.accept(TokenKind::Minus);
        if (!ts_.at(TokenKind::Integer)) {
            error_ = ts_.expected("an integer");
            return std::nullopt;
        }
        auto v = *parse_int(ts_.next().text);
        return negative ? -v : v;
    }

    std::optional<LinearTerm> operand(bool allow_offset) {
        const Token& t = ts_.peek();
        if (t.kind == TokenKind::Ident) {
            site_.names.emplace_back(t.text, ts_.span_of(t));
            LinearTerm term = LinearTerm::variable(ts_.next().text);
            if (allow_offset && (ts_.at(TokenKind::Plus) || ts_.at(TokenKind::Minus))) {
                bool minus = ts_.next().kind == TokenKind::Minus;
                if (!ts_.at(TokenKind::Integer)) {
                    error_ = ts_.expected("an integer offset");
                    return std::nullopt;
                }
                auto k = *parse_int(ts_.next().text);
                term.offset = minus ? -k : k;
            }
            return term;
        }
        if (t.kind == TokenKind::Integer || t.kind == TokenKind::Minus) {
            auto v = integer();
            if (!v) return std::nullopt;
            return LinearTerm::constant(*v);
        }
        error_ = ts_.expected("a variable name or integer");
        return std::nullopt;
    }

    TokenStream& ts_;
    ExprSite site_;
    ParseError error_;
};

inline std::optional<ExprSite> parse_expr_line(const SourceLine& line, std::string_view formula,
                                               std::vector<ParseError>& errors) {
    ParseError err;
    auto ts = lex_line(line, formula, err);
    if (!ts) {
        errors.push_back(err);
        return std::nullopt;
    }
    ExprParser p(*ts);
    auto site = p.parse();
    if (!site) {
        errors.push_back(p.error());
        return std::nullopt;
    }
    if (!finish(*ts, "constraint", err)) {
        errors.push_back(err);
        return std::nullopt;
    }
    return site;
}

/// `A)` / `(A)` / `A.` prefix of an option line; returns letter and remainder.
inline std::optional<std::pair<char, std::string_view>> option_prefix(std::string_view line) {
    auto s = text::trim(line);
    bool paren = !s.empty() && s.front() == '(';
    if (paren) s.remove_prefix(1);
    if (s.size() < 2 || s[0] < 'A' || s[0] > 'Z') return std::nullopt;
    if (s[1] != ')' && s[1] != '.') return std::nullopt;
    if (paren && s[1] != ')') return std::nullopt;
    return std::make_pair(s[0], s.substr(2));
}

} // namespace detail

inline ParseResult<CspModel> parse_csp(std::string_view input) {
    using namespace detail;
    ParseResult<CspModel> result;
    auto sections = split_sections(input, section_vocabulary());
    result.warnings = sections.warnings;
    auto& errors = result.errors;
    CspModel model;
    const int last_line = static_cast<int>(split_lines(input).size());
    for (const auto& name : section_vocabulary()) {
        if (!sections.find(name))
            errors.push_back({{last_line, 1, 0}, ParseErrorKind::MissingSection, "missing section header '" + name + ":'"});
    }

    if (const auto* sec = sections.find("Domain")) {
        for (const auto& line : sec->lines) {
            auto body = text::trim(line.text);
            auto colon = body.find(':');
            auto value = colon == std::string_view::npos ? std::nullopt : parse_int(text::trim(body.substr(0, colon)));
            if (!value) {
                errors.push_back({line_span(line), ParseErrorKind::Syntax,
                                  "expected a legend line 'value: meaning' but found " + text::quote(body)});
                continue;
            }
            model.legend.push_back({*value, std::string(text::trim(body.substr(colon + 1)))});
        }
    }

    if (const auto* sec = sections.find("Variables")) {
        if (sec->lines.empty())
            errors.push_back({{sec->header_line, 1, 1}, ParseErrorKind::EmptySection, "the Variables section is empty"});
        for (const auto& line : sec->lines) {
            auto [decl, gloss] = split_gloss(line.text);
            ParseError err;
            auto ts = lex_line(line, decl, err);
            if (!ts) {
                errors.push_back(err);
                continue;
            }
            auto bad = [&](std::string_view what) { errors.push_back(ts->expected(what)); };
            if (!ts->at(TokenKind::Ident)) {
                bad("a variable name");
                continue;
            }
            const Token name = ts->next();
            if (!ts->accept(TokenKind::LBracket) || !ts->at(TokenKind::Ident) || ts->peek().text != "IN") {
                bad("'[IN]' after the variable name");
                continue;
            }
            ts->next();
            if (!ts->accept(TokenKind::RBracket) || !ts->accept(TokenKind::LBracket)) {
                bad("'[IN] [' before the value list");
                continue;
            }
            std::vector<std::int64_t> domain;
            bool ok = true;
            if (!ts->at(TokenKind::RBracket)) {
                for (;;) {
                    bool negative = ts->accept(TokenKind::Minus);
                    if (!ts->at(TokenKind::Integer)) {
                        bad("an integer domain value");
                        ok = false;
                        break;
                    }
                    auto v = *parse_int(ts->next().text);
                    domain.push_back(negative ? -v : v);
                    if (ts->accept(TokenKind::Comma)) continue;
                    break;
                }
            }
            if (!ok) continue;
            if (!ts->accept(TokenKind::RBracket)) {
                bad("',' or ']'");
                continue;
            }
            if (!finish(*ts, "variable declaration", err)) {
                errors.push_back(err);
                continue;
            }
            if (domain.empty()) {
                errors.push_back({ts->span_of(name), ParseErrorKind::Syntax,
                                  "variable " + text::quote(name.text) + " has an empty domain"});
                continue;
            }
            if (model.find(name.text)) {
                errors.push_back({ts->span_of(name), ParseErrorKind::Syntax,
                                  "variable " + text::quote(name.text) + " declared twice"});
                continue;
            }
            std::sort(domain.begin(), domain.end());
            domain.erase(std::unique(domain.begin(), domain.end()), domain.end());
            model.variables.push_back({name.text, std::move(domain)});
        }
    }

    auto check_names = [&](const ExprSite& site) {
        bool ok = true;
        for (const auto& [name, span] : site.names) {
            if (!model.find(name)) {
                errors.push_back({span, ParseErrorKind::UndeclaredVariable,
                                  "variable " + text::quote(name) + " is not declared in the Variables section"});
                ok = false;
            }
        }
        return ok;
    };

    if (const auto* sec = sections.find("Constraints")) {
        for (const auto& line : sec->lines) {
            auto [expr, gloss] = split_gloss(line.text);
            auto site = parse_expr_line(line, expr, errors);
            if (site && check_names(*site)) model.constraints.push_back({std::move(site->expr), gloss});
        }
    }

    if (const auto* sec = sections.find("Query")) {
        for (std::size_t i = 0; i < sec->lines.size(); ++i) {
            const auto& line = sec->lines[i];
            auto prefix = option_prefix(line.text);
            if (!prefix) {
                if (!model.options.empty()) {
                    result.warnings.push_back("line " + std::to_string(line.number) +
                                              ": trailing text after the options ignored");
                    break;
                }
                errors.push_back({line_span(line), ParseErrorKind::Syntax,
                                  "expected an option line such as 'A) x == 1' but found " +
                                      text::quote(text::trim(line.text))});
                continue;
            }
            auto [letter, rest] = *prefix;
            auto [expr, gloss] = split_gloss(rest);
            auto site = parse_expr_line(line, expr, errors);
            if (!site || !check_names(*site)) continue;
            bool duplicate = false;
            for (const auto& o : model.options) duplicate = duplicate || o.letter == letter;
            if (duplicate) {
                errors.push_back({line_span(line), ParseErrorKind::Syntax,
                                  std::string("option ") + letter + " listed twice"});
                continue;
            }
            model.options.push_back({letter, std::move(site->expr), gloss});
        }
        if (sec->lines.empty())
            errors.push_back({{sec->header_line, 1, 1}, ParseErrorKind::EmptySection,
                              "the Query section lists no options"});
    }

    std::sort(model.options.begin(), model.options.end(),
              [](const CspOption& a, const CspOption& b) { return a.letter < b.letter; });
    if (errors.empty()) result.value = std::move(model);
    return result;
}

inline std::string print_linear(const LinearTerm& t) {
    if (!t.var) return std::to_string(t.offset);
    if (t.offset == 0) return *t.var;
    return *t.var + (t.offset > 0 ? " + " : " - ") + std::to_string(t.offset > 0 ? t.offset : -t.offset);
}

inline std::string print_expr(const ConstraintExpr& e) {
    if (const auto* c = std::get_if<Comparison>(&e))
        return print_linear(c->lhs) + " " + std::string(to_string(c->op)) + " " + print_linear(c->rhs);
    const auto& ad = std::get<AllDifferent>(e);
    std::string out = "AllDifferentConstraint([";
    for (std::size_t i = 0; i < ad.vars.size(); ++i) {
        if (i) out += ", ";
        out += ad.vars[i];
    }
    return out + "])";
}

inline std::string print_csp(const CspModel& m) {
    auto gloss = [](const std::optional<std::string>& g) { return g ? " ::: " + *g : std::string(); };
    std::string out = "Domain:\n";
    for (const auto& l : m.legend) out += std::to_string(l.value) + ": " + l.meaning + "\n";
    out += "Variables:\n";
    for (const auto& v : m.variables) {
        out += v.name + " [IN] [";
        for (std::size_t i = 0; i < v.domain.size(); ++i) {
            if (i) out += ", ";
            out += std::to_string(v.domain[i]);
        }
        out += "]\n";
    }
    out += "Constraints:\n";
    for (const auto& c : m.constraints) out += print_expr(c.expr) + gloss(c.gloss) + "\n";
    out += "Query:\n";
    for (const auto& o : m.options) out += std::string(1, o.letter) + ") " + print_expr(o.expr) + gloss(o.gloss) + "\n";
    return out;
}

inline CspModel strip_glosses(CspModel m) {
    for (auto& c : m.constraints) c.gloss.reset();
    for (auto& o : m.options) o.gloss.reset();
    return m;
}

} // namespace logiclm::csp
