#pragma once

// Deductive logic programs: Predicates / Facts / Rules / Query sections,
// `&&`-joined rule bodies, `>>>` arrows and `:::` glosses.

#include "parse_support.hpp"

#include <map>

namespace logiclm::lp {

struct PredicateSignature {
    std::string name;
    std::vector<std::string> params;  // as written: `$x`, `bool`, ...
    std::optional<std::string> gloss;

    bool operator==(const PredicateSignature&) const = default;
};

struct LpFact {
    Atom atom;
    std::optional<std::string> gloss;

    bool operator==(const LpFact&) const = default;
};

/// body_1 && ... && body_m >>> head_1 && ... && head_n
struct LpRule {
    std::vector<Atom> body;
    std::vector<Atom> head;
    std::optional<std::string> gloss;

    bool operator==(const LpRule&) const = default;
};

struct LpProgram {
    std::vector<PredicateSignature> predicates;
    std::vector<LpFact> facts;
    std::vector<LpRule> rules;
    Atom query;
    std::optional<std::string> query_gloss;

    bool operator==(const LpProgram&) const = default;
};

inline const std::vector<std::string>& section_vocabulary() {
    static const std::vector<std::string> kVocabulary{"Predicates", "Facts", "Rules", "Query"};
    return kVocabulary;
}

namespace detail {

struct AtomSite {
    Atom atom;
    SourceSpan predicate_span;
    std::vector<std::pair<std::string, SourceSpan>> variables;  // occurrences
};

inline std::optional<Term> parse_lp_term(TokenStream& ts, std::vector<std::pair<std::string, SourceSpan>>& vars,
                                         ParseError& err) {
    const Token& t = ts.peek();
    switch (t.kind) {
    case TokenKind::Variable:
        vars.emplace_back(t.text, ts.span_of(t));
        return Term::variable(ts.next().text);
    case TokenKind::Integer: {
        auto v = parse_int(t.text);
        ts.next();
        return Term::integer(*v);
    }
    case TokenKind::Minus: {
        ts.next();
        if (!ts.at(TokenKind::Integer)) {
            err = ts.expected("a digit after '-'");
            return std::nullopt;
        }
        auto v = parse_int(ts.next().text);
        return Term::integer(-*v);
    }
    case TokenKind::Ident:
        if (t.text == "True" || t.text == "False") return Term::boolean(ts.next().text == "True");
        return Term::constant(ts.next().text);
    case TokenKind::String:
        return Term::constant(ts.next().text);
    default:
        err = ts.expected("an argument (constant, $variable, number or True/False)");
        return std::nullopt;
    }
}

inline std::optional<AtomSite> parse_lp_atom(TokenStream& ts, ParseError& err) {
    AtomSite site;
    if (!ts.at(TokenKind::Ident)) {
        err = ts.expected("a predicate name");
        return std::nullopt;
    }
    const Token& name = ts.next();
    site.atom.predicate = name.text;
    site.predicate_span = ts.span_of(name);
    if (!ts.accept(TokenKind::LParen)) {
        err = ts.expected("'(' after predicate " + text::quote(name.text));
        return std::nullopt;
    }
    if (ts.accept(TokenKind::RParen)) return site;
    for (;;) {
        auto term = parse_lp_term(ts, site.variables, err);
        if (!term) return std::nullopt;
        site.atom.args.push_back(std::move(*term));
        if (ts.accept(TokenKind::Comma)) continue;
        if (ts.accept(TokenKind::RParen)) return site;
        err = ts.expected("',' or ')'");
        return std::nullopt;
    }
}

inline std::optional<std::vector<AtomSite>> parse_conjunction(TokenStream& ts, ParseError& err) {
    std::vector<AtomSite> out;
    for (;;) {
        auto a = parse_lp_atom(ts, err);
        if (!a) return std::nullopt;
        out.push_back(std::move(*a));
        if (!ts.accept(TokenKind::AndAnd)) return out;
    }
}

/// Signature table built from declarations (when present) or first use.
class ArityTable {
public:
    void declare(const std::string& name, std::size_t arity) { arity_.emplace(name, arity); declared_ = true; }
    bool has_declarations() const { return declared_; }

    void check(const AtomSite& site, std::vector<ParseError>& errors, bool allow_undeclared_first_use) {
        auto it = arity_.find(site.atom.predicate);
        if (it == arity_.end()) {
            if (declared_ && !allow_undeclared_first_use) {
                errors.push_back({site.predicate_span, ParseErrorKind::UnknownPredicate,
                                  "predicate " + text::quote(site.atom.predicate) +
                                      " is not declared in the Predicates section"});
                return;
            }
            arity_.emplace(site.atom.predicate, site.atom.arity());
            return;
        }
        if (it->second != site.atom.arity()) {
            errors.push_back({site.predicate_span, ParseErrorKind::ArityMismatch,
                              "predicate " + text::quote(site.atom.predicate) + " used with " +
                                  std::to_string(site.atom.arity()) + " argument(s) but has arity " +
                                  std::to_string(it->second)});
        }
    }

private:
    std::map<std::string, std::size_t> arity_;
    bool declared_ = false;
};

} // namespace detail

inline ParseResult<LpProgram> parse_lp(std::string_view input) {
    using namespace detail;
    ParseResult<LpProgram> result;
    auto sections = split_sections(input, section_vocabulary());
    result.warnings = sections.warnings;
    auto& errors = result.errors;
    LpProgram program;
    ArityTable arities;

    const Section* preds = sections.find("Predicates");
    const Section* facts = sections.find("Facts");
    const Section* rules = sections.find("Rules");
    const Section* query = sections.find("Query");
    const int last_line = static_cast<int>(split_lines(input).size());
    for (auto [sec, name] : {std::pair{facts, "Facts"}, std::pair{query, "Query"}}) {
        if (!sec)
            errors.push_back({{last_line, 1, 0}, ParseErrorKind::MissingSection,
                              std::string("missing section header '") + name + ":'"});
    }
    if (!preds) result.warnings.push_back("no Predicates section; signatures inferred from use");
    if (!rules) result.warnings.push_back("no Rules section; program has facts only");

    if (preds) {
        for (const auto& line : preds->lines) {
            auto [formula, gloss] = split_gloss(line.text);
            ParseError err;
            auto ts = lex_line(line, formula, err);
            std::optional<AtomSite> site;
            if (ts) site = parse_lp_atom(*ts, err);
            if (!ts || !site || !finish(*ts, "predicate declaration", err)) {
                errors.push_back(err);
                continue;
            }
            PredicateSignature sig{site->atom.predicate, {}, gloss};
            for (const auto& a : site->atom.args) {
                if (a.kind() == TermKind::Boolean) sig.params.push_back(a.bool_value() ? "True" : "False");
                else sig.params.push_back(to_string(a));
            }
            if (site->atom.args.empty())
                result.warnings.push_back("line " + std::to_string(line.number) + ": predicate " +
                                          text::quote(sig.name) + " declared with arity 0");
            arities.declare(sig.name, sig.params.size());
            program.predicates.push_back(std::move(sig));
        }
    }

    if (facts) {
        for (const auto& line : facts->lines) {
            auto [formula, gloss] = split_gloss(line.text);
            ParseError err;
            auto ts = lex_line(line, formula, err);
            std::optional<AtomSite> site;
            if (ts) site = parse_lp_atom(*ts, err);
            if (!ts || !site || !finish(*ts, "fact", err)) {
                errors.push_back(err);
                continue;
            }
            if (!site->variables.empty()) {
                const auto& [v, span] = site->variables.front();
                errors.push_back({span, ParseErrorKind::UnboundVariable,
                                  "fact contains variable " + text::quote("$" + v) +
                                      "; facts must be ground (write it as a rule instead)"});
                continue;
            }
            arities.check(*site, errors, false);
            program.facts.push_back({std::move(site->atom), gloss});
        }
    }

    if (rules) {
        for (const auto& line : rules->lines) {
            auto [formula, gloss] = split_gloss(line.text);
            ParseError err;
            auto ts = lex_line(line, formula, err);
            std::optional<std::vector<AtomSite>> body, head;
            if (ts) body = parse_conjunction(*ts, err);
            if (body && !ts->accept(TokenKind::Arrow)) {
                err = ts->expected("'>>>' between rule body and head");
                body.reset();
            }
            if (body) head = parse_conjunction(*ts, err);
            if (!ts || !body || !head || !finish(*ts, "rule", err)) {
                errors.push_back(err);
                continue;
            }
            std::set<std::string> body_vars;
            for (const auto& s : *body)
                for (const auto& v : s.variables) body_vars.insert(v.first);
            bool bad = false;
            for (const auto& s : *head) {
                for (const auto& [v, span] : s.variables) {
                    if (!body_vars.contains(v)) {
                        errors.push_back({span, ParseErrorKind::UnboundVariable,
                                          "variable " + text::quote("$" + v) +
                                              " appears in the rule head but not in its body"});
                        bad = true;
                    }
                }
            }
            for (const auto& s : *body) arities.check(s, errors, false);
            for (const auto& s : *head) arities.check(s, errors, false);
            if (bad) continue;
            LpRule rule;
            for (auto& s : *body) rule.body.push_back(std::move(s.atom));
            for (auto& s : *head) rule.head.push_back(std::move(s.atom));
            rule.gloss = gloss;
            program.rules.push_back(std::move(rule));
        }
    }

    if (query) {
        if (query->lines.empty()) {
            errors.push_back({{query->header_line, 1, 1}, ParseErrorKind::EmptySection, "the Query section is empty"});
        } else {
            const auto& line = query->lines.front();
            auto [formula, gloss] = split_gloss(line.text);
            ParseError err;
            auto ts = lex_line(line, formula, err);
            std::optional<AtomSite> site;
            if (ts) site = parse_lp_atom(*ts, err);
            if (!ts || !site || !finish(*ts, "query", err)) {
                errors.push_back(err);
            } else {
                arities.check(*site, errors, false);
                program.query = std::move(site->atom);
                program.query_gloss = gloss;
            }
            if (query->lines.size() > 1)
                result.warnings.push_back("line " + std::to_string(query->lines[1].number) +
                                          ": trailing text after the query ignored");
        }
    }

    if (errors.empty()) result.value = std::move(program);
    return result;
}

namespace detail {
inline bool is_plain_identifier(std::string_view s) {
    if (s.empty() || !text::is_ident_start(s.front())) return false;
    for (char c : s)
        if (!text::is_ident_char(c)) return false;
    return s != "True" && s != "False";
}

inline std::string quote_name(const std::string& name) {
    char q = name.find('\'') == std::string::npos ? '\'' : '"';
    return q + name + q;
}

inline std::string lp_term(const Term& t) {
    if (t.kind() == TermKind::Constant && !is_plain_identifier(t.name())) return quote_name(t.name());
    return to_string(t);
}

inline std::string lp_atom(const Atom& a) {
    std::string out = a.predicate + "(";
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i) out += ", ";
        out += lp_term(a.args[i]);
    }
    return out + ")";
}

inline void print_gloss(std::string& out, const std::optional<std::string>& gloss) {
    if (gloss) {
        out += " ::: ";
        out += *gloss;
    }
    out += '\n';
}

inline std::string print_conjunction(const std::vector<Atom>& atoms) {
    std::string out;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (i) out += " && ";
        out += lp_atom(atoms[i]);
    }
    return out;
}
} // namespace detail

inline std::string print_lp(const LpProgram& p) {
    std::string out = "Predicates:\n";
    for (const auto& sig : p.predicates) {
        out += sig.name + "(";
        for (std::size_t i = 0; i < sig.params.size(); ++i) {
            if (i) out += ", ";
            out += sig.params[i];
        }
        out += ")";
        detail::print_gloss(out, sig.gloss);
    }
    out += "Facts:\n";
    for (const auto& f : p.facts) {
        out += detail::lp_atom(f.atom);
        detail::print_gloss(out, f.gloss);
    }
    out += "Rules:\n";
    for (const auto& r : p.rules) {
        out += detail::print_conjunction(r.body) + " >>> " + detail::print_conjunction(r.head);
        detail::print_gloss(out, r.gloss);
    }
    out += "Query:\n" + detail::lp_atom(p.query);
    detail::print_gloss(out, p.query_gloss);
    return out;
}

/// Drops every `:::` gloss; what remains is the logical content.
inline LpProgram strip_glosses(LpProgram p) {
    for (auto& s : p.predicates) s.gloss.reset();
    for (auto& f : p.facts) f.gloss.reset();
    for (auto& r : p.rules) r.gloss.reset();
    p.query_gloss.reset();
    return p;
}

} // namespace logiclm::lp
