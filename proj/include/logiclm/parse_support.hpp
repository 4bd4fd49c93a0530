#pragma once

// Line-oriented tokenizer and section splitter shared by the three symbolic
// language parsers. Errors carry 1-based spans so they can be fed back to a
// text-generation provider verbatim.

#include "core_ir.hpp"

#include <cctype>
#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace logiclm {

enum class ParseErrorKind : std::uint8_t {
    Syntax, UnknownPredicate, ArityMismatch, UnboundVariable, UndeclaredVariable, EmptySection, MissingSection
};

inline std::string_view to_string(ParseErrorKind k) {
    switch (k) {
    case ParseErrorKind::Syntax: return "Syntax";
    case ParseErrorKind::UnknownPredicate: return "UnknownPredicate";
    case ParseErrorKind::ArityMismatch: return "ArityMismatch";
    case ParseErrorKind::UnboundVariable: return "UnboundVariable";
    case ParseErrorKind::UndeclaredVariable: return "UndeclaredVariable";
    case ParseErrorKind::EmptySection: return "EmptySection";
    case ParseErrorKind::MissingSection: return "MissingSection";
    }
    return "Syntax";
}

struct ParseError {
    SourceSpan span;
    ParseErrorKind kind = ParseErrorKind::Syntax;
    std::string message;
};

/// `line 3, column 7: <message>` -- the form handed to the self-refiner.
inline std::string render(const ParseError& e) {
    return "line " + std::to_string(e.span.line) + ", column " + std::to_string(e.span.column) + ": " +
           std::string(to_string(e.kind)) + ": " + e.message;
}

inline std::string render(const std::vector<ParseError>& errors) {
    std::string out;
    for (const auto& e : errors) {
        out += render(e);
        out += '\n';
    }
    return out;
}

template <typename T>
struct ParseResult {
    std::optional<T> value;
    std::vector<ParseError> errors;
    std::vector<std::string> warnings;

    bool ok() const noexcept { return value.has_value(); }
};

namespace text {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(a[i])) != std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    return true;
}

inline bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

/// Clips a quoted token for error messages.
inline std::string quote(std::string_view s) {
    constexpr std::size_t kMax = 40;
    std::string out = "'";
    out += s.substr(0, kMax);
    if (s.size() > kMax) out += "...";
    return out + "'";
}

} // namespace text

/// One physical line of input with its 1-based number.
struct SourceLine {
    int number = 1;
    std::string_view text;
    int first_column = 1;  // column of text[0] in the physical line
};

enum class TokenKind : std::uint8_t {
    Ident, Variable, Integer, String, LParen, RParen, LBracket, RBracket, Comma, Colon,
    Arrow,      // >>>
    AndAnd,     // &&
    Eq, Ne, Lt, Gt, Le, Ge, Plus, Minus,
    End
};

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;  // identifier / variable name without `$` / string contents / literal spelling
    int column = 1;    // 1-based within the line
    int length = 0;
};

inline std::string describe(const Token& t) {
    switch (t.kind) {
    case TokenKind::End: return "end of line";
    case TokenKind::Variable: return text::quote("$" + t.text);
    case TokenKind::String: return text::quote(t.text);
    default: return text::quote(t.text);
    }
}

struct LexResult {
    std::vector<Token> tokens;
    std::optional<ParseError> error;
};

/// Tokenizes `s`, which starts at column `first_column` of line `line`.
inline LexResult tokenize(std::string_view s, int line, int first_column) {
    LexResult out;
    std::size_t i = 0;
    auto col = [&](std::size_t pos) { return first_column + static_cast<int>(pos); };
    auto fail = [&](std::size_t pos, int len, std::string msg) {
        out.error = ParseError{{line, col(pos), std::max(len, 1)}, ParseErrorKind::Syntax, std::move(msg)};
    };
    auto push = [&](TokenKind k, std::size_t start, std::size_t len, std::string text) {
        out.tokens.push_back({k, std::move(text), col(start), static_cast<int>(len)});
    };
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (text::is_ident_start(c)) {
            while (i < s.size() && text::is_ident_char(s[i])) ++i;
            push(TokenKind::Ident, start, i - start, std::string(s.substr(start, i - start)));
            continue;
        }
        if (c == '$') {
            ++i;
            while (i < s.size() && text::is_ident_char(s[i])) ++i;
            if (i == start + 1) {
                fail(start, 1, "expected a variable name after '$'");
                return out;
            }
            push(TokenKind::Variable, start, i - start, std::string(s.substr(start + 1, i - start - 1)));
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            if (i < s.size() && text::is_ident_start(s[i])) {
                fail(start, static_cast<int>(i - start + 1), "malformed number " + text::quote(s.substr(start, i - start + 1)));
                return out;
            }
            if (i - start > 18) {
                fail(start, static_cast<int>(i - start), "integer literal out of range " + text::quote(s.substr(start, i - start)));
                return out;
            }
            push(TokenKind::Integer, start, i - start, std::string(s.substr(start, i - start)));
            continue;
        }
        if (c == '\'' || c == '"') {
            ++i;
            while (i < s.size() && s[i] != c) ++i;
            if (i >= s.size()) {
                fail(start, static_cast<int>(s.size() - start), "unterminated quoted name starting " + text::quote(s.substr(start)));
                return out;
            }
            ++i;
            push(TokenKind::String, start, i - start, std::string(s.substr(start + 1, i - start - 2)));
            continue;
        }
        auto two = s.substr(i, 2);
        if (s.substr(i, 3) == ">>>") {
            i += 3;
            push(TokenKind::Arrow, start, 3, ">>>");
            continue;
        }
        struct Op { std::string_view spelling; TokenKind kind; };
        static constexpr Op kTwoChar[] = {{"&&", TokenKind::AndAnd}, {"==", TokenKind::Eq}, {"!=", TokenKind::Ne},
                                          {"<=", TokenKind::Le},     {">=", TokenKind::Ge}};
        bool matched = false;
        for (const auto& op : kTwoChar) {
            if (two == op.spelling) {
                i += 2;
                push(op.kind, start, 2, std::string(op.spelling));
                matched = true;
                break;
            }
        }
        if (matched) continue;
        TokenKind kind;
        switch (c) {
        case '(': kind = TokenKind::LParen; break;
        case ')': kind = TokenKind::RParen; break;
        case '[': kind = TokenKind::LBracket; break;
        case ']': kind = TokenKind::RBracket; break;
        case ',': kind = TokenKind::Comma; break;
        case ':': kind = TokenKind::Colon; break;
        case '<': kind = TokenKind::Lt; break;
        case '>': kind = TokenKind::Gt; break;
        case '+': kind = TokenKind::Plus; break;
        case '-': kind = TokenKind::Minus; break;
        default:
            fail(start, 1, "unexpected character " + text::quote(s.substr(start, 1)));
            return out;
        }
        ++i;
        push(kind, start, 1, std::string(1, c));
    }
    // End-of-line errors point at the last character so spans stay in bounds.
    out.tokens.push_back({TokenKind::End, {}, col(s.empty() ? 0 : s.size() - 1), 1});
    return out;
}

/// Cursor over one line's tokens.
class TokenStream {
public:
    TokenStream(std::vector<Token> tokens, int line) : tokens_(std::move(tokens)), line_(line) {}

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t idx = std::min(pos_ + ahead, tokens_.size() - 1);
        return tokens_[idx];
    }
    const Token& next() {
        const Token& t = tokens_[pos_];
        if (pos_ + 1 < tokens_.size()) ++pos_;
        return t;
    }
    bool at(TokenKind k) const { return peek().kind == k; }
    bool accept(TokenKind k) {
        if (!at(k)) return false;
        next();
        return true;
    }
    int line() const { return line_; }

    SourceSpan span_of(const Token& t) const { return {line_, t.column, std::max(t.length, 1)}; }

    /// Syntax error at the current token naming what was expected.
    ParseError expected(std::string_view what) const {
        const Token& t = peek();
        return {span_of(t), ParseErrorKind::Syntax, "expected " + std::string(what) + " but found " + describe(t)};
    }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    int line_;
};

/// A statement line split at the first `:::` that is not inside quotes.
struct GlossSplit {
    std::string_view formula;
    std::optional<std::string> gloss;
};

inline GlossSplit split_gloss(std::string_view line) {
    char quote = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quote) {
            if (c == quote) quote = 0;
            continue;
        }
        if (c == '\'' || c == '"') {
            quote = c;
            continue;
        }
        if (line.substr(i, 3) == ":::") {
            return {line.substr(0, i), std::string(text::trim(line.substr(i + 3)))};
        }
    }
    return {line, std::nullopt};
}

/// Column (1-based) of the first non-space character of `sub` within `line`,
/// where `sub` is a view into `line`.
inline int column_of(std::string_view line, std::string_view sub) {
    return static_cast<int>(sub.data() - line.data()) + 1;
}

struct Section {
    std::string name;  // canonical spelling from the vocabulary
    int header_line = 0;
    std::vector<SourceLine> lines;  // nonblank content lines
};

struct SectionedText {
    std::vector<Section> sections;  // in order of appearance
    std::vector<std::string> warnings;

    const Section* find(std::string_view name) const {
        for (const auto& s : sections)
            if (s.name == name) return &s;
        return nullptr;
    }
};

inline std::vector<SourceLine> split_lines(std::string_view text) {
    std::vector<SourceLine> lines;
    int number = 1;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back({number++, line, 1});
        if (end == text.size()) break;
        start = end + 1;
    }
    return lines;
}

/// Recognizes `Header:` (case-insensitive, surrounding whitespace and
/// markdown emphasis tolerated). Content after the colon on the same line is
/// returned as the first body line.
inline std::optional<std::pair<std::string, std::string_view>> match_header(std::string_view line,
                                                                             const std::vector<std::string>& vocabulary) {
    auto s = text::trim(line);
    while (!s.empty() && (s.front() == '#' || s.front() == '*' || s.front() == ' ')) s.remove_prefix(1);
    std::size_t i = 0;
    while (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) ++i;
    auto word = s.substr(0, i);
    auto rest = s.substr(i);
    while (!rest.empty() && (rest.front() == '*' || rest.front() == ' ')) rest.remove_prefix(1);
    if (rest.empty() || rest.front() != ':' || rest.substr(0, 3) == ":::") return std::nullopt;
    rest.remove_prefix(1);
    while (!rest.empty() && rest.front() == '*') rest.remove_prefix(1);
    for (const auto& v : vocabulary)
        if (text::iequals(word, v)) return std::make_pair(v, text::trim(rest));
    return std::nullopt;
}

inline SectionedText split_sections(std::string_view input, const std::vector<std::string>& vocabulary) {
    SectionedText out;
    Section* current = nullptr;
    bool warned_preamble = false;
    for (const auto& line : split_lines(input)) {
        auto trimmed = text::trim(line.text);
        if (trimmed.empty() || trimmed.starts_with("```")) continue;
        if (auto header = match_header(line.text, vocabulary)) {
            if (out.find(header->first)) {
                out.warnings.push_back("line " + std::to_string(line.number) + ": duplicate section '" + header->first +
                                       "' merged into the first one");
                for (auto& s : out.sections)
                    if (s.name == header->first) current = &s;
            } else {
                out.sections.push_back({header->first, line.number, {}});
                current = &out.sections.back();
            }
            if (!header->second.empty())
                current->lines.push_back({line.number, header->second, column_of(line.text, header->second)});
            continue;
        }
        if (!current) {
            if (!warned_preamble) {
                out.warnings.push_back("line " + std::to_string(line.number) +
                                       ": text before the first section header ignored");
                warned_preamble = true;
            }
            continue;
        }
        current->lines.push_back(line);
    }
    return out;
}

inline bool finish(TokenStream& ts, std::string_view what, ParseError& err) {
    if (ts.at(TokenKind::End)) return true;
    err = ts.expected(std::string("end of ") + std::string(what));
    return false;
}

inline std::optional<TokenStream> lex_line(const SourceLine& line, std::string_view formula, ParseError& err) {
    int col = line.first_column + static_cast<int>(formula.data() - line.text.data());
    auto lexed = tokenize(formula, line.number, col);
    if (lexed.error) {
        err = *lexed.error;
        return std::nullopt;
    }
    return TokenStream(std::move(lexed.tokens), line.number);
}

inline SourceSpan line_span(const SourceLine& line) {
    auto t = text::trim(line.text);
    int col = line.first_column + static_cast<int>(t.data() - line.text.data());
    return {line.number, col, std::max(1, static_cast<int>(t.size()))};
}

/// Parses a (possibly negative) integer token sequence.
inline std::optional<std::int64_t> parse_int(std::string_view digits) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc{} || p != digits.data() + digits.size()) return std::nullopt;
    return v;
}

} // namespace logiclm
