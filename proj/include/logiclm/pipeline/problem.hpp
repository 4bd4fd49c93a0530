#pragma once

// Multiple-choice problems and the line-oriented dataset format: one JSON
// object per line with id, task_kind, context, question, options and an
// optional gold answer letter.

#include "../parse_support.hpp"

#include <json.hpp>

#include <fstream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace logiclm::pipeline {

enum class TaskKind : std::uint8_t { Deductive, Fol, Csp };

inline std::string_view to_string(TaskKind k) {
    switch (k) {
    case TaskKind::Deductive: return "deductive";
    case TaskKind::Fol: return "fol";
    case TaskKind::Csp: return "csp";
    }
    return "deductive";
}

inline std::optional<TaskKind> parse_task_kind(std::string_view s) {
    if (text::iequals(s, "deductive") || text::iequals(s, "lp")) return TaskKind::Deductive;
    if (text::iequals(s, "fol")) return TaskKind::Fol;
    if (text::iequals(s, "csp")) return TaskKind::Csp;
    return std::nullopt;
}

struct AnswerOption {
    char letter = 'A';
    std::string text;

    bool operator==(const AnswerOption&) const = default;
};

struct Problem {
    std::string id;
    TaskKind task_kind = TaskKind::Deductive;
    std::string context;
    std::string question;
    std::vector<AnswerOption> options;
    std::optional<char> gold_label;
    std::string dataset;                     // defaults to the task kind name
    std::optional<std::string> formulation;  // gold symbolic form, used by the identity provider

    bool operator==(const Problem&) const = default;
};

/// What a deductive or FOL option claims about the query.
enum class OptionMeaning : std::uint8_t { True, False, Unknown };

/// Keyword table for option texts; punctuation and case are ignored.
inline std::optional<OptionMeaning> option_meaning(std::string_view text) {
    std::string norm;
    for (char c : text)
        if (std::isalnum(static_cast<unsigned char>(c)))
            norm.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    static const std::vector<std::pair<std::string, OptionMeaning>> kTable{
        {"true", OptionMeaning::True},       {"proved", OptionMeaning::True},
        {"yes", OptionMeaning::True},        {"false", OptionMeaning::False},
        {"disproved", OptionMeaning::False}, {"no", OptionMeaning::False},
        {"unknown", OptionMeaning::Unknown}, {"uncertain", OptionMeaning::Unknown},
    };
    for (const auto& [word, meaning] : kTable)
        if (norm == word) return meaning;
    return std::nullopt;
}

/// Splits "A) True" (also "(A) True", "A. True") into letter and text.
inline std::optional<AnswerOption> parse_option_line(std::string_view line) {
    line = text::trim(line);
    if (!line.empty() && line.front() == '(') line.remove_prefix(1);
    if (line.size() < 2 || !std::isupper(static_cast<unsigned char>(line[0])) || (line[1] != ')' && line[1] != '.'))
        return std::nullopt;
    return AnswerOption{line[0], std::string(text::trim(line.substr(2)))};
}

inline std::string render_options(const std::vector<AnswerOption>& options) {
    std::string out;
    for (std::size_t i = 0; i < options.size(); ++i) {
        if (i) out += "\n";
        out += std::string(1, options[i].letter) + ") " + options[i].text;
    }
    return out;
}

/// Structural checks shared by the loader and programmatic construction.
inline std::vector<std::string> validate(const Problem& p) {
    std::vector<std::string> errors;
    if (p.id.empty()) errors.push_back("problem id is empty");
    if (p.options.size() < 2) errors.push_back("problem '" + p.id + "' needs at least two options");
    for (std::size_t i = 0; i < p.options.size(); ++i) {
        if (p.options[i].letter != static_cast<char>('A' + i)) {
            errors.push_back("problem '" + p.id + "': option letters must run A, B, C, ... without gaps");
            break;
        }
    }
    if (p.gold_label) {
        bool found = false;
        for (const auto& o : p.options) found = found || o.letter == *p.gold_label;
        if (!found) errors.push_back("problem '" + p.id + "': gold label " + std::string(1, *p.gold_label) +
                                     " is not an option letter");
    }
    if (p.task_kind != TaskKind::Csp) {
        for (const auto& o : p.options) {
            if (!option_meaning(o.text)) {
                errors.push_back("problem '" + p.id + "': option " + std::string(1, o.letter) + " ('" + o.text +
                                 "') is not one of True/False/Unknown/Uncertain");
                break;
            }
        }
    }
    return errors;
}

struct DatasetFormatError {
    std::size_t line = 0;  // 1-based; 0 when not tied to a line
    std::string message;
};

inline std::string render(const DatasetFormatError& e) {
    return e.line ? "line " + std::to_string(e.line) + ": " + e.message : e.message;
}

namespace detail {

inline std::optional<Problem> problem_from_json(const nlohmann::json& j, std::string& error) {
    auto text_field = [&](const char* key, bool required) -> std::optional<std::string> {
        if (!j.contains(key)) {
            if (required) error = std::string("missing field '") + key + "'";
            return std::nullopt;
        }
        if (!j[key].is_string()) {
            error = std::string("field '") + key + "' must be a string";
            return std::nullopt;
        }
        return j[key].get<std::string>();
    };
    if (!j.is_object()) {
        error = "record is not a JSON object";
        return std::nullopt;
    }
    Problem p;
    auto id = text_field("id", true);
    auto kind = text_field("task_kind", true);
    auto context = text_field("context", true);
    auto question = text_field("question", true);
    if (!error.empty()) return std::nullopt;
    p.id = *id;
    auto parsed_kind = parse_task_kind(*kind);
    if (!parsed_kind) {
        error = "unknown task_kind '" + *kind + "' (expected deductive, fol or csp)";
        return std::nullopt;
    }
    p.task_kind = *parsed_kind;
    p.context = *context;
    p.question = *question;
    if (!j.contains("options") || !j["options"].is_array()) {
        error = "field 'options' must be an array of strings like \"A) True\"";
        return std::nullopt;
    }
    for (const auto& o : j["options"]) {
        auto opt = o.is_string() ? parse_option_line(o.get<std::string>()) : std::nullopt;
        if (!opt) {
            error = "option " + o.dump() + " is not of the form \"A) text\"";
            return std::nullopt;
        }
        p.options.push_back(*opt);
    }
    if (auto answer = text_field("answer", false)) {
        auto a = text::trim(*answer);
        if (a.size() != 1) {
            error = "field 'answer' must be a single option letter";
            return std::nullopt;
        }
        p.gold_label = a[0];
    }
    if (!error.empty()) return std::nullopt;
    p.dataset = text_field("dataset", false).value_or(std::string(to_string(p.task_kind)));
    p.formulation = text_field("formulation", false);
    if (!error.empty()) return std::nullopt;
    auto problems = validate(p);
    if (!problems.empty()) {
        error = problems.front();
        return std::nullopt;
    }
    return p;
}

} // namespace detail

inline nlohmann::json to_json(const Problem& p) {
    nlohmann::json j;
    j["id"] = p.id;
    j["task_kind"] = to_string(p.task_kind);
    j["dataset"] = p.dataset;
    j["context"] = p.context;
    j["question"] = p.question;
    j["options"] = nlohmann::json::array();
    for (const auto& o : p.options) j["options"].push_back(std::string(1, o.letter) + ") " + o.text);
    if (p.gold_label) j["answer"] = std::string(1, *p.gold_label);
    if (p.formulation) j["formulation"] = *p.formulation;
    return j;
}

inline std::variant<Problem, DatasetFormatError> parse_problem(std::string_view json_text) {
    auto j = nlohmann::json::parse(json_text, nullptr, false);
    if (j.is_discarded()) return DatasetFormatError{0, "invalid JSON"};
    std::string error;
    auto p = detail::problem_from_json(j, error);
    if (!p) return DatasetFormatError{0, error};
    return *p;
}

struct Dataset {
    std::vector<Problem> problems;
    std::vector<DatasetFormatError> errors;

    bool ok() const noexcept { return errors.empty(); }
};

/// Parses JSON-lines text. Blank lines are skipped; every malformed record or
/// duplicate id is reported.
inline Dataset parse_dataset(std::string_view text) {
    Dataset out;
    std::set<std::string> ids;
    std::size_t number = 0;
    while (!text.empty()) {
        ++number;
        auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (text::trim(line).empty()) continue;
        auto parsed = parse_problem(line);
        if (auto* e = std::get_if<DatasetFormatError>(&parsed)) {
            out.errors.push_back({number, e->message});
            continue;
        }
        auto& p = std::get<Problem>(parsed);
        if (!ids.insert(p.id).second) {
            out.errors.push_back({number, "duplicate problem id '" + p.id + "'"});
            continue;
        }
        out.problems.push_back(std::move(p));
    }
    return out;
}

inline Dataset load_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return Dataset{{}, {{0, "cannot open dataset file '" + path + "'"}}};
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_dataset(text);
}

} // namespace logiclm::pipeline
