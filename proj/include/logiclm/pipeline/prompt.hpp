#pragma once

// Prompt templates. A template file is a task description, a list of
// demonstrations and a target block, separated by lines holding only
// "------". The target block carries [[CONTEXT]], [[QUESTION]] and
// [[OPTIONS]] placeholders (refinement templates use [[PROGRAM]] and
// [[ERROR]]).

#include "problem.hpp"

#include <filesystem>
#include <map>
#include <stdexcept>

namespace logiclm::pipeline {

inline constexpr std::string_view kBlockSeparator = "------";

class MissingTemplate : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PromptTemplate {
    std::string id;
    std::string description;
    std::vector<std::string> demonstrations;
    std::string target;
};

namespace detail {

inline std::string trim_blank_lines(std::string_view block) {
    while (!block.empty()) {
        auto nl = block.find('\n');
        auto first = block.substr(0, nl);
        if (!text::trim(first).empty() || nl == std::string_view::npos) break;
        block.remove_prefix(nl + 1);
    }
    while (!block.empty() && (block.back() == '\n' || block.back() == '\r' || block.back() == ' ')) block.remove_suffix(1);
    return std::string(block);
}

inline void replace_all(std::string& s, std::string_view from, std::string_view to) {
    for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
        s.replace(pos, from.size(), to);
}

} // namespace detail

inline PromptTemplate parse_template(std::string id, std::string_view text) {
    std::vector<std::string> blocks;
    std::string current;
    for (const auto& line : split_lines(text)) {
        if (text::trim(line.text) == kBlockSeparator) {
            blocks.push_back(detail::trim_blank_lines(current));
            current.clear();
            continue;
        }
        current += line.text;
        current += '\n';
    }
    blocks.push_back(detail::trim_blank_lines(current));
    if (blocks.size() < 2) throw MissingTemplate("template '" + id + "' needs a description block and a target block");
    PromptTemplate t;
    t.id = std::move(id);
    t.description = blocks.front();
    t.target = blocks.back();
    t.demonstrations.assign(blocks.begin() + 1, blocks.end() - 1);
    return t;
}

/// Description, the first `num_examples` demonstrations and the target, each
/// followed by a separator line; the target's trailing empty section headers
/// are kept so the prompt ends with the scaffold to fill in.
inline std::string render_prompt(const PromptTemplate& t, const std::map<std::string, std::string>& slots,
                                 int num_examples) {
    std::string out = t.description + "\n" + std::string(kBlockSeparator) + "\n";
    auto n = std::min<std::size_t>(t.demonstrations.size(), static_cast<std::size_t>(std::max(num_examples, 0)));
    for (std::size_t i = 0; i < n; ++i) out += t.demonstrations[i] + "\n" + std::string(kBlockSeparator) + "\n";
    std::string target = t.target;
    for (const auto& [key, value] : slots) detail::replace_all(target, "[[" + key + "]]", value);
    return out + target + "\n";
}

inline std::string build_prompt(const Problem& p, const PromptTemplate& t, int num_examples) {
    return render_prompt(t, {{"CONTEXT", p.context}, {"QUESTION", p.question}, {"OPTIONS", render_options(p.options)}},
                         num_examples);
}

inline std::string build_refine_prompt(const PromptTemplate& t, std::string_view program, std::string_view error,
                                       int num_examples) {
    return render_prompt(t, {{"PROGRAM", std::string(text::trim(program))}, {"ERROR", std::string(error)}},
                         num_examples);
}

/// Template files of one directory, loaded once and read-only afterwards.
class TemplateLibrary {
public:
    TemplateLibrary() = default;

    explicit TemplateLibrary(const std::filesystem::path& dir) {
        std::error_code ec;
        if (!std::filesystem::is_directory(dir, ec))
            throw MissingTemplate("template directory '" + dir.string() + "' does not exist");
        for (const auto& entry : std::filesystem::directory_iterator(dir)) {
            if (entry.path().extension() != ".txt") continue;
            std::ifstream in(entry.path(), std::ios::binary);
            std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
            add(parse_template(entry.path().stem().string(), text));
        }
    }

    void add(PromptTemplate t) {
        auto id = t.id;
        templates_.insert_or_assign(std::move(id), std::move(t));
    }

    const PromptTemplate* find(const std::string& id) const {
        auto it = templates_.find(id);
        return it == templates_.end() ? nullptr : &it->second;
    }

    const PromptTemplate& get(const std::string& id) const {
        if (const auto* t = find(id)) return *t;
        throw MissingTemplate("no prompt template named '" + id + "'");
    }

    static std::string default_id(TaskKind k) {
        switch (k) {
        case TaskKind::Deductive: return "proofwriter";
        case TaskKind::Fol: return "folio";
        case TaskKind::Csp: return "logical_deduction";
        }
        return "proofwriter";
    }

    /// The template named after the problem's dataset, else the task-kind default.
    const PromptTemplate& for_problem(const Problem& p) const {
        if (const auto* t = find(p.dataset)) return *t;
        return get(default_id(p.task_kind));
    }

    const PromptTemplate& refinement(TaskKind k) const { return get("refine_" + std::string(to_string(k))); }

    std::vector<std::string> ids() const {
        std::vector<std::string> out;
        for (const auto& [id, t] : templates_) out.push_back(id);
        return out;
    }

private:
    std::map<std::string, PromptTemplate> templates_;
};

} // namespace logiclm::pipeline
