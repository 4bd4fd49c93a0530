#pragma once

// Access to the shipped prompt templates and the checked-in problem set.

#include <logiclm/pipeline/problem.hpp>
#include <logiclm/pipeline/prompt.hpp>

#include <filesystem>
#include <fstream>

namespace fixtures {

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::filesystem::path template_dir() { return std::filesystem::path(LOGICLM_DATA_DIR) / "templates"; }

inline logiclm::pipeline::TemplateLibrary templates() { return logiclm::pipeline::TemplateLibrary(template_dir()); }

inline logiclm::pipeline::PromptTemplate load_template(const std::string& id) {
    return logiclm::pipeline::parse_template(id, slurp(template_dir() / (id + ".txt")));
}

/// The program part of a demonstration: everything from the first line
/// starting with `first_header` on.
inline std::string demo_program(const std::string& demo, const std::string& first_header) {
    auto pos = demo.rfind("\n" + first_header + "\n");
    if (demo.starts_with(first_header + "\n")) pos = 0;
    else if (pos != std::string::npos) ++pos;
    else throw std::runtime_error("demonstration has no '" + first_header + "' line");
    return demo.substr(pos);
}

/// Demonstrations of one generation template, reduced to their programs.
inline std::vector<std::string> demo_programs(const std::string& id, const std::string& first_header) {
    std::vector<std::string> out;
    for (const auto& d : load_template(id).demonstrations) out.push_back(demo_program(d, first_header));
    return out;
}

struct RefineDemo {
    std::string program;
    std::string error;
    std::string corrected;
};

/// "Program:\n...\nError:\n...\nCorrected program:\n..." blocks.
inline std::vector<RefineDemo> refine_demos(const std::string& id) {
    std::vector<RefineDemo> out;
    for (const auto& d : load_template(id).demonstrations) {
        auto p = d.find("Program:\n");
        auto e = d.find("\nError:\n");
        auto c = d.find("\nCorrected program:\n");
        if (p != 0 || e == std::string::npos || c == std::string::npos)
            throw std::runtime_error("malformed correction demonstration in " + id);
        out.push_back({d.substr(9, e - 9), d.substr(e + 8, c - e - 8), d.substr(c + 20)});
    }
    return out;
}

inline std::vector<logiclm::pipeline::Problem> faithful_problems() {
    auto ds = logiclm::pipeline::load_dataset(std::string(LOGICLM_TEST_DATA) + "/faithful.jsonl");
    if (!ds.ok()) throw std::runtime_error("faithful.jsonl: " + logiclm::pipeline::render(ds.errors.front()));
    return ds.problems;
}

// Published demonstration excerpts verbatim, typos included.
inline constexpr std::string_view kProofWriterAsPrinted = R"(Predicates:
Quiet($x, bool) ::: Is x quiet?
Furry($x, bool) ::: Is x furry?
Red($x, bool) ::: Is x red?
White($x, bool) ::: Is x white?
Young($x, bool) ::: Is x young?
Facts:
Quite(Anne, True) ::: Anne is quiet.
White(Harry, True) ::: Harry is white.
Rules:
Young($x, True) >>> Furry($x, True) ::: Young people are furry.
Red($x, True) >>> Young($x, True) ::: All red people are young.
Query:
White(Anne, True) ::: Anne is white
)";

inline constexpr std::string_view kFolioAsPrinted = R"(Facts:
Forall('$x1', Implies(Atom('RegularlyDrinkCoffee' '$x1'), Atom('DependentOnCaffeine', '$x1'))) ::: All people who regularly drink coffee are dependent on caffeine.
Forall('$x1', Xor(Atom('RegularlyDrinkCoffee', '$x1'), Atom('JokeAboutBeingAddictedToCaffeine', '$x1'))) ::: People either regularly drink coffee or joke about being addicted to caffeine.
Query:
Xor(Atom('JokeAboutBeingAddictedToCaffeine', 'rina'), Atom('UnawareThatCaffeineIsADrug', 'rina')) ::: Rina is either a person who jokes about being addicted to caffeine or is unaware that caffeine is a drug.
)";

inline constexpr std::string_view kVehicles = R"(Domain:
1: oldest
3: newest
Variables:
station_wagon [IN] [1, 2, 3]
convertible [IN] [1, 2, 3]
minivan [IN] [1, 2, 3]
Constraints:
station_wagon == 1 ::: The station wagon is the oldest.
minivan > convertible ::: The minivan is newer than the convertible.
AllDifferentConstraint([station_wagon, convertible, minivan]) ::: All vehicles have different values.
Query:
A) station_wagon == 2 ::: The station wagon is the second-newest.
B) convertible == 2 ::: The convertible is the second-newest.
C) minivan == 2 ::: The minivan is the second-newest.
)";

inline constexpr std::string_view kCircuit = R"(Predicates:
Complete($x, bool) ::: Is x complete?
Has($x, $y) ::: Does x have y?
Glowing($x, bool) ::: Is x glowing?
Facts:
Complete(Circuit, True) ::: The circuit is complete.
Has(Circuit, LightBulb) ::: The circuit has a light bulb.
Rules:
Complete(Circuit, True) && Has(Circuit, LightBulb) >>> Glowing(LightBulb, True) ::: If the circuit is complete and the circuit has the light bulb, then the light bulb is glowing.
Query:
Glowing(LightBulb, True) ::: The light bulb is glowing.
)";

} // namespace fixtures
