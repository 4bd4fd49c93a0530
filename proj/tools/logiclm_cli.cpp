// logiclm: parse and solve symbolic programs, run the formulate / solve /
// refine pipeline on single problems or whole datasets.

#include <logiclm/logiclm.hpp>
#include <logiclm/pipeline/live_provider.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace lp = logiclm::lp;
namespace fol = logiclm::fol;
namespace csp = logiclm::csp;
namespace pl = logiclm::pipeline;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read '" + path + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + path + "'");
    out << content;
}

pl::TaskKind task_kind(const std::string& s) {
    if (auto k = pl::parse_task_kind(s)) return *k;
    throw UsageError("unknown kind '" + s + "' (expected lp, fol or csp)");
}

/// Guesses the language from the section headers when --kind is absent.
pl::TaskKind sniff_kind(const std::string& text) {
    if (text.find("Variables:") != std::string::npos || text.find("Domain:") != std::string::npos)
        return pl::TaskKind::Csp;
    if (text.find("Atom(") != std::string::npos) return pl::TaskKind::Fol;
    return pl::TaskKind::Deductive;
}

struct LimitFlags {
    std::size_t max_derived_facts = lp::LpLimits{}.max_derived_facts;
    std::size_t max_clauses = fol::ProverLimits{}.max_clauses;
    std::size_t max_resolution_steps = fol::ProverLimits{}.max_resolution_steps;
    int max_term_depth = fol::ProverLimits{}.max_term_depth;
    std::size_t max_solutions = csp::CspLimits{}.max_solutions;
    double budget_seconds = pl::SymbolicLimits{}.budget_seconds;

    void add_to(CLI::App& app) {
        auto* g = app.add_option_group("Limits");
        g->add_option("--max-derived-facts", max_derived_facts, "Deductive: fact budget")->capture_default_str();
        g->add_option("--max-clauses", max_clauses, "FOL: kept clause budget")->capture_default_str();
        g->add_option("--max-steps", max_resolution_steps, "FOL: resolution step budget")->capture_default_str();
        g->add_option("--max-term-depth", max_term_depth, "FOL: deepest kept term")->capture_default_str();
        g->add_option("--max-solutions", max_solutions, "CSP: solution cap")->capture_default_str();
        g->add_option("--budget", budget_seconds, "Wall-clock seconds per solve")->capture_default_str();
    }

    pl::SymbolicLimits limits() const {
        pl::SymbolicLimits l;
        l.lp.max_derived_facts = max_derived_facts;
        l.fol.max_clauses = max_clauses;
        l.fol.max_resolution_steps = max_resolution_steps;
        l.fol.max_term_depth = max_term_depth;
        l.csp.max_solutions = max_solutions;
        l.budget_seconds = budget_seconds;
        return l;
    }
};

struct ProviderFlags {
    std::string kind = "replay";
    std::string fixture;
    std::string script;
    pl::ProviderConfig config;

    void add_to(CLI::App& app) {
        app.add_option("--provider", kind, "live | replay | script | identity")
            ->check(CLI::IsMember({"live", "replay", "script", "identity"}))
            ->capture_default_str();
        app.add_option("--fixture", fixture, "Replay fixture (JSON)");
        app.add_option("--script", script, "Scripted responses: JSON object of problem id -> [round 0, round 1, ...]");
        auto* g = app.add_option_group("Live provider");
        g->add_option("--endpoint", config.endpoint_url, "Completion endpoint URL");
        g->add_option("--model", config.model_name, "Model identifier sent with each request");
        g->add_option("--auth-env", config.auth_env_var, "Environment variable holding the bearer token")
            ->capture_default_str();
        g->add_option("--temperature", config.temperature)->capture_default_str();
        g->add_option("--timeout", config.timeout_seconds, "Seconds per request")->capture_default_str();
        g->add_option("--response-pointer", config.response_pointer, "JSON pointer of the completion text")
            ->capture_default_str();
        g->add_flag("!--plain-prompt", config.chat_messages, "Send {\"prompt\": ...} instead of a message list");
        app.add_option("--num-examples", config.num_examples, "Demonstrations per prompt")->capture_default_str();
    }

    std::unique_ptr<pl::Provider> make(const std::vector<pl::Problem>& problems) const {
        if (kind == "live") return std::make_unique<pl::LiveProvider>(config);
        if (kind == "replay") {
            if (fixture.empty()) throw UsageError("--provider replay needs --fixture");
            return std::make_unique<pl::ReplayProvider>(pl::ReplayProvider::load(fixture));
        }
        if (kind == "script") {
            if (script.empty()) throw UsageError("--provider script needs --script");
            auto j = nlohmann::json::parse(read_file(script), nullptr, false);
            std::map<std::string, std::vector<std::string>> scripts;
            try {
                scripts = j.get<std::map<std::string, std::vector<std::string>>>();
            } catch (const nlohmann::json::exception&) {
                throw UsageError("script '" + script + "' must map problem ids to arrays of strings");
            }
            return std::make_unique<pl::ScriptedProvider>(std::move(scripts));
        }
        return std::make_unique<pl::IdentityProvider>(problems);
    }
};

struct PipelineFlags {
    int max_rounds = 3;
    std::string backoff = "abstain";
    std::uint64_t seed = 0;
    std::string templates = LOGICLM_DATA_DIR "/templates";
    std::string template_id;

    void add_to(CLI::App& app) {
        app.add_option("--max-rounds", max_rounds, "Self-refinement rounds")->check(CLI::NonNegativeNumber)
            ->capture_default_str();
        app.add_option("--backoff", backoff, "abstain | fixed-first | seeded-random")
            ->check(CLI::IsMember({"abstain", "fixed-first", "seeded-random"}))
            ->capture_default_str();
        app.add_option("--seed", seed, "Seed for seeded-random backoff")->capture_default_str();
        app.add_option("--templates", templates, "Prompt template directory")->capture_default_str();
        app.add_option("--template", template_id, "Use this template for every problem");
    }

    pl::PipelineConfig config(const ProviderFlags& provider, const LimitFlags& limits) const {
        pl::PipelineConfig c;
        c.provider = provider.config;
        c.max_rounds = max_rounds;
        c.backoff = {*pl::parse_backoff(backoff), seed};
        c.limits = limits.limits();
        if (!template_id.empty()) c.template_id = template_id;
        return c;
    }
};

void print_diagnostics(const std::vector<logiclm::ParseError>& errors, const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    for (const auto& e : errors) std::cerr << "error: " << logiclm::render(e) << "\n";
}

pl::Formulation parse_text(const std::string& text, pl::TaskKind kind) {
    pl::Formulation f;
    f.raw_text = text;
    pl::parse_into(f, kind);
    print_diagnostics(f.errors, f.warnings);
    return f;
}

int cmd_parse(const std::string& file, const std::string& kind_flag) {
    auto text = read_file(file);
    auto kind = kind_flag.empty() ? sniff_kind(text) : task_kind(kind_flag);
    auto f = parse_text(text, kind);
    if (!f.parsed_ok()) return 1;
    std::cout << pl::print_parsed(f.parsed);
    return 0;
}

void print_lp_proof(const lp::ProofTree& t, int indent) {
    std::cout << std::string(static_cast<std::size_t>(indent) * 2, ' ') << logiclm::to_string(t.root)
              << (t.is_leaf() ? "  [fact]" : "") << "\n";
    for (const auto& c : t.children) print_lp_proof(c, indent + 1);
}

void print_refutation(const fol::SaturationResult& s) {
    if (!s.empty_clause) return;
    std::set<std::size_t> keep;
    std::vector<std::size_t> stack{*s.empty_clause};
    while (!stack.empty()) {
        auto id = stack.back();
        stack.pop_back();
        if (!keep.insert(id).second) continue;
        for (auto p : s.log[id].parents) stack.push_back(p);
    }
    for (auto id : keep) std::cout << "  " << fol::to_string(s.log[id]) << "\n";
}

int cmd_prove(const std::string& file, const std::string& kind_flag, const LimitFlags& flags, bool show_proof) {
    auto text = read_file(file);
    auto kind = kind_flag.empty() ? sniff_kind(text) : task_kind(kind_flag);
    auto f = parse_text(text, kind);
    if (!f.parsed_ok()) return 1;
    auto limits = flags.limits();
    auto outcome = pl::solve_symbolic(f, limits);
    for (const auto& w : outcome.warnings) std::cerr << "warning: " << w << "\n";
    if (outcome.execution_error) {
        std::cerr << "error: " << *outcome.execution_error << "\n";
        return 1;
    }
    std::cout << pl::to_string(*outcome.verdict) << "\n";
    if (!show_proof) return 0;
    if (const auto* p = std::get_if<lp::LpProgram>(&f.parsed)) {
        for (const auto& goal : {p->query, lp::flipped_polarity(p->query).value_or(p->query)}) {
            auto proof = lp::backward_prove(*p, goal, limits.lp);
            if (!proof.proof) continue;
            std::cout << "proof of " << logiclm::to_string(goal) << ":\n";
            print_lp_proof(*proof.proof, 1);
            break;
        }
    } else if (const auto* p = std::get_if<fol::FolProblem>(&f.parsed)) {
        std::vector<logiclm::Formula> facts;
        for (const auto& s : p->facts) facts.push_back(s.formula);
        auto r = fol::resolve_entailment(facts, p->query.formula, limits.fol);
        if (r.refute_negated_query.refuted()) {
            std::cout << "refutation of facts + not query:\n";
            print_refutation(r.refute_negated_query);
        } else if (r.refute_query.refuted()) {
            std::cout << "refutation of facts + query:\n";
            print_refutation(r.refute_query);
        }
    } else if (const auto* m = std::get_if<csp::CspModel>(&f.parsed)) {
        auto solved = csp::solve_all(*m, limits.csp);
        std::cout << solved.solutions.size() << " solution(s):\n";
        for (const auto& s : solved.solutions) std::cout << "  " << csp::to_string(s) << "\n";
    }
    return 0;
}

pl::Problem load_problem(const std::string& path) {
    auto text = read_file(path);
    auto parsed = pl::parse_problem(text);
    if (auto* e = std::get_if<pl::DatasetFormatError>(&parsed)) throw UsageError(path + ": " + e->message);
    return std::get<pl::Problem>(parsed);
}

void save_recording(const std::string& path, const pl::RecordingProvider* recorder) {
    if (recorder && !path.empty()) write_file(path, pl::replay_to_json(recorder->entries()).dump(2) + "\n");
}

int cmd_solve(const std::string& file, const ProviderFlags& provider_flags, const PipelineFlags& pipeline_flags,
              const LimitFlags& limit_flags, const std::string& record, const std::string& out) {
    auto problem = load_problem(file);
    auto provider = provider_flags.make({problem});
    std::unique_ptr<pl::RecordingProvider> recorder;
    if (!record.empty()) recorder = std::make_unique<pl::RecordingProvider>(*provider);
    pl::TemplateLibrary templates(pipeline_flags.templates);
    pl::Pipeline pipeline(recorder ? static_cast<pl::Provider&>(*recorder) : *provider, templates,
                          pipeline_flags.config(provider_flags, limit_flags));
    auto trace = pipeline.run(problem);
    save_recording(record, recorder.get());
    auto doc = pl::to_json(trace).dump(2) + "\n";
    if (out.empty()) std::cout << doc;
    else write_file(out, doc);
    std::cerr << "answer: " << (trace.answer.letter ? std::string(1, *trace.answer.letter) : "abstain");
    if (!trace.answer.diagnostic.empty()) std::cerr << " (" << trace.answer.diagnostic << ")";
    std::cerr << "\n";
    return 0;
}

int cmd_eval(const std::string& dataset_path, const ProviderFlags& provider_flags, const PipelineFlags& pipeline_flags,
             const LimitFlags& limit_flags, const std::string& out, unsigned jobs, const std::string& traces,
             const std::string& record) {
    auto dataset = pl::load_dataset(dataset_path);
    if (!dataset.ok()) {
        for (const auto& e : dataset.errors) std::cerr << "error: " << dataset_path << ": " << pl::render(e) << "\n";
        return 1;
    }
    auto provider = provider_flags.make(dataset.problems);
    std::unique_ptr<pl::RecordingProvider> recorder;
    if (!record.empty()) recorder = std::make_unique<pl::RecordingProvider>(*provider);
    pl::TemplateLibrary templates(pipeline_flags.templates);
    pl::EvalOptions options;
    options.jobs = jobs;
    if (!traces.empty()) options.trace_dir = traces;
    auto report = pl::run_eval(dataset.problems, recorder ? static_cast<pl::Provider&>(*recorder) : *provider,
                               templates, pipeline_flags.config(provider_flags, limit_flags), options);
    save_recording(record, recorder.get());
    auto doc = pl::to_json(report).dump(2) + "\n";
    if (out.empty()) std::cout << doc;
    else write_file(out, doc);
    std::cerr << "accuracy " << report.overall.correct << "/" << report.overall.labeled << " ("
              << report.overall.accuracy() << "), abstentions " << report.overall.abstentions << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Neuro-symbolic reasoning toolkit: symbolic solvers and a formulate/solve/refine pipeline"};
    app.require_subcommand(1);

    std::string file, kind;
    auto* parse = app.add_subcommand("parse", "Parse a program and print it in canonical form");
    parse->add_option("file", file, "Program file")->required();
    parse->add_option("--kind", kind, "lp | fol | csp (guessed from the headers when absent)");

    LimitFlags limits;
    bool show_proof = false;
    auto* prove = app.add_subcommand("prove", "Parse and solve a program, print its verdict");
    prove->add_option("file", file, "Program file")->required();
    prove->add_option("--kind", kind, "lp | fol | csp (guessed from the headers when absent)");
    prove->add_flag("--proof", show_proof, "Also print a proof, refutation or solution list");
    limits.add_to(*prove);

    ProviderFlags provider;
    PipelineFlags pipeline;
    std::string out, record, traces;
    auto* solve = app.add_subcommand("solve", "Run the pipeline on one problem (a dataset record as JSON)");
    solve->add_option("problem", file, "Problem JSON file")->required();
    solve->add_option("--out", out, "Write the trace here instead of stdout");
    solve->add_option("--record", record, "Save the provider exchanges as a replay fixture");
    provider.add_to(*solve);
    pipeline.add_to(*solve);
    limits.add_to(*solve);

    unsigned jobs = 0;
    auto* eval = app.add_subcommand("eval", "Evaluate a JSON-lines dataset");
    eval->add_option("dataset", file, "Dataset file")->required();
    eval->add_option("--out", out, "Write the report here instead of stdout");
    eval->add_option("--jobs", jobs, "Worker threads (0 = core count)")->capture_default_str();
    eval->add_option("--traces", traces, "Directory for per-problem trace files");
    eval->add_option("--record", record, "Save the provider exchanges as a replay fixture");
    provider.add_to(*eval);
    pipeline.add_to(*eval);
    limits.add_to(*eval);

    CLI11_PARSE(app, argc, argv);
    try {
        if (*parse) return cmd_parse(file, kind);
        if (*prove) return cmd_prove(file, kind, limits, show_proof);
        if (*solve) return cmd_solve(file, provider, pipeline, limits, record, out);
        if (*eval) return cmd_eval(file, provider, pipeline, limits, out, jobs, traces, record);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const pl::ProviderError& e) {
        std::cerr << "error: ProviderError: " << e.what() << "\n";
        return 3;
    } catch (const pl::MissingTemplate& e) {
        std::cerr << "error: MissingTemplate: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
