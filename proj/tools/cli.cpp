#include "cli.hpp"

#include "insights/corpus.hpp"
#include "insights/error.hpp"
#include "insights/index.hpp"
#include "insights/ingest.hpp"
#include "insights/parallel.hpp"
#include "insights/report.hpp"
#include "insights/resolve.hpp"
#include "insights/summarize.hpp"
#include "insights/text.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <iomanip>

namespace insights::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
    int meeting = 0;
    std::string format = "md";
    std::vector<std::string> wgs;
    std::string backend = "mock";
    std::string model;
    std::string out = "out";
    std::string mirror;
    std::string api_base;
    std::string llm_base;
    double affil_threshold = resolve::Thresholds{}.affiliation;
    double person_threshold = resolve::Thresholds{}.person;
    std::size_t parallelism = 2;
    bool json = false;
    std::string created_at;
    int timeout_ms = 30000;
    std::string registry;
    std::string templates;
    int requests_per_minute = llm::BackendPolicy{}.requests_per_minute;
    int max_retries = llm::BackendPolicy{}.max_retries;
};

struct Run {
    const Options& opt;
    const Environment& env;
    std::ostream& out;
    std::vector<std::string> outputs;

    Clock& clock()
    {
        static SystemClock system;
        return env.clock ? *env.clock : system;
    }

    std::shared_ptr<http::Transport> transport()
    {
        const std::chrono::milliseconds timeout{opt.timeout_ms};
        if (env.transport) return env.transport(timeout);
        return http::make_default_transport(timeout);
    }

    std::optional<std::string> getenv(const std::string& name) const
    {
        if (env.getenv) return env.getenv(name);
        if (const char* v = std::getenv(name.c_str())) return std::string(v);
        return std::nullopt;
    }

    fs::path meeting_dir() const
    {
        if (opt.meeting <= 0) throw InvalidArgument("--meeting is required and must be positive");
        return fs::path(opt.out) / std::to_string(opt.meeting);
    }

    void wrote(const fs::path& p) { outputs.push_back(p.generic_string()); }

    void sync();
    void build();
    void report();
    void models();
};

void Run::sync()
{
    const fs::path dir = meeting_dir();
    ingest::SourceConfig cfg;
    cfg.meeting_number = opt.meeting;
    cfg.timeout_ms = opt.timeout_ms;
    if (!opt.mirror.empty()) cfg.mirror_root = fs::path(opt.mirror);
    if (!opt.api_base.empty()) cfg.api_base_url = opt.api_base;
    cfg.validate();

    ingest::FetchOptions fetch;
    fetch.parallelism = opt.parallelism;
    const auto net = cfg.mirror_root ? nullptr : transport();

    corpus::Snapshot snap;
    snap.meeting_number = opt.meeting;
    snap.sessions = ingest::fetch_sessions(cfg, net.get(), &clock(), fetch);
    if (cfg.mirror_root) {
        auto attendance = ingest::load_attendance(cfg);
        snap.attendance = std::move(attendance.rows);
        snap.skipped_rows = attendance.skipped;
    }
    corpus::save_snapshot(snap, dir);
    wrote(dir / corpus::kSnapshotFile);
}

void Run::build()
{
    const fs::path dir = meeting_dir();
    const auto snap = corpus::load_snapshot(dir);
    if (snap.meeting_number != opt.meeting) {
        throw ConsistencyError("snapshot is for meeting " + std::to_string(snap.meeting_number) + ", not " +
                               std::to_string(opt.meeting));
    }
    const resolve::Thresholds thresholds{opt.affil_threshold, opt.person_threshold};
    const auto resolution = resolve::resolve_attendance(snap.attendance, thresholds);

    const corpus::Timestamp created = opt.created_at.empty()
                                          ? std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now())
                                          : corpus::parse_timestamp(opt.created_at);
    const auto c = corpus::build_corpus(opt.meeting, snap.sessions, resolution.ledger, resolution.entities, created);
    corpus::save(c, dir);
    wrote(dir / corpus::kCorpusFile);

    index::save(index::build_index(c), dir);
    wrote(dir / index::kIndexFile);
}

std::unique_ptr<llm::CompletionBackend> make_backend(const Options& opt, Run& run)
{
    if (opt.backend == "mock") return std::make_unique<llm::MockBackend>();
    if (opt.model.empty()) throw InvalidArgument("--model is required for the " + opt.backend + " backend");
    llm::HttpBackendConfig cfg;
    cfg.model = opt.model;
    if (opt.backend == "local") {
        cfg.base_url = opt.llm_base.empty() ? "http://localhost:11434" : opt.llm_base;
        cfg.path = llm::kDefaultGeneratePath;
        return std::make_unique<llm::GenerateBackend>(run.transport(), cfg);
    }
    cfg.base_url = opt.llm_base;
    if (cfg.base_url.empty()) cfg.base_url = run.getenv("INSIGHTS_API_BASE").value_or("");
    if (cfg.base_url.empty()) cfg.base_url = "https://api.openai.com";
    cfg.path = llm::kDefaultChatPath;
    const auto key = run.getenv("INSIGHTS_API_KEY");
    if (!key || key->empty()) throw InvalidArgument("INSIGHTS_API_KEY must be set for the api backend");
    cfg.api_key = *key;
    return std::make_unique<llm::ChatCompletionsBackend>(run.transport(), cfg);
}

void Run::report()
{
    const fs::path dir = meeting_dir();
    const auto format = report::parse_format(opt.format);
    const auto c = corpus::load(dir);
    const auto idx = index::load(dir);

    std::vector<std::string> selected;
    if (opt.wgs.empty()) {
        for (const auto& [wg, _] : c.sessions) selected.push_back(wg);
    } else {
        std::vector<std::string> unknown;
        for (const auto& wg : opt.wgs) {
            if (!c.find(wg)) unknown.push_back(wg);
            else if (std::find(selected.begin(), selected.end(), wg) == selected.end()) selected.push_back(wg);
        }
        if (!unknown.empty()) {
            std::vector<std::string> known;
            for (const auto& [wg, _] : c.sessions) known.push_back(wg);
            throw NotFound("unknown working group(s): " + text::join(unknown, ", ") +
                           " (available: " + (known.empty() ? std::string("none") : text::join(known, ", ")) + ")");
        }
    }

    const auto registry = opt.registry.empty() ? llm::default_registry() : llm::load_registry(opt.registry);
    std::size_t context = llm::kDefaultLargeContextTokens;
    if (const auto* spec = registry.find(opt.model)) context = spec->context_tokens;

    auto backend = env.backend ? env.backend() : make_backend(opt, *this);
    llm::BackendPolicy policy;
    policy.max_retries = opt.max_retries;
    policy.requests_per_minute = opt.requests_per_minute;
    llm::LlmClient client(*backend, policy, clock(), context);
    const auto templates =
        opt.templates.empty() ? llm::PromptTemplates::defaults() : llm::PromptTemplates::load(opt.templates);

    std::vector<report::WgReport> reports(selected.size());
    parallel_for(selected.size(), opt.parallelism, [&](std::size_t i) {
        const auto summary = llm::summarize_wg(c, idx, selected[i], client, templates);
        reports[i] = report::compose(summary, *c.find(selected[i]));
    });

    const std::string ext(report::file_extension(format));
    for (const auto& r : reports) {
        const fs::path p = dir / (r.wg_acronym + "." + ext);
        text::write_file(p.string(), report::render(r, format).body);
        wrote(p);
    }
    report::MasterOptions master;
    master.date = report::long_date(c.created_at);
    const fs::path p = dir / ("report." + ext);
    text::write_file(p.string(), report::assemble_master(reports, opt.meeting, format, master).body);
    wrote(p);
}

void Run::models()
{
    const auto registry = opt.registry.empty() ? llm::default_registry() : llm::load_registry(opt.registry);
    if (opt.json) {
        for (const auto& m : registry.models) outputs.push_back(m.name);
        return;
    }
    out << std::left << std::setw(24) << "model" << std::setw(12) << "params (B)" << std::setw(11) << "size (GB)"
        << std::setw(10) << "category" << std::setw(10) << "locality" << "context\n";
    for (const auto& m : registry.models) {
        out << std::left << std::setw(24) << m.name << std::setw(12) << m.parameters_billions << std::setw(11)
            << m.size_gb << std::setw(10) << llm::to_string(m.category) << std::setw(10) << llm::to_string(m.locality)
            << m.context_tokens << "\n";
    }
}

void add_flags(CLI::App& app, Options& o)
{
    app.add_option("--meeting", o.meeting, "IETF meeting number, e.g. 119")->check(CLI::PositiveNumber);
    app.add_option("--format", o.format, "Output format: md or tex")
        ->check(CLI::IsMember({"md", "tex", "markdown", "latex"}))
        ->capture_default_str();
    app.add_option("--wg", o.wgs, "Comma-separated working group acronyms (default: all)")->delimiter(',');
    app.add_option("--backend", o.backend, "Completion backend: mock, api or local")
        ->check(CLI::IsMember({"mock", "api", "local"}))
        ->capture_default_str();
    app.add_option("--model", o.model, "Model name for the api or local backend");
    app.add_option("--out", o.out, "Output root; files go to <out>/<meeting>/")->capture_default_str();
    app.add_option("--mirror", o.mirror, "Local mirror root holding <meeting>/<wg>/ directories");
    app.add_option("--api-base", o.api_base, "Meeting-records API base URL");
    app.add_option("--llm-base", o.llm_base, "Completion endpoint base URL (default depends on --backend)");
    app.add_option("--affil-threshold", o.affil_threshold, "Affiliation clustering threshold in (0, 100]")
        ->capture_default_str();
    app.add_option("--person-threshold", o.person_threshold, "Person clustering threshold in (0, 100]")
        ->capture_default_str();
    app.add_option("--parallelism", o.parallelism, "Concurrent fetches and summaries")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_flag("--json", o.json, "Print a one-line JSON run summary");
    app.add_option("--created-at", o.created_at, "Corpus timestamp YYYY-MM-DDTHH:MM:SSZ (default: now)");
    app.add_option("--timeout-ms", o.timeout_ms, "HTTP timeout in milliseconds")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--registry", o.registry, "Model registry JSON (default: built in)");
    app.add_option("--templates", o.templates, "Directory with prompt template overrides");
    app.add_option("--rpm", o.requests_per_minute, "Completion requests per minute")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--max-retries", o.max_retries, "Retries per completion request")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
}

void print_summary(std::ostream& out, const std::string& command, bool ok, const std::vector<std::string>& outputs,
                   const std::vector<std::string>& errors)
{
    nlohmann::json j;
    j["command"] = command;
    j["ok"] = ok;
    j["outputs"] = outputs;
    j["errors"] = errors;
    out << j.dump() << "\n";
}

} // namespace

int exit_code_for(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::network:
    case ErrorKind::rate_limit_exhausted:
    case ErrorKind::backend:
    case ErrorKind::context_overflow:
    case ErrorKind::grounding:
    case ErrorKind::format:
        return kExitBackend;
    case ErrorKind::parse:
    case ErrorKind::not_found:
    case ErrorKind::invalid_threshold:
    case ErrorKind::consistency:
    case ErrorKind::io:
    case ErrorKind::schema:
    case ErrorKind::invalid_budget:
    case ErrorKind::duplicate_wg:
    case ErrorKind::invalid_argument:
        return kExitInput;
    }
    return kExitInternal;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Environment& env)
{
    Options opt;
    CLI::App app{"Per-working-group IETF meeting reports from meeting records", "ietf-insights"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_config("--config", "", "key = value configuration file; flags override it");
    add_flags(app, opt);

    auto* sync = app.add_subcommand("sync", "Fetch sessions and attendance into <out>/<meeting>/snapshot.json");
    auto* build = app.add_subcommand("build", "Resolve identities and write corpus.json and index.json");
    auto* rep = app.add_subcommand("report", "Summarize working groups and render reports plus the master document");
    auto* all = app.add_subcommand("run", "sync, build and report in one go");
    auto* models = app.add_subcommand("models", "List the model registry");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        if (e.get_exit_code() == 0) return kExitOk;
        return kExitInput;
    }

    std::string command;
    for (const auto* sub : {sync, build, rep, all, models}) {
        if (sub->parsed()) command = sub->get_name();
    }

    Run r{opt, env, out, {}};
    std::vector<std::string> errors;
    int code = kExitOk;
    try {
        if (command == "sync" || command == "run") r.sync();
        if (command == "build" || command == "run") r.build();
        if (command == "report" || command == "run") r.report();
        if (command == "models") r.models();
    } catch (const Error& e) {
        errors.push_back(std::string(to_string(e.kind())) + ": " + e.what());
        code = exit_code_for(e.kind());
    } catch (const http::TransportError& e) {
        errors.push_back(std::string("NetworkError: ") + e.what());
        code = kExitBackend;
    } catch (const std::exception& e) {
        errors.push_back(std::string("internal error: ") + e.what());
        code = kExitInternal;
    }

    if (opt.json) {
        print_summary(out, command, code == kExitOk, r.outputs, errors);
    } else {
        for (const auto& p : r.outputs) out << "wrote " << p << "\n";
    }
    for (const auto& e : errors) err << "error: " << e << "\n";
    return code;
}

} // namespace insights::cli
