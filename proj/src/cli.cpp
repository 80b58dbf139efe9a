#include "evcorr/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "evcorr/correlator.hpp"
#include "evcorr/evaluation.hpp"
#include "evcorr/event_io.hpp"
#include "evcorr/heuristics.hpp"
#include "evcorr/replay.hpp"
#include "evcorr/task_dependencies.hpp"
#include "evcorr/workflow_net.hpp"

namespace evcorr {

namespace {

constexpr int kFailure = 2;

struct RunConfig {
    std::string model;
    std::string model_format;
    std::string silent_labels = "tau";
    std::string heuristics;
    long heuristics_unit = 1;
    std::string input;
    std::string format;
    std::string output;
    std::string truth;
    double threshold = 0.0;
    std::string speedup = "inf";
    std::string lifecycle = "auto";
};

// Carries a diagnostic code up to the top-level handler.
struct CliError : std::runtime_error {
    CliError(std::string c, const std::string& message) : std::runtime_error(message), code(std::move(c)) {}
    std::string code;
};

std::set<std::string, std::less<>> split_labels(const std::string& list) {
    std::set<std::string, std::less<>> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.insert(item);
    return out;
}

double parse_speedup(const std::string& text) {
    if (text == "inf" || text == "infinity" || text == "max") return kInfiniteSpeedup;
    double v = 0.0;
    try {
        std::size_t used = 0;
        v = std::stod(text, &used);
        if (used != text.size()) v = 0.0;
    } catch (const std::exception&) {
        v = 0.0;
    }
    if (!(v > 0.0)) throw CliError("BAD_SPEEDUP", "speedup must be a positive number or 'inf', got '" + text + "'");
    return v;
}

void require(const std::string& value, const char* flag) {
    if (value.empty()) throw CliError("MISSING_OPTION", std::string(flag) + " is required");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliError("NOT_FOUND", "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Model {
    WorkflowNet net;
    TaskDependencies td;
};

Model load_model(const RunConfig& cfg, std::ostream& err) {
    require(cfg.model, "--model");
    ParseOptions opts;
    opts.silent_labels = split_labels(cfg.silent_labels);
    std::optional<std::string> fmt;
    if (!cfg.model_format.empty()) fmt = cfg.model_format;
    if (!std::filesystem::exists(cfg.model)) throw CliError("NOT_FOUND", "cannot open '" + cfg.model + "'");
    auto net = load_net(cfg.model, opts, fmt);

    auto diagnostics = validate(net);
    for (const auto& w : diagnostics.warnings) err << "warning [" << w.code << "] " << w.node << ": " << w.message << '\n';
    if (!diagnostics.ok()) {
        for (const auto& e : diagnostics.errors) err << "error [" << e.code << "] " << e.node << ": " << e.message << '\n';
        throw CliError(diagnostics.errors.front().code, cfg.model + ": model failed validation");
    }
    auto td = build_task_dependencies(net);
    for (const auto& w : td.warnings) err << "warning [" << w.code << "] " << w.node << ": " << w.message << '\n';
    return {std::move(net), std::move(td)};
}

HeuristicTable load_heuristic_file(const RunConfig& cfg) {
    require(cfg.heuristics, "--heuristics");
    return load_heuristics(read_file(cfg.heuristics), Duration{cfg.heuristics_unit});
}

EventRead load_input(const std::string& path, const RunConfig& cfg, std::ostream& err) {
    std::optional<EventFormat> fmt;
    if (!cfg.format.empty()) {
        fmt = parse_event_format(cfg.format);
        if (!fmt) throw CliError("BAD_FORMAT", "unknown event format '" + cfg.format + "'");
    }
    auto read = read_labeled_events_file(path, fmt);
    for (const auto& w : read.warnings) err << "warning: " << path << ": " << w << '\n';
    return read;
}

StreamMode stream_mode(const RunConfig& cfg, const std::vector<UncorrelatedEvent>& events) {
    if (cfg.lifecycle == "completed") return StreamMode::completed_only;
    if (cfg.lifecycle == "paired") return StreamMode::started_completed;
    if (cfg.lifecycle != "auto") throw CliError("BAD_LIFECYCLE", "--lifecycle must be auto, completed or paired");
    bool started = std::any_of(events.begin(), events.end(),
                               [](const UncorrelatedEvent& e) { return e.effective_lifecycle() == Lifecycle::started; });
    return started ? StreamMode::started_completed : StreamMode::completed_only;
}

// Writes to --output when given, otherwise to `out`.
template <typename Fn>
void emit(const RunConfig& cfg, std::ostream& out, Fn&& write) {
    if (cfg.output.empty()) {
        write(out);
        return;
    }
    std::ofstream file(cfg.output, std::ios::binary);
    if (!file) throw CliError("NOT_WRITABLE", "cannot write '" + cfg.output + "'");
    write(file);
}

std::vector<UncorrelatedEvent> unlabeled(const EventRead& read) {
    std::vector<UncorrelatedEvent> out;
    out.reserve(read.events.size());
    for (const auto& e : read.events) out.push_back(e.event);
    return out;
}

int cmd_analyze(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    auto model = load_model(cfg, err);
    emit(cfg, out, [&](std::ostream& o) { o << to_json(model.td).dump(2) << '\n'; });
    return 0;
}

struct CorrelationRun {
    Correlator correlator;
    ReplayReport report;
};

CorrelationRun correlate_stream(const Model& model, HeuristicTable h, const std::vector<UncorrelatedEvent>& events,
                                const RunConfig& cfg) {
    CorrelationRun run{Correlator(model.td, std::move(h), stream_mode(cfg, events)), {}};
    run.report = replay(events, parse_speedup(cfg.speedup), [&](const UncorrelatedEvent& e) { run.correlator.ingest(e); });
    return run;
}

int cmd_correlate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.threshold < 0.0 || cfg.threshold > 100.0) throw CliError("BAD_THRESHOLD", "--threshold must be in [0, 100]");
    auto model = load_model(cfg, err);
    auto h = load_heuristic_file(cfg);
    require(cfg.input, "--input");
    auto events = unlabeled(load_input(cfg.input, cfg, err));

    auto run = correlate_stream(model, std::move(h), events, cfg);
    emit(cfg, out, [&](std::ostream& o) { write_correlated_csv(o, run.correlator.export_log(cfg.threshold)); });
    err << "events: " << events.size() << ", cases: " << run.correlator.store().case_count()
        << ", noise events: " << run.correlator.noise_count() << '\n';
    return 0;
}

int cmd_replay(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    require(cfg.input, "--input");
    auto events = unlabeled(load_input(cfg.input, cfg, err));
    const auto speedup = parse_speedup(cfg.speedup);

    std::optional<Correlator> correlator;
    if (!cfg.model.empty()) {
        auto model = load_model(cfg, err);
        correlator.emplace(model.td, load_heuristic_file(cfg), stream_mode(cfg, events));
    }

    out << (correlator ? "case_id,timestamp,activity,trust,lifecycle,resource\n" : "timestamp,activity,lifecycle,resource\n");
    auto report = replay(events, speedup, [&](const UncorrelatedEvent& e) {
        if (correlator) {
            std::ostringstream rows;
            write_correlated_csv(rows, correlator->ingest(e).instances);
            auto text = rows.str();
            out << text.substr(text.find('\n') + 1);
        } else {
            out << format_timestamp(e.timestamp) << ',' << e.activity << ',';
            if (e.lifecycle) out << to_string(*e.lifecycle);
            out << ',' << e.resource.value_or("") << '\n';
        }
        out.flush();
    });

    nlohmann::json summary{{"delivered", report.delivered},
                           {"paced_s", std::chrono::duration<double>(report.paced).count()}};
    if (!report.latencies.empty()) {
        auto l = latency_report(report);
        summary["latency_ms"] = {{"mean", l.mean_ms}, {"p99", l.p99_ms}, {"max", l.max_ms}};
    }
    if (correlator) summary["noise"] = correlator->noise_count();
    err << summary.dump() << '\n';
    return 0;
}

int cmd_evaluate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    auto truth_path = cfg.truth.empty() ? cfg.input : cfg.truth;
    require(truth_path, "--truth");
    if (cfg.threshold < 0.0 || cfg.threshold > 100.0) throw CliError("BAD_THRESHOLD", "--threshold must be in [0, 100]");
    auto labeled = load_input(truth_path, cfg, err);
    if (!labeled.has_case_ids) throw CliError("NO_CASE_IDS", truth_path + ": labeled log needs a case_id column");
    auto model = load_model(cfg, err);
    auto h = load_heuristic_file(cfg);

    auto stripped = strip_case_ids(labeled.events);
    auto run = correlate_stream(model, std::move(h), stripped.events, cfg);
    auto mode = cfg.threshold > 0.0 ? ScoreMode::at_least(cfg.threshold) : ScoreMode::max_trust();
    auto counts = score(run.correlator.store().instances(), stripped.events, stripped.truth, mode);
    std::optional<LatencySummary> latency;
    if (!run.report.latencies.empty()) latency = latency_report(run.report);
    emit(cfg, out, [&](std::ostream& o) { o << report_json(counts, latency).dump(2) << '\n'; });
    return 0;
}

int cmd_extract(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    auto model = load_model(cfg, err);
    require(cfg.input, "--input");
    auto labeled = load_input(cfg.input, cfg, err);
    if (!labeled.events.empty() && !labeled.has_case_ids)
        throw CliError("NO_CASE_IDS", cfg.input + ": labeled log needs a case_id column");
    auto result = extract_heuristics(labeled.events, model.td, Duration{cfg.heuristics_unit});
    for (const auto& w : result.warnings) err << "warning: " << w << '\n';
    // Start activities have nothing to measure from in completed-only logs;
    // give every model activity an entry so the table loads for correlation.
    if (!labeled.events.empty()) {
        for (const auto& [activity, alts] : model.td.deps) {
            if (result.table.contains(activity)) continue;
            err << "warning: no duration observed for '" << activity << "', using 1,1\n";
            result.table.set(activity, 1, 1);
        }
    }
    emit(cfg, out, [&](std::ostream& o) { o << save_heuristics(result.table); });
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Correlates unlabeled process events to cases using a workflow net and duration heuristics."};
    app.name("evcorr");
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value file providing option defaults");

    RunConfig cfg;
    app.add_option("-m,--model", cfg.model, "workflow net (.pnml or simple text format)");
    app.add_option("--model-format", cfg.model_format, "pnml or simple (default: by extension)");
    app.add_option("--silent-labels", cfg.silent_labels, "comma-separated labels treated as silent")
        ->capture_default_str();
    app.add_option("-H,--heuristics", cfg.heuristics, "heuristics CSV (activity,min,max)");
    app.add_option("--heuristics-unit", cfg.heuristics_unit, "seconds per heuristic unit")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_option("-i,--input", cfg.input, "event log or stream file");
    app.add_option("-f,--format", cfg.format, "csv or jsonl (default: by extension)");
    app.add_option("-o,--output", cfg.output, "output file (default: stdout)");
    app.add_option("-t,--threshold", cfg.threshold, "minimum trust percentage")->capture_default_str();
    app.add_option("-s,--speedup", cfg.speedup, "replay speedup factor, or inf for no delay")->capture_default_str();
    app.add_option("--lifecycle", cfg.lifecycle, "auto, completed or paired")->capture_default_str();
    app.add_option("--truth", cfg.truth, "labeled log used as ground truth");

    auto* analyze = app.add_subcommand("analyze", "print task dependencies and loop entries as JSON");
    auto* correlate = app.add_subcommand("correlate", "assign case ids to an unlabeled stream");
    auto* replay_cmd = app.add_subcommand("replay", "replay a log at a speedup, optionally correlating it");
    auto* evaluate = app.add_subcommand("evaluate", "strip, correlate and score a labeled log");
    auto* extract = app.add_subcommand("extract-heuristics", "derive duration bounds from a labeled log");
    for (auto* sub : {analyze, correlate, replay_cmd, evaluate, extract}) sub->fallthrough();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }

    try {
        if (analyze->parsed()) return cmd_analyze(cfg, out, err);
        if (correlate->parsed()) return cmd_correlate(cfg, out, err);
        if (replay_cmd->parsed()) return cmd_replay(cfg, out, err);
        if (evaluate->parsed()) return cmd_evaluate(cfg, out, err);
        if (extract->parsed()) return cmd_extract(cfg, out, err);
    } catch (const CliError& e) {
        err << "error [" << e.code << "]: " << e.what() << '\n';
    } catch (const ModelError& e) {
        err << "error [" << e.code() << "]: " << e.what() << '\n';
    } catch (const HeuristicsError& e) {
        err << "error [" << e.code() << "]: " << e.what() << '\n';
    } catch (const EventIoError& e) {
        err << "error [" << e.code() << "]: " << e.what() << '\n';
    } catch (const CorrelationError& e) {
        err << "error [" << e.code() << "]: " << e.what() << '\n';
    } catch (const EvaluationError& e) {
        err << "error [" << e.code() << "]: " << e.what() << '\n';
    } catch (const ReplayError& e) {
        err << "error [REPLAY]: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return kFailure;
}

}  // namespace evcorr
