// evflow_main.cpp
//
// Command-line front end. Subcommands cover the whole pipeline: synth,
// assemble, normalize, correlate, sweep, evaluate. Every subcommand reads
// and writes plain files and is deterministic: identical inputs and flags
// yield byte-identical outputs. Exit codes: 0 success, 1 input error,
// 2 internal inconsistency.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "evflow/correlate.hpp"
#include "evflow/evaluate.hpp"
#include "evflow/flowassembly.hpp"
#include "evflow/ingest.hpp"
#include "evflow/model.hpp"
#include "evflow/normalize.hpp"
#include "evflow/sweep.hpp"
#include "evflow/synth.hpp"

namespace {

using namespace evflow;
namespace fs = std::filesystem;

int64_t seconds_to_ms(double seconds) {
    return static_cast<int64_t>(std::llround(seconds * 1000.0));
}

FlowFormat pick_format(const std::string& explicit_format, const fs::path& path) {
    if (!explicit_format.empty()) {
        auto f = parse_flow_format(explicit_format);
        if (!f) throw InputError("unknown format \"" + explicit_format + "\"");
        return *f;
    }
    std::string ext = path.extension().string();
    return (ext == ".jsonl" || ext == ".json") ? FlowFormat::Jsonl : FlowFormat::Csv;
}

std::ifstream open_input(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    return in;
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path.string());
    out << content;
    if (!out) throw InputError("write failed: " + path.string());
}

fs::path prepare_out_dir(const std::string& dir) {
    fs::path path(dir);
    std::error_code ec;
    fs::create_directories(path, ec);
    if (ec) throw InputError("cannot create output directory " + dir);
    return path;
}

EventRecord to_event_record(const NormalizedEvent& e) {
    EventRecord r;
    r.time_generated = e.time_ms;
    r.s_ip = e.server_ip;
    r.s_port = e.server_port;
    r.c_ip = e.client_ip;
    r.c_port = e.client_port;
    r.cs_host = e.host;
    r.sc_bytes = e.bytes_sent;
    r.cs_bytes = e.bytes_received;
    r.cs_uri_stem = e.uri_stem;
    r.cs_user_agent = e.user_agent;
    r.source_id = e.id;
    return r;
}

FlowRecord to_flow_record(const NormalizedFlow& f) {
    FlowRecord r;
    r.start_ns = f.start_ms * 1'000'000;
    r.end_ns = f.end_ms * 1'000'000;
    r.l3_ipv4_src = f.client_ip;
    r.l3_ipv4_dst = f.server_ip;
    r.l4_port_src = f.client_port;
    r.l4_port_dst = f.server_port;
    r.bytes_a = f.bytes_to_server;
    r.bytes_b = f.bytes_to_client;
    r.http_request_host = f.sni;
    r.source_id = f.id;
    return r;
}

nlohmann::json parse_errors_json(const std::vector<ParseError>& errors) {
    auto arr = nlohmann::json::array();
    for (const ParseError& e : errors) {
        nlohmann::json j;
        j["line"] = e.line_number;
        j["reason"] = std::string(parse_reason_name(e.reason));
        j["raw"] = e.raw_line;
        arr.push_back(std::move(j));
    }
    return arr;
}

struct LoadedDataset {
    std::vector<NormalizedEvent> events;
    std::vector<NormalizedFlow> flows;
    std::vector<ParseError> event_errors;
    std::vector<ParseError> flow_errors;
};

LoadedDataset load_dataset(const std::string& events_path,
                           const std::string& flows_path,
                           const std::string& flow_format) {
    LoadedDataset data;
    {
        auto in = open_input(events_path);
        EventParseResult parsed = parse_event_log(in);
        data.event_errors = std::move(parsed.errors);
        data.events.reserve(parsed.records.size());
        for (const EventRecord& r : parsed.records)
            data.events.push_back(normalize_event(r));
    }
    {
        auto in = open_input(flows_path);
        FlowParseResult parsed =
            parse_flow_records(in, pick_format(flow_format, flows_path));
        data.flow_errors = std::move(parsed.errors);
        data.flows.reserve(parsed.records.size());
        for (const FlowRecord& r : parsed.records)
            data.flows.push_back(normalize_flow(r));
    }
    if (!data.event_errors.empty() || !data.flow_errors.empty()) {
        std::cerr << "warning: skipped " << data.event_errors.size()
                  << " malformed event line(s) and " << data.flow_errors.size()
                  << " malformed flow line(s)\n";
    }
    return data;
}

CorrelationWindow window_from_flags(const std::string& window_mode,
                                    double earliness_s, double lateness_s) {
    if (window_mode == "unbounded") return std::nullopt;
    if (!window_mode.empty())
        throw InputError("--window accepts only \"unbounded\"");
    TimeWindow w{seconds_to_ms(earliness_s), seconds_to_ms(lateness_s)};
    if (!w.valid()) throw InputError("window bounds must be non-negative");
    return w;
}

Variant variant_from_flag(const std::string& name) {
    auto v = parse_variant(name);
    if (!v)
        throw InputError("--features must be one of all-params, no-sni, no-port, "
                         "no-port-sni");
    return *v;
}

// "0..5" (whole seconds) or "0,0.5,2" (fractional seconds) per axis,
// axes joined with 'x'.
std::vector<int64_t> parse_grid_axis(const std::string& text) {
    std::vector<int64_t> values;
    if (auto dots = text.find(".."); dots != std::string::npos) {
        try {
            size_t used = 0;
            int64_t lo = std::stoll(text.substr(0, dots), &used);
            if (used != dots) throw InputError("bad --grid range \"" + text + "\"");
            std::string hi_text = text.substr(dots + 2);
            int64_t hi = std::stoll(hi_text, &used);
            if (used != hi_text.size() || lo > hi || lo < 0)
                throw InputError("bad --grid range \"" + text + "\"");
            for (int64_t s = lo; s <= hi; ++s) values.push_back(s * 1000);
        } catch (const InputError&) {
            throw;
        } catch (const std::exception&) {
            throw InputError("bad --grid range \"" + text + "\"");
        }
        return values;
    }
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        try {
            size_t used = 0;
            double seconds = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            values.push_back(seconds_to_ms(seconds));
        } catch (const std::exception&) {
            throw InputError("bad --grid value \"" + item + "\"");
        }
    }
    return values;
}

std::pair<std::vector<int64_t>, std::vector<int64_t>> parse_grid(
    const std::string& text) {
    auto x = text.find('x');
    if (x == std::string::npos || text.find('x', x + 1) != std::string::npos)
        throw InputError("--grid expects \"AxB\", e.g. 0..5x0..5");
    return {parse_grid_axis(text.substr(0, x)), parse_grid_axis(text.substr(x + 1))};
}

std::pair<double, double> parse_weights(const std::string& text) {
    auto comma = text.find(',');
    if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos)
        throw InputError("--weights expects \"W1,W2\", e.g. 1,2");
    try {
        size_t used = 0;
        std::string first = text.substr(0, comma);
        std::string second = text.substr(comma + 1);
        double w1 = std::stod(first, &used);
        if (used != first.size()) throw std::invalid_argument(first);
        double w2 = std::stod(second, &used);
        if (used != second.size()) throw std::invalid_argument(second);
        if (w1 < 0 || w2 < 0) throw InputError("weights must be non-negative");
        return {w1, w2};
    } catch (const InputError&) {
        throw;
    } catch (const std::exception&) {
        throw InputError("bad --weights \"" + text + "\"");
    }
}

SynthConfig default_synth_config() {
    SynthConfig config;
    config.session_count = 1000;
    config.server_pool = {
        {*Ipv4::parse("192.0.2.10"), 443, {"www.example.org", "api.example.org"}},
        {*Ipv4::parse("198.51.100.20"), 443, {"cdn.example.net"}},
    };
    config.client_pool_size = 50;
    config.event_lag_ms = LagSpec::uniform(0.0, 800.0);
    config.event_drop_rate = 0.02;
    config.flow_drop_rate = 0.02;
    config.crawler_duplicate_rate = 0.05;
    config.seed = 1;
    return config;
}

struct NormalizeArgs {
    std::string events, flows, flow_format, features = "all-params", out;
};

void run_normalize(const NormalizeArgs& args) {
    LoadedDataset data = load_dataset(args.events, args.flows, args.flow_format);
    Variant variant = variant_from_flag(args.features);
    FilterResult filtered =
        filter_dataset(std::move(data.events), std::move(data.flows), variant);

    fs::path out = prepare_out_dir(args.out);
    {
        std::vector<EventRecord> events;
        events.reserve(filtered.events.size());
        for (const NormalizedEvent& e : filtered.events)
            events.push_back(to_event_record(e));
        std::ofstream stream(out / "events.log");
        if (!stream) throw InputError("cannot write " + (out / "events.log").string());
        write_event_log(stream, events);
    }
    FlowFormat format = pick_format(args.flow_format, args.flows);
    {
        std::vector<FlowRecord> flows;
        flows.reserve(filtered.flows.size());
        for (const NormalizedFlow& f : filtered.flows)
            flows.push_back(to_flow_record(f));
        fs::path path = out / (format == FlowFormat::Csv ? "flows.csv" : "flows.jsonl");
        std::ofstream stream(path);
        if (!stream) throw InputError("cannot write " + path.string());
        write_flow_records(stream, flows, format);
    }
    {
        nlohmann::json j;
        j["event_parse_errors"] = parse_errors_json(data.event_errors);
        j["flow_parse_errors"] = parse_errors_json(data.flow_errors);
        auto rejections = nlohmann::json::array();
        for (const FilterRejection& r : filtered.rejections) {
            nlohmann::json item;
            item["kind"] = r.kind == FilterRejection::Kind::Event ? "event" : "flow";
            item["id"] = r.id;
            item["missing"] = std::string(feature_name(r.missing));
            rejections.push_back(std::move(item));
        }
        j["rejections"] = std::move(rejections);
        write_text(out / "errors.json", j.dump(2) + "\n");
    }
    std::cout << "kept " << filtered.events.size() << " events, "
              << filtered.flows.size() << " flows; rejected "
              << filtered.rejections.size() << "; parse errors "
              << data.event_errors.size() + data.flow_errors.size() << "\n";
}

struct CorrelateArgs {
    std::string events, flows, flow_format, features = "all-params", out;
    double earliness = 0.0, lateness = 0.0;
    std::string window_mode;
};

void run_correlate(const CorrelateArgs& args) {
    LoadedDataset data = load_dataset(args.events, args.flows, args.flow_format);
    Variant variant = variant_from_flag(args.features);
    CorrelationWindow window =
        window_from_flags(args.window_mode, args.earliness, args.lateness);

    RelationSet relations = correlate(data.events, data.flows, variant, window);
    ClassifiedReport report = classify_relations(relations, data.events, data.flows);

    fs::path out = prepare_out_dir(args.out);
    {
        std::ofstream stream(out / "relations.jsonl");
        if (!stream)
            throw InputError("cannot write " + (out / "relations.jsonl").string());
        write_relations_jsonl(stream, relations);
    }
    write_text(out / "summary.json", classification_summary_json(report));
    std::cout << "relations=" << relations.size()
              << " single_events=" << report.single_events
              << " single_flows=" << report.single_flows
              << " correlated_events=" << report.correlated_events
              << " correlated_flows=" << report.correlated_flows
              << " polygamous_events=" << report.polygamous_events << "\n";
}

struct SweepArgs {
    std::string events, flows, flow_format, features = "all-params", out;
    std::string grid = "0..5x0..5";
    std::string weights = "1,2";
    bool include_unbounded = false;
    std::string format = "json";
};

void run_sweep(const SweepArgs& args) {
    LoadedDataset data = load_dataset(args.events, args.flows, args.flow_format);
    Variant variant = variant_from_flag(args.features);

    SweepConfig config;
    std::tie(config.earliness_values_ms, config.lateness_values_ms) =
        parse_grid(args.grid);
    std::tie(config.weight_err1, config.weight_err2) = parse_weights(args.weights);
    config.include_unbounded = args.include_unbounded;
    if (args.format != "json" && args.format != "csv")
        throw InputError("--format must be json or csv");

    SweepReport report = sweep_windows(data.events, data.flows, variant, config);

    fs::path out = prepare_out_dir(args.out);
    write_text(out / "sweep.json", sweep_report_json(report));
    if (args.format == "csv") write_text(out / "sweep.csv", sweep_report_csv(report));
    std::cout << "chosen window: " << window_label(report.chosen) << "\n";
}

struct EvaluateArgs {
    std::string events, flows, flow_format, out;
    std::string ground_truth, predicted, features;
    double earliness = 0.0, lateness = 0.0;
    std::string window_mode;
    double gt_earliness = 0.0, gt_lateness = 0.0;
    double max_earliness = 5.0, max_lateness = 5.0;
    int64_t universe = -1;
};

void run_evaluate(const EvaluateArgs& args) {
    bool have_dataset = !args.events.empty() && !args.flows.empty();
    if (!have_dataset) {
        if (args.ground_truth.empty() || args.predicted.empty() || args.universe < 0)
            throw InputError(
                "without --events/--flows, evaluate needs --ground-truth, "
                "--predicted, and --universe");
    }

    LoadedDataset data;
    if (have_dataset) data = load_dataset(args.events, args.flows, args.flow_format);

    RelationSet truth;
    if (!args.ground_truth.empty()) {
        auto in = open_input(args.ground_truth);
        truth = parse_relations_jsonl(in);
    } else {
        TimeWindow w{seconds_to_ms(args.gt_earliness), seconds_to_ms(args.gt_lateness)};
        if (!w.valid()) throw InputError("ground-truth window must be non-negative");
        truth = establish_ground_truth(data.events, data.flows, w);
    }

    RelationSet predicted;
    if (!args.predicted.empty()) {
        auto in = open_input(args.predicted);
        predicted = parse_relations_jsonl(in);
    } else if (!args.features.empty()) {
        if (!have_dataset)
            throw InputError("--features needs --events and --flows");
        CorrelationWindow window =
            window_from_flags(args.window_mode, args.earliness, args.lateness);
        predicted = correlate(data.events, data.flows,
                              variant_from_flag(args.features), window);
    } else {
        throw InputError("evaluate needs --predicted or --features");
    }

    uint64_t universe;
    if (args.universe >= 0) {
        universe = static_cast<uint64_t>(args.universe);
    } else {
        TimeWindow max_window{seconds_to_ms(args.max_earliness),
                              seconds_to_ms(args.max_lateness)};
        if (!max_window.valid())
            throw InputError("--max-earliness/--max-lateness must be non-negative");
        universe = candidate_universe(data.events, data.flows, max_window);
    }

    MetricsReport metrics = evaluate_variant(truth, predicted, universe);
    fs::path out = prepare_out_dir(args.out);
    write_text(out / "metrics.json", metrics_report_json(metrics));
    std::cout << "accuracy=" << format_metric(metrics.accuracy)
              << " precision=" << format_metric(metrics.precision)
              << " recall=" << format_metric(metrics.recall)
              << " f1=" << format_metric(metrics.f1) << "\n";
}

struct SynthArgs {
    std::string config, out, flow_format = "csv";
    int64_t seed = -1;
};

void run_synth(const SynthArgs& args) {
    SynthConfig config;
    if (!args.config.empty()) {
        auto in = open_input(args.config);
        std::stringstream buffer;
        buffer << in.rdbuf();
        config = parse_synth_config_json(buffer.str());
    } else {
        config = default_synth_config();
    }
    if (args.seed >= 0) config.seed = static_cast<uint64_t>(args.seed);
    auto format = parse_flow_format(args.flow_format);
    if (!format) throw InputError("--flow-format must be csv or jsonl");

    SynthDataset dataset = generate(config);

    fs::path out = prepare_out_dir(args.out);
    {
        std::ofstream stream(out / "events.log");
        if (!stream) throw InputError("cannot write " + (out / "events.log").string());
        write_event_log(stream, dataset.events);
    }
    {
        fs::path path =
            out / (*format == FlowFormat::Csv ? "flows.csv" : "flows.jsonl");
        std::ofstream stream(path);
        if (!stream) throw InputError("cannot write " + path.string());
        write_flow_records(stream, dataset.flows, *format);
    }
    write_text(out / "labels.json", labels_json(dataset.labels));
    write_text(out / "config.json", synth_config_json(config));
    std::cout << "events=" << dataset.events.size()
              << " flows=" << dataset.flows.size()
              << " intended_pairs=" << dataset.labels.intended_pairs.size() << "\n";
}

struct AssembleArgs {
    std::string packets, packet_format, out, flow_format = "csv";
    double active_timeout = 300.0, inactive_timeout = 30.0;
    bool syn_split = true;
};

void run_assemble(const AssembleArgs& args) {
    auto in = open_input(args.packets);
    PacketParseResult parsed =
        parse_packet_summaries(in, pick_format(args.packet_format, args.packets));

    AssemblyConfig config;
    config.active_timeout_ms = seconds_to_ms(args.active_timeout);
    config.inactive_timeout_ms = seconds_to_ms(args.inactive_timeout);
    config.syn_split = args.syn_split;
    std::vector<FlowRecord> flows = assemble_flows(parsed.packets, config);

    auto format = parse_flow_format(args.flow_format);
    if (!format) throw InputError("--flow-format must be csv or jsonl");
    fs::path out = prepare_out_dir(args.out);
    {
        fs::path path =
            out / (*format == FlowFormat::Csv ? "flows.csv" : "flows.jsonl");
        std::ofstream stream(path);
        if (!stream) throw InputError("cannot write " + path.string());
        write_flow_records(stream, flows, *format);
    }
    {
        nlohmann::json j;
        j["packet_parse_errors"] = parse_errors_json(parsed.errors);
        write_text(out / "errors.json", j.dump(2) + "\n");
    }
    std::cout << "flows=" << flows.size() << " parse_errors=" << parsed.errors.size()
              << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"event-flow correlation toolkit for web-server logs and "
                 "encrypted-traffic flow records"};
    app.require_subcommand(1);

    NormalizeArgs normalize_args;
    auto* cmd_normalize = app.add_subcommand(
        "normalize", "Parse, canonicalize, and filter a dataset");
    cmd_normalize->add_option("--events", normalize_args.events, "W3C event log")
        ->required()
        ->check(CLI::ExistingFile);
    cmd_normalize->add_option("--flows", normalize_args.flows, "flow record file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd_normalize->add_option("--flow-format", normalize_args.flow_format,
                              "csv or jsonl (default: by file extension)");
    cmd_normalize->add_option("--features", normalize_args.features,
                              "variant whose features the filter requires");
    cmd_normalize->add_option("--out", normalize_args.out, "output directory")
        ->required();
    cmd_normalize->callback([&] { run_normalize(normalize_args); });

    CorrelateArgs correlate_args;
    auto* cmd_correlate = app.add_subcommand(
        "correlate", "Relate events to flows and classify the result");
    cmd_correlate->add_option("--events", correlate_args.events, "W3C event log")
        ->required()
        ->check(CLI::ExistingFile);
    cmd_correlate->add_option("--flows", correlate_args.flows, "flow record file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd_correlate->add_option("--flow-format", correlate_args.flow_format,
                              "csv or jsonl (default: by file extension)");
    cmd_correlate->add_option("--features", correlate_args.features,
                              "all-params, no-sni, no-port, or no-port-sni");
    cmd_correlate->add_option("--earliness", correlate_args.earliness,
                              "seconds an event may precede the flow start");
    cmd_correlate->add_option("--lateness", correlate_args.lateness,
                              "seconds an event may follow the flow end");
    cmd_correlate->add_option("--window", correlate_args.window_mode,
                              "\"unbounded\" disables the time check");
    cmd_correlate->add_option("--out", correlate_args.out, "output directory")
        ->required();
    cmd_correlate->callback([&] { run_correlate(correlate_args); });

    SweepArgs sweep_args;
    auto* cmd_sweep = app.add_subcommand(
        "sweep", "Grid-search time-windows and pick the best by weighted error");
    cmd_sweep->add_option("--events", sweep_args.events, "W3C event log")
        ->required()
        ->check(CLI::ExistingFile);
    cmd_sweep->add_option("--flows", sweep_args.flows, "flow record file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd_sweep->add_option("--flow-format", sweep_args.flow_format,
                          "csv or jsonl (default: by file extension)");
    cmd_sweep->add_option("--features", sweep_args.features,
                          "variant to sweep (default all-params)");
    cmd_sweep->add_option("--grid", sweep_args.grid,
                          "earliness x lateness values in seconds, e.g. 0..5x0..5 "
                          "or 0,0.5,1x0,1");
    cmd_sweep->add_option("--weights", sweep_args.weights,
                          "weighted-error weights W1,W2 for single and polygamous "
                          "counts");
    cmd_sweep->add_flag("--include-unbounded", sweep_args.include_unbounded,
                        "add an unbounded reference row (excluded from the choice)");
    cmd_sweep->add_option("--format", sweep_args.format,
                          "json (default) or csv (adds sweep.csv)");
    cmd_sweep->add_option("--out", sweep_args.out, "output directory")->required();
    cmd_sweep->callback([&] { run_sweep(sweep_args); });

    EvaluateArgs evaluate_args;
    auto* cmd_evaluate = app.add_subcommand(
        "evaluate", "Score a predicted relation set against ground truth");
    cmd_evaluate->add_option("--events", evaluate_args.events, "W3C event log")
        ->check(CLI::ExistingFile);
    cmd_evaluate->add_option("--flows", evaluate_args.flows, "flow record file")
        ->check(CLI::ExistingFile);
    cmd_evaluate->add_option("--flow-format", evaluate_args.flow_format,
                             "csv or jsonl (default: by file extension)");
    cmd_evaluate->add_option("--ground-truth", evaluate_args.ground_truth,
                             "relations JSONL; default: all-params at the "
                             "--gt-earliness/--gt-lateness window")
        ->check(CLI::ExistingFile);
    cmd_evaluate->add_option("--predicted", evaluate_args.predicted,
                             "relations JSONL to score")
        ->check(CLI::ExistingFile);
    cmd_evaluate->add_option("--features", evaluate_args.features,
                             "compute the prediction from the dataset instead");
    cmd_evaluate->add_option("--earliness", evaluate_args.earliness,
                             "prediction window earliness, seconds");
    cmd_evaluate->add_option("--lateness", evaluate_args.lateness,
                             "prediction window lateness, seconds");
    cmd_evaluate->add_option("--window", evaluate_args.window_mode,
                             "\"unbounded\" disables the prediction time check");
    cmd_evaluate->add_option("--gt-earliness", evaluate_args.gt_earliness,
                             "ground-truth window earliness, seconds");
    cmd_evaluate->add_option("--gt-lateness", evaluate_args.gt_lateness,
                             "ground-truth window lateness, seconds");
    cmd_evaluate->add_option("--max-earliness", evaluate_args.max_earliness,
                             "candidate-universe window earliness, seconds");
    cmd_evaluate->add_option("--max-lateness", evaluate_args.max_lateness,
                             "candidate-universe window lateness, seconds");
    cmd_evaluate->add_option("--universe", evaluate_args.universe,
                             "candidate-universe size override");
    cmd_evaluate->add_option("--out", evaluate_args.out, "output directory")
        ->required();
    cmd_evaluate->callback([&] { run_evaluate(evaluate_args); });

    SynthArgs synth_args;
    auto* cmd_synth = app.add_subcommand(
        "synth", "Generate a labeled synthetic event/flow dataset");
    cmd_synth->add_option("--config", synth_args.config, "config JSON file")
        ->check(CLI::ExistingFile);
    cmd_synth->add_option("--seed", synth_args.seed, "seed override");
    cmd_synth->add_option("--flow-format", synth_args.flow_format, "csv or jsonl");
    cmd_synth->add_option("--out", synth_args.out, "output directory")->required();
    cmd_synth->callback([&] { run_synth(synth_args); });

    AssembleArgs assemble_args;
    auto* cmd_assemble = app.add_subcommand(
        "assemble", "Build flow records from packet summaries");
    cmd_assemble->add_option("--packets", assemble_args.packets,
                             "packet summary file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd_assemble->add_option("--packet-format", assemble_args.packet_format,
                             "csv or jsonl (default: by file extension)");
    cmd_assemble->add_option("--active-timeout", assemble_args.active_timeout,
                             "maximum record duration, seconds");
    cmd_assemble->add_option("--inactive-timeout", assemble_args.inactive_timeout,
                             "maximum idle gap, seconds");
    cmd_assemble->add_flag("--syn-split,!--no-syn-split", assemble_args.syn_split,
                           "split records on a repeated same-direction SYN");
    cmd_assemble->add_option("--flow-format", assemble_args.flow_format,
                             "output format, csv or jsonl");
    cmd_assemble->add_option("--out", assemble_args.out, "output directory")
        ->required();
    cmd_assemble->callback([&] { run_assemble(assemble_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const ConsistencyError& e) {
        std::cerr << "inconsistency: " << e.what() << "\n";
        return 2;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
