// cli_test.cpp
//
// End-to-end tests of the evflow command-line tool. Each test drives the
// real binary (path injected as EVFLOW_BIN) through std::system against
// scratch directories, then inspects exit codes, stdout, and output files.

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <utility>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

// Runs the CLI with `args`, redirecting stdout/stderr into files under
// `dir`. Returns the exit code (-1 if the process did not exit normally).
int run_cli(const std::string& args, const fs::path& dir) {
    fs::create_directories(dir);
    std::string command = "\"" EVFLOW_BIN "\" " + args + " > " +
                          (dir / "stdout.txt").string() + " 2> " +
                          (dir / "stderr.txt").string();
    int status = std::system(command.c_str());
    if (status == -1) return -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::path("cli_scratch") / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "cannot open ", path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void spit(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << text;
}

size_t line_count(const std::string& text) {
    size_t n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

// A generator config with no noise at all: constant zero lag, no drops, no
// duplicates, millisecond event timestamps. Every event matches exactly its
// own flow at the (0, 0) window.
std::string zero_noise_config(int sessions, int seed) {
    std::ostringstream out;
    out << "{\n"
        << "  \"session_count\": " << sessions << ",\n"
        << "  \"server_pool\": [\n"
        << "    {\"ip\": \"192.0.2.10\", \"port\": 443,\n"
        << "     \"hostnames\": [\"www.example.org\", \"api.example.org\"]},\n"
        << "    {\"ip\": \"198.51.100.20\", \"port\": 443,\n"
        << "     \"hostnames\": [\"cdn.example.net\"]}\n"
        << "  ],\n"
        << "  \"client_pool_size\": 30,\n"
        << "  \"event_lag_ms\": {\"kind\": \"constant\", \"value\": 0},\n"
        << "  \"event_drop_rate\": 0,\n"
        << "  \"flow_drop_rate\": 0,\n"
        << "  \"crawler_duplicate_rate\": 0,\n"
        << "  \"quantize_event_seconds\": false,\n"
        << "  \"seed\": " << seed << "\n"
        << "}\n";
    return out.str();
}

std::set<std::pair<std::string, std::string>> pairs_from_jsonl(
    const std::string& text) {
    std::set<std::pair<std::string, std::string>> pairs;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto j = nlohmann::json::parse(line);
        pairs.emplace(j.at("event_id").get<std::string>(),
                      j.at("flow_id").get<std::string>());
    }
    return pairs;
}

// The repeated-SYN trace: one 5-tuple reused for two back-to-back
// connections, distinguishable only by the second client SYN.
const char* kSynReuseTrace =
    "TIMESTAMP_MS,SRC_IP,DST_IP,SRC_PORT,DST_PORT,TCP_FLAGS,PAYLOAD_BYTES,SNI\n"
    "1000,10.0.0.1,192.0.2.10,50000,443,SYN,0,\n"
    "1001,192.0.2.10,10.0.0.1,443,50000,SYN|ACK,0,\n"
    "1002,10.0.0.1,192.0.2.10,50000,443,ACK,0,\n"
    "1003,10.0.0.1,192.0.2.10,50000,443,ACK,200,a.example\n"
    "5000,10.0.0.1,192.0.2.10,50000,443,SYN,0,\n"
    "5001,192.0.2.10,10.0.0.1,443,50000,SYN|ACK,0,\n"
    "5002,10.0.0.1,192.0.2.10,50000,443,ACK,300,b.example\n";

}  // namespace

TEST_CASE("cli: synth writes a complete dataset and reruns byte-identically") {
    fs::path dir = fresh_dir("synth_default");

    REQUIRE(run_cli("synth --out " + (dir / "a").string(), dir) == 0);
    std::string stdout_text = slurp(dir / "stdout.txt");
    CHECK(contains(stdout_text, "events="));
    CHECK(contains(stdout_text, "flows="));
    CHECK(contains(stdout_text, "intended_pairs=1000"));
    for (const char* name : {"events.log", "flows.csv", "labels.json", "config.json"})
        CHECK_MESSAGE(fs::exists(dir / "a" / name), name);

    REQUIRE(run_cli("synth --out " + (dir / "b").string(), dir) == 0);
    for (const char* name : {"events.log", "flows.csv", "labels.json", "config.json"})
        CHECK_MESSAGE(slurp(dir / "a" / name) == slurp(dir / "b" / name), name);

    REQUIRE(run_cli("synth --seed 2 --out " + (dir / "c").string(), dir) == 0);
    CHECK(slurp(dir / "a" / "events.log") != slurp(dir / "c" / "events.log"));

    REQUIRE(run_cli("synth --flow-format jsonl --out " + (dir / "d").string(), dir) ==
            0);
    CHECK(fs::exists(dir / "d" / "flows.jsonl"));
}

TEST_CASE("cli: zero-noise pipeline from synth through evaluate") {
    fs::path dir = fresh_dir("pipeline");
    spit(dir / "config.json", zero_noise_config(200, 5));
    std::string events = (dir / "ds" / "events.log").string();
    std::string flows = (dir / "ds" / "flows.csv").string();
    std::string dataset_flags = " --events " + events + " --flows " + flows;

    REQUIRE(run_cli("synth --config " + (dir / "config.json").string() + " --out " +
                        (dir / "ds").string(),
                    dir) == 0);
    CHECK(slurp(dir / "stdout.txt") == "events=200 flows=200 intended_pairs=200\n");

    SUBCASE("normalize keeps everything and reports clean inputs") {
        REQUIRE(run_cli("normalize" + dataset_flags + " --out " +
                            (dir / "norm").string(),
                        dir) == 0);
        CHECK(slurp(dir / "stdout.txt") ==
              "kept 200 events, 200 flows; rejected 0; parse errors 0\n");
        auto errors = nlohmann::json::parse(slurp(dir / "norm" / "errors.json"));
        CHECK(errors.at("event_parse_errors").empty());
        CHECK(errors.at("flow_parse_errors").empty());
        CHECK(errors.at("rejections").empty());
        CHECK(fs::exists(dir / "norm" / "events.log"));
        CHECK(fs::exists(dir / "norm" / "flows.csv"));
    }

    SUBCASE("correlate recovers the intended pairs and reruns identically") {
        std::string correlate_args = "correlate" + dataset_flags +
                                     " --features all-params --earliness 0"
                                     " --lateness 0 --out ";
        REQUIRE(run_cli(correlate_args + (dir / "corr").string(), dir) == 0);
        std::string stdout_text = slurp(dir / "stdout.txt");
        CHECK(contains(stdout_text, "relations=200"));
        CHECK(contains(stdout_text, "single_events=0"));
        CHECK(contains(stdout_text, "single_flows=0"));
        CHECK(contains(stdout_text, "polygamous_events=0"));

        std::string relations = slurp(dir / "corr" / "relations.jsonl");
        CHECK(line_count(relations) == 200);
        auto labels = nlohmann::json::parse(slurp(dir / "ds" / "labels.json"));
        std::set<std::pair<std::string, std::string>> intended;
        for (const auto& pair : labels.at("intended_pairs"))
            intended.emplace(pair.at("event_id").get<std::string>(),
                             pair.at("flow_id").get<std::string>());
        CHECK(pairs_from_jsonl(relations) == intended);

        auto summary = nlohmann::json::parse(slurp(dir / "corr" / "summary.json"));
        CHECK(summary.at("correlated_events") == 200);
        CHECK(summary.at("correlated_flows") == 200);
        CHECK(summary.at("polygamous_events") == 0);

        REQUIRE(run_cli(correlate_args + (dir / "corr2").string(), dir) == 0);
        CHECK(slurp(dir / "corr2" / "relations.jsonl") == relations);

        SUBCASE("evaluate scores identical relation files as perfect") {
            std::string rel = (dir / "corr" / "relations.jsonl").string();
            REQUIRE(run_cli("evaluate --ground-truth " + rel + " --predicted " + rel +
                                " --universe 200 --out " + (dir / "ev").string(),
                            dir) == 0);
            CHECK(slurp(dir / "stdout.txt") ==
                  "accuracy=1.0000 precision=1.0000 recall=1.0000 f1=1.0000\n");
            std::string metrics = slurp(dir / "ev" / "metrics.json");
            CHECK(contains(metrics, "\"tp\": 200"));
            CHECK(contains(metrics, "\"fp\": 0"));
            CHECK(contains(metrics, "\"fn\": 0"));
            CHECK(contains(metrics, "\"tn\": 0"));
        }
    }

    SUBCASE("sweep settles on the tightest clean window") {
        REQUIRE(run_cli("sweep" + dataset_flags +
                            " --grid 0..2x0..1 --weights 1,2 --format csv --out " +
                            (dir / "sw").string(),
                        dir) == 0);
        CHECK(slurp(dir / "stdout.txt") == "chosen window: (0, 0)\n");
        auto report = nlohmann::json::parse(slurp(dir / "sw" / "sweep.json"));
        CHECK(report.at("rows").size() == 6);
        CHECK(report.at("chosen").at("label") == "(0, 0)");
        std::string csv = slurp(dir / "sw" / "sweep.csv");
        CHECK(contains(csv,
                       "Time-Window Size,Single Flows,Correlated Flows,"
                       "Single Events,Correlated Events,Polygamous Events,"
                       "Weighted Error"));
        CHECK(contains(csv, "\"(0, 0)\",0,200,0,200,0,0"));
    }

    SUBCASE("evaluate computes a reduced variant against derived ground truth") {
        REQUIRE(run_cli("evaluate" + dataset_flags +
                            " --features no-port --earliness 0 --lateness 0 --out " +
                            (dir / "ev2").string(),
                        dir) == 0);
        std::string stdout_text = slurp(dir / "stdout.txt");
        CHECK(contains(stdout_text, "recall=1.0000"));
        std::string metrics = slurp(dir / "ev2" / "metrics.json");
        CHECK(contains(metrics, "\"recall\": 1.0000"));
        CHECK(contains(metrics, "\"fn\": 0"));
    }
}

TEST_CASE("cli: assemble splits repeated-SYN traces and honors --no-syn-split") {
    fs::path dir = fresh_dir("assemble");
    spit(dir / "packets.csv", kSynReuseTrace);
    std::string packets = (dir / "packets.csv").string();

    REQUIRE(run_cli("assemble --packets " + packets + " --out " +
                        (dir / "split").string(),
                    dir) == 0);
    CHECK(slurp(dir / "stdout.txt") == "flows=2 parse_errors=0\n");
    CHECK(line_count(slurp(dir / "split" / "flows.csv")) == 3);  // header + 2
    auto errors = nlohmann::json::parse(slurp(dir / "split" / "errors.json"));
    CHECK(errors.at("packet_parse_errors").empty());

    REQUIRE(run_cli("assemble --no-syn-split --packets " + packets + " --out " +
                        (dir / "merged").string(),
                    dir) == 0);
    CHECK(slurp(dir / "stdout.txt") == "flows=1 parse_errors=0\n");
    CHECK(line_count(slurp(dir / "merged" / "flows.csv")) == 2);

    REQUIRE(run_cli("assemble --flow-format jsonl --packets " + packets + " --out " +
                        (dir / "jsonl").string(),
                    dir) == 0);
    CHECK(line_count(slurp(dir / "jsonl" / "flows.jsonl")) == 2);
}

TEST_CASE("cli: normalize reports parse errors and filter rejections") {
    fs::path dir = fresh_dir("normalize_errors");
    spit(dir / "config.json", zero_noise_config(50, 7));
    REQUIRE(run_cli("synth --config " + (dir / "config.json").string() + " --out " +
                        (dir / "ds").string(),
                    dir) == 0);

    SUBCASE("malformed lines are skipped and itemized") {
        spit(dir / "events.log",
             slurp(dir / "ds" / "events.log") + "one two\n");
        spit(dir / "flows.csv",
             slurp(dir / "ds" / "flows.csv") +
                 "0,1,999.0.0.1,192.0.2.10,50000,443,1,1,,fbad\n");
        REQUIRE(run_cli("normalize --events " + (dir / "events.log").string() +
                            " --flows " + (dir / "flows.csv").string() + " --out " +
                            (dir / "norm").string(),
                        dir) == 0);
        CHECK(slurp(dir / "stdout.txt") ==
              "kept 50 events, 50 flows; rejected 0; parse errors 2\n");
        auto errors = nlohmann::json::parse(slurp(dir / "norm" / "errors.json"));
        REQUIRE(errors.at("event_parse_errors").size() == 1);
        CHECK(errors.at("event_parse_errors")[0].at("reason") == "missing-field");
        REQUIRE(errors.at("flow_parse_errors").size() == 1);
        CHECK(errors.at("flow_parse_errors")[0].at("reason") == "bad-ip");
    }

    SUBCASE("feature filtering rejects records the variant cannot use") {
        // Blank every flow's SNI: all-params then rejects all flows,
        // no-sni keeps them.
        auto masked = nlohmann::json::parse(zero_noise_config(50, 7));
        masked["mask_sni"] = true;
        spit(dir / "masked.json", masked.dump());
        REQUIRE(run_cli("synth --config " + (dir / "masked.json").string() +
                            " --out " + (dir / "masked_ds").string(),
                        dir) == 0);
        std::string flags = " --events " + (dir / "masked_ds" / "events.log").string() +
                            " --flows " + (dir / "masked_ds" / "flows.csv").string();

        REQUIRE(run_cli("normalize" + flags + " --features all-params --out " +
                            (dir / "strict").string(),
                        dir) == 0);
        CHECK(slurp(dir / "stdout.txt") ==
              "kept 50 events, 0 flows; rejected 50; parse errors 0\n");
        auto errors = nlohmann::json::parse(slurp(dir / "strict" / "errors.json"));
        REQUIRE(errors.at("rejections").size() == 50);
        CHECK(errors.at("rejections")[0].at("kind") == "flow");
        CHECK(errors.at("rejections")[0].at("missing") == "sni");

        REQUIRE(run_cli("normalize" + flags + " --features no-sni --out " +
                            (dir / "loose").string(),
                        dir) == 0);
        CHECK(slurp(dir / "stdout.txt") ==
              "kept 50 events, 50 flows; rejected 0; parse errors 0\n");
    }
}

TEST_CASE("cli: exit codes distinguish usage, input, and consistency failures") {
    fs::path dir = fresh_dir("exit_codes");

    CHECK(run_cli("--help", dir) == 0);
    CHECK(run_cli("synth --help", dir) == 0);
    CHECK(run_cli("", dir) == 1);                   // subcommand required
    CHECK(run_cli("correlate --bogus", dir) == 1);  // unknown flag
    CHECK(run_cli("correlate --events missing.log --flows missing.csv --out " +
                      (dir / "x").string(),
                  dir) == 1);

    spit(dir / "bad_config.json", "{\"sessions\": 5}\n");
    CHECK(run_cli("synth --config " + (dir / "bad_config.json").string() + " --out " +
                      (dir / "x").string(),
                  dir) == 1);
    CHECK(contains(slurp(dir / "stderr.txt"), "error:"));

    spit(dir / "unsorted.csv",
         "TIMESTAMP_MS,SRC_IP,DST_IP,SRC_PORT,DST_PORT,TCP_FLAGS,PAYLOAD_BYTES,SNI\n"
         "2000,10.0.0.1,192.0.2.10,50000,443,SYN,0,\n"
         "1000,10.0.0.1,192.0.2.10,50000,443,ACK,10,\n");
    CHECK(run_cli("assemble --packets " + (dir / "unsorted.csv").string() + " --out " +
                      (dir / "x").string(),
                  dir) == 1);

    spit(dir / "relations.jsonl",
         "{\"event_id\":\"e1\",\"flow_id\":\"f1\"}\n"
         "{\"event_id\":\"e2\",\"flow_id\":\"f2\"}\n");
    std::string rel = (dir / "relations.jsonl").string();
    CHECK(run_cli("evaluate --ground-truth " + rel + " --predicted " + rel +
                      " --universe 1 --out " + (dir / "x").string(),
                  dir) == 2);
    CHECK(contains(slurp(dir / "stderr.txt"), "inconsistency:"));

    spit(dir / "garbage.jsonl", "not json\n");
    std::string garbage = (dir / "garbage.jsonl").string();
    CHECK(run_cli("evaluate --ground-truth " + garbage + " --predicted " + garbage +
                      " --universe 10 --out " + (dir / "x").string(),
                  dir) == 1);
}
