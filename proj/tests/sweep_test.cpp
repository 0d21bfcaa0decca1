#include <doctest.h>

#include <json.hpp>
#include <random>

#include "evflow/sweep.hpp"
#include "testutil.hpp"

using namespace evflow;

namespace {

// One event per flow, the event lagging flow start by `lag_ms` (negative =
// earlier). Sessions are spaced far apart so only intended pairs can match.
void lagged_dataset(std::vector<NormalizedEvent>& events,
                    std::vector<NormalizedFlow>& flows, int n, int64_t lag_ms) {
    events.clear();
    flows.clear();
    for (int i = 0; i < n; ++i) {
        NormalizedFlow f;
        f.start_ms = 10'000'000 + static_cast<int64_t>(i) * 60'000;
        f.end_ms = f.start_ms + 1'000;
        f.server_ip = *Ipv4::parse("192.0.2.10");
        f.server_port = 443;
        f.client_ip = *Ipv4::parse("198.51.100.7");
        f.client_port = static_cast<uint16_t>(40'000 + i);
        f.sni = "www.example.org";
        f.id = "f" + std::to_string(i + 1);

        NormalizedEvent e;
        e.time_ms = f.start_ms + lag_ms;
        e.server_ip = f.server_ip;
        e.server_port = f.server_port;
        e.client_ip = f.client_ip;
        e.client_port = f.client_port;
        e.host = f.sni;
        e.id = "e" + std::to_string(i + 1);

        flows.push_back(std::move(f));
        events.push_back(std::move(e));
    }
}

}  // namespace

TEST_CASE("sweep: default grid is 36 windows, earliness outer") {
    auto config = SweepConfig::default_grid();
    std::vector<NormalizedEvent> events;
    std::vector<NormalizedFlow> flows;
    auto report = sweep_windows(events, flows, Variant::AllParams, config);
    REQUIRE(report.rows.size() == 36);
    CHECK(report.rows[0].window == TimeWindow{0, 0});
    CHECK(report.rows[1].window == TimeWindow{0, 1000});
    CHECK(report.rows[5].window == TimeWindow{0, 5000});
    CHECK(report.rows[6].window == TimeWindow{1000, 0});
    CHECK(report.rows[35].window == TimeWindow{5000, 5000});
    // Empty dataset: every error is zero; the tie-break picks the tightest.
    CHECK(report.chosen == TimeWindow{0, 0});
    CHECK_FALSE(report.unbounded.has_value());
}

TEST_CASE("sweep: recovers a constant 2-second event lead") {
    std::vector<NormalizedEvent> events;
    std::vector<NormalizedFlow> flows;
    lagged_dataset(events, flows, 20, -2000);

    auto report = sweep_windows(events, flows, Variant::AllParams,
                                SweepConfig::default_grid());
    CHECK(report.chosen == TimeWindow{2000, 0});

    for (const SweepRow& row : report.rows) {
        if (row.window.earliness_ms >= 2000) {
            CHECK(row.weighted_error == 0.0);
            CHECK(row.report.correlated_events == 20);
        } else {
            CHECK(row.report.single_events == 20);
            CHECK(row.report.single_flows == 20);
            CHECK(row.weighted_error == 40.0);
        }
    }
}

TEST_CASE("sweep: aligned data chooses the zero window") {
    std::vector<NormalizedEvent> events;
    std::vector<NormalizedFlow> flows;
    lagged_dataset(events, flows, 15, 0);
    auto report = sweep_windows(events, flows, Variant::AllParams,
                                SweepConfig::default_grid());
    CHECK(report.chosen == TimeWindow{0, 0});
    CHECK(report.rows[0].weighted_error == 0.0);
}

TEST_CASE("sweep: weighted error is recomputable from the counters") {
    std::mt19937_64 rng(4242);
    auto events = evtest::random_events(rng, 200);
    auto flows = evtest::random_flows(rng, 200);

    SweepConfig config = SweepConfig::default_grid();
    config.weight_err1 = 1.5;
    config.weight_err2 = 3.0;
    auto report = sweep_windows(events, flows, Variant::NoPortSni, config);
    REQUIRE(report.rows.size() == 36);
    for (const SweepRow& row : report.rows) {
        double expected =
            config.weight_err1 *
                static_cast<double>(row.report.single_events + row.report.single_flows) +
            config.weight_err2 * static_cast<double>(row.report.polygamous_events);
        CHECK(row.weighted_error == expected);
        CHECK(weighted_error(row.report, config.weight_err1, config.weight_err2) ==
              expected);
    }
}

TEST_CASE("sweep: with no polygamy penalty, wider windows never score worse") {
    std::mt19937_64 rng(31);
    auto events = evtest::random_events(rng, 250);
    auto flows = evtest::random_flows(rng, 250);

    SweepConfig config = SweepConfig::default_grid();
    config.weight_err2 = 0.0;
    auto report = sweep_windows(events, flows, Variant::NoPortSni, config);
    for (const SweepRow& a : report.rows) {
        for (const SweepRow& b : report.rows) {
            if (a.window.earliness_ms <= b.window.earliness_ms &&
                a.window.lateness_ms <= b.window.lateness_ms) {
                CHECK(a.weighted_error >= b.weighted_error);
            }
        }
    }
}

TEST_CASE("sweep: ties prefer the smallest sum, then the smallest earliness") {
    // Dataset that no window can match: every row has the same error, so the
    // chosen window is decided purely by the tie-break.
    std::vector<NormalizedEvent> events;
    std::vector<NormalizedFlow> flows;
    lagged_dataset(events, flows, 5, -30'000);

    SweepConfig config;
    config.earliness_values_ms = {2000, 1000, 0};
    config.lateness_values_ms = {3000, 0};
    auto report = sweep_windows(events, flows, Variant::AllParams, config);
    CHECK(report.chosen == TimeWindow{0, 0});

    // A genuine tie between (1000, 0) and (0, 1000): one event flanked by an
    // early-activating and a late-activating flow. Opening one bound matches
    // exactly one flow (error 1); opening both makes the event polygamous
    // (error 2); opening neither leaves three singles (error 3). Equal sums,
    // so the smaller earliness wins.
    std::vector<NormalizedEvent> tie_events;
    std::vector<NormalizedFlow> tie_flows;
    lagged_dataset(tie_events, tie_flows, 1, 0);
    tie_events[0].time_ms = 10'000;
    tie_flows[0].start_ms = 11'000;
    tie_flows[0].end_ms = 11'100;
    NormalizedFlow late = tie_flows[0];
    late.id = "f2";
    late.start_ms = 8'900;
    late.end_ms = 9'000;
    tie_flows.push_back(late);

    SweepConfig pair_config;
    pair_config.earliness_values_ms = {0, 1000};
    pair_config.lateness_values_ms = {0, 1000};
    auto tie = sweep_windows(tie_events, tie_flows, Variant::AllParams, pair_config);
    REQUIRE(tie.rows.size() == 4);
    CHECK(tie.rows[0].weighted_error == 3.0);  // (0, 0)
    CHECK(tie.rows[1].weighted_error == 1.0);  // (0, 1000)
    CHECK(tie.rows[2].weighted_error == 1.0);  // (1000, 0)
    CHECK(tie.rows[3].weighted_error == 2.0);  // (1000, 1000)
    CHECK(tie.chosen == TimeWindow{0, 1000});
}

TEST_CASE("sweep: reruns are byte-identical") {
    std::mt19937_64 rng(17);
    auto events = evtest::random_events(rng, 150);
    auto flows = evtest::random_flows(rng, 150);
    SweepConfig config = SweepConfig::default_grid();
    config.include_unbounded = true;

    auto a = sweep_windows(events, flows, Variant::NoPort, config);
    auto b = sweep_windows(events, flows, Variant::NoPort, config);
    CHECK(sweep_report_json(a) == sweep_report_json(b));
    CHECK(sweep_report_csv(a) == sweep_report_csv(b));
}

TEST_CASE("sweep: the unbounded reference row never wins the argmin") {
    std::vector<NormalizedEvent> events;
    std::vector<NormalizedFlow> flows;
    // Lag far beyond the widest grid window: every grid row fails, the
    // unbounded row matches everything.
    lagged_dataset(events, flows, 10, -30'000);

    SweepConfig config = SweepConfig::default_grid();
    config.include_unbounded = true;
    auto report = sweep_windows(events, flows, Variant::AllParams, config);

    REQUIRE(report.unbounded.has_value());
    CHECK(report.unbounded->weighted_error == 0.0);
    CHECK(report.unbounded->report.correlated_events == 10);
    // All grid rows scored 20; the chosen window still comes from the grid.
    CHECK(report.chosen == TimeWindow{0, 0});

    std::string csv = sweep_report_csv(report);
    CHECK(csv.find("(NA, NA)") != std::string::npos);
}

TEST_CASE("sweep: config validation") {
    std::vector<NormalizedEvent> events;
    std::vector<NormalizedFlow> flows;

    SweepConfig empty_axis;
    empty_axis.earliness_values_ms = {};
    empty_axis.lateness_values_ms = {0};
    CHECK_THROWS_AS(sweep_windows(events, flows, Variant::AllParams, empty_axis),
                    InputError);

    SweepConfig dup;
    dup.earliness_values_ms = {0, 1000, 1000};
    dup.lateness_values_ms = {0};
    CHECK_THROWS_AS(sweep_windows(events, flows, Variant::AllParams, dup), InputError);

    SweepConfig negative;
    negative.earliness_values_ms = {0, -1000};
    negative.lateness_values_ms = {0};
    CHECK_THROWS_AS(sweep_windows(events, flows, Variant::AllParams, negative),
                    InputError);

    SweepConfig bad_weight = SweepConfig::default_grid();
    bad_weight.weight_err1 = -1.0;
    CHECK_THROWS_AS(sweep_windows(events, flows, Variant::AllParams, bad_weight),
                    InputError);
}

TEST_CASE("window labels render seconds with trimmed fractions") {
    CHECK(window_label(TimeWindow{3000, 0}) == "(3, 0)");
    CHECK(window_label(TimeWindow{0, 0}) == "(0, 0)");
    CHECK(window_label(TimeWindow{2500, 0}) == "(2.5, 0)");
    CHECK(window_label(TimeWindow{1500, 2750}) == "(1.5, 2.75)");
    CHECK(window_label(TimeWindow{5000, 5000}) == "(5, 5)");
}

TEST_CASE("sweep csv: header and row shape") {
    std::vector<NormalizedEvent> events;
    std::vector<NormalizedFlow> flows;
    lagged_dataset(events, flows, 3, 0);
    SweepConfig config;
    config.earliness_values_ms = {0};
    config.lateness_values_ms = {0};
    auto report = sweep_windows(events, flows, Variant::AllParams, config);
    std::string csv = sweep_report_csv(report);

    CHECK(csv.rfind("Time-Window Size,Single Flows,Correlated Flows,Single Events,"
                    "Correlated Events,Polygamous Events,Weighted Error\n",
                    0) == 0);
    CHECK(csv.find("\"(0, 0)\",0,3,0,3,0,0") != std::string::npos);
}

TEST_CASE("sweep json: rows, chosen window, and unbounded row") {
    std::vector<NormalizedEvent> events;
    std::vector<NormalizedFlow> flows;
    lagged_dataset(events, flows, 4, -2000);
    SweepConfig config = SweepConfig::default_grid();
    config.include_unbounded = true;

    auto report = sweep_windows(events, flows, Variant::AllParams, config);
    auto j = nlohmann::json::parse(sweep_report_json(report));

    REQUIRE(j.at("rows").size() == 36);
    CHECK(j.at("rows")[0].at("earliness_ms") == 0);
    CHECK(j.at("rows")[0].at("lateness_ms") == 0);
    CHECK(j.at("rows")[0].at("label") == "(0, 0)");
    CHECK(j.at("rows")[0].at("counters").at("single_events") == 4);
    CHECK(j.at("chosen").at("earliness_ms") == 2000);
    CHECK(j.at("chosen").at("lateness_ms") == 0);
    CHECK(j.at("chosen").at("label") == "(2, 0)");
    REQUIRE(j.contains("unbounded"));
    CHECK(j.at("unbounded").at("label") == "(NA, NA)");
    CHECK(j.at("unbounded").at("counters").at("correlated_events") == 4);
}
