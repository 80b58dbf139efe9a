#include <doctest.h>

#include <sstream>

#include "evcorr/event_io.hpp"
#include "evcorr/replay.hpp"
#include "fixtures.hpp"

using namespace evcorr;
using evcorr::testing::at;

namespace {

std::string code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const EventIoError& e) {
        return e.code();
    }
    return "";
}

EventRead read_csv(const std::string& text) {
    std::istringstream in(text);
    return read_labeled_events(in, EventFormat::csv);
}

}  // namespace

TEST_CASE("running example stream fixture") {
    auto events = evcorr::testing::running_stream();
    REQUIRE(events.size() == 30);
    CHECK(events.front() == at("11:55:01", "A"));
    CHECK(events.back() == at("11:55:32", "M"));
}

TEST_CASE("CSV columns are found by header name") {
    auto r = read_csv("activity,resource,timestamp,lifecycle,case_id\n"
                      "B,\"Smith, J\",2020-01-01 10:00:05,start,c1\n"
                      "B,,2020-01-01T10:00:07Z,COMPLETE,c1\n");
    REQUIRE(r.events.size() == 2);
    CHECK(r.has_case_ids);
    CHECK(r.events[0].event.resource == std::optional<std::string>("Smith, J"));
    CHECK(r.events[0].event.lifecycle == Lifecycle::started);
    CHECK(r.events[1].event.lifecycle == Lifecycle::completed);
    CHECK_FALSE(r.events[1].event.resource.has_value());
    CHECK(r.events[1].case_id == "c1");
    CHECK(r.warnings.empty());
}

TEST_CASE("empty input and header-only input") {
    CHECK(read_csv("").events.empty());
    CHECK(read_csv("timestamp,activity\n").events.empty());
    std::istringstream in("");
    CHECK(read_labeled_events(in, EventFormat::jsonl).events.empty());
}

TEST_CASE("out-of-order rows are sorted stably with a warning") {
    auto r = read_csv("timestamp,activity\n2020-01-01 10:00:05,B\n2020-01-01 10:00:01,A\n2020-01-01 10:00:05,C\n");
    REQUIRE(r.events.size() == 3);
    CHECK(r.events[0].event.activity == "A");
    CHECK(r.events[1].event.activity == "B");
    CHECK(r.events[2].event.activity == "C");
    CHECK(r.warnings.size() == 1);
}

TEST_CASE("malformed input") {
    CHECK(code_of([] { read_csv("time,activity\n"); }) == "MISSING_COLUMN");
    CHECK(code_of([] { read_csv("timestamp,activity\n2020-01-01 10:00:00\n"); }) == "MALFORMED_ROW");
    CHECK(code_of([] { read_csv("timestamp,activity\nyesterday,A\n"); }) == "BAD_TIMESTAMP");
    CHECK(code_of([] { read_csv("timestamp,activity,lifecycle\n2020-01-01 10:00:00,A,paused\n"); }) == "BAD_LIFECYCLE");
    CHECK(code_of([] { read_csv("timestamp,activity\n\"2020-01-01 10:00:00,A\n"); }) == "MALFORMED_ROW");
    try {
        read_csv("timestamp,activity\n2020-01-01 10:00:00,A\n\n2020-13-01 10:00:00,A\n");
        FAIL("expected an error");
    } catch (const EventIoError& e) {
        CHECK(e.line() == 4);
    }
    std::istringstream bad_json("{\"timestamp\": \"2020-01-01 10:00:00\"}\n");
    CHECK(code_of([&] { read_labeled_events(bad_json, EventFormat::jsonl); }) == "MALFORMED_ROW");
    std::istringstream not_json("{oops\n");
    CHECK(code_of([&] { read_labeled_events(not_json, EventFormat::jsonl); }) == "MALFORMED_ROW");
    CHECK(code_of([] { read_labeled_events_file("/nonexistent/events.csv"); }) == "NOT_FOUND");
}

TEST_CASE("JSON lines") {
    std::istringstream in(R"({"timestamp": "2020-01-01 10:00:00", "activity": "A", "case_id": "7"}
{"timestamp": "2020-01-01 10:00:02", "activity": "B", "case_id": 7, "resource": "r1", "lifecycle": "completed"}
)");
    auto r = read_labeled_events(in, EventFormat::jsonl);
    REQUIRE(r.events.size() == 2);
    CHECK(r.has_case_ids);
    CHECK(r.events[1].case_id == "7");
    CHECK(r.events[1].event.resource == std::optional<std::string>("r1"));
    CHECK(format_for_path("x.jsonl") == EventFormat::jsonl);
    CHECK(format_for_path("x.CSV") == EventFormat::csv);
    CHECK(parse_event_format("JSONL") == EventFormat::jsonl);
    CHECK_FALSE(parse_event_format("xes").has_value());
}

TEST_CASE("strip and relabel") {
    SUBCASE("empty log") {
        auto s = strip_case_ids({});
        CHECK(s.events.empty());
        CHECK(s.truth.size() == 0);
    }
    SUBCASE("interleaved cases with colliding keys") {
        std::vector<LabeledEvent> log{{at("10:00:00", "A"), "x"}, {at("10:00:00", "A"), "y"},
                                      {at("10:00:01", "B"), "y"}, {at("10:00:01", "B"), "x"},
                                      {at("10:00:02", "C"), "z"}};
        auto s = strip_case_ids(log);
        CHECK(s.events.size() == 5);
        CHECK(s.truth.size() == 5);
        CHECK(s.truth.case_of({parse_timestamp("2019-06-16 10:00:00"), "A", 1}) == "y");
        CHECK(s.truth.relabel(s.events) == log);
        std::set<std::string> ids;
        for (const auto& [k, v] : s.truth.entries()) ids.insert(v);
        CHECK(ids.size() == 3);
        CHECK_THROWS_AS(s.truth.case_of({parse_timestamp("2019-06-16 10:00:09"), "A", 0}), std::out_of_range);
    }
}

TEST_CASE("correlated CSV output") {
    CorrelatedInstance a;
    a.timestamp = parse_timestamp("2019-06-16 11:55:13");
    a.activity = "E";
    a.case_id = CaseId{3};
    a.trust = 62.962962;
    CorrelatedInstance noise;
    noise.timestamp = a.timestamp;
    noise.activity = "Z,1";
    noise.resource = "bob";
    noise.lifecycle = Lifecycle::completed;
    std::ostringstream out;
    write_correlated_csv(out, {a, noise});
    CHECK(out.str() == "case_id,timestamp,activity,trust,lifecycle,resource\n"
                       "3,2019-06-16 11:55:13,E,62.96,,\n"
                       ",2019-06-16 11:55:13,\"Z,1\",,completed,bob\n");
}

TEST_CASE("labeled CSV round trip") {
    std::vector<LabeledEvent> log{{at("10:00:00", "A"), "1"}, {at("10:00:03", "B"), "1"}};
    log[1].event.lifecycle = Lifecycle::completed;
    log[1].event.resource = "r";
    std::ostringstream out;
    write_labeled_csv(out, log);
    auto back = read_csv(out.str());
    CHECK(back.events == log);
}

TEST_CASE("replay delivers every event in order") {
    auto events = evcorr::testing::running_stream();
    std::vector<UncorrelatedEvent> seen;
    VirtualClock clock;
    auto report = replay(events, kInfiniteSpeedup, [&](const UncorrelatedEvent& e) { seen.push_back(e); }, clock);
    CHECK(seen == events);
    CHECK(report.delivered == 30);
    CHECK(report.latencies.size() == 30);
    CHECK(clock.elapsed() == std::chrono::nanoseconds{0});
}

TEST_CASE("replay paces by timestamp deltas over the speedup") {
    std::vector<UncorrelatedEvent> events{at("10:00:00", "A"), at("10:00:10", "B")};
    VirtualClock clock;
    std::vector<std::chrono::nanoseconds> release;
    auto report = replay(events, 10.0, [&](const UncorrelatedEvent&) { release.push_back(clock.elapsed()); }, clock);
    CHECK(release == std::vector<std::chrono::nanoseconds>{std::chrono::seconds{0}, std::chrono::seconds{1}});
    CHECK(report.paced == std::chrono::seconds{1});

    // Content does not depend on the speed.
    auto stream = evcorr::testing::running_stream();
    for (double s : {0.5, 1.0, 60.0, kInfiniteSpeedup}) {
        std::vector<UncorrelatedEvent> seen;
        VirtualClock c;
        replay(stream, s, [&](const UncorrelatedEvent& e) { seen.push_back(e); }, c);
        CHECK(seen == stream);
    }
}

TEST_CASE("real clock replay sleeps roughly the scaled gap") {
    std::vector<UncorrelatedEvent> events{at("10:00:00", "A"), at("10:00:01", "B")};
    auto t0 = std::chrono::steady_clock::now();
    replay(events, 20.0, [](const UncorrelatedEvent&) {});
    auto took = std::chrono::steady_clock::now() - t0;
    CHECK(took >= std::chrono::milliseconds{45});
    CHECK(took < std::chrono::seconds{2});
}

TEST_CASE("replay errors") {
    std::vector<UncorrelatedEvent> events{at("10:00:00", "A"), at("10:00:01", "B"), at("10:00:02", "C")};
    VirtualClock clock;
    CHECK_THROWS_AS(replay(events, 0.0, [](const UncorrelatedEvent&) {}, clock), std::invalid_argument);
    CHECK_THROWS_AS(replay(events, -1.0, [](const UncorrelatedEvent&) {}, clock), std::invalid_argument);
    try {
        replay(events, kInfiniteSpeedup, [](const UncorrelatedEvent& e) {
            if (e.activity == "B") throw std::runtime_error("sink down");
        }, clock);
        FAIL("expected an error");
    } catch (const ReplayError& e) {
        CHECK(e.position() == 1);
    }
}
