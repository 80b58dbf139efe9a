#include <doctest.h>

#include "evcorr/heuristics.hpp"
#include "fixtures.hpp"

using namespace evcorr;

namespace {

std::string code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const HeuristicsError& e) {
        return e.code();
    }
    return "";
}

}  // namespace

TEST_CASE("average row of the running example") {
    auto h = evcorr::testing::running_heuristics();
    // ceil((min + max) / 2), worked by hand from the min/max rows
    const std::map<std::string, long> avg{{"A", 1}, {"B", 3}, {"C", 2}, {"D", 1}, {"E", 4}, {"F", 2}, {"G", 2},
                                          {"H", 3}, {"I", 4}, {"J", 4}, {"L", 7}, {"M", 5}, {"N", 1}};
    CHECK(h.entries().size() == 13);
    for (const auto& [a, v] : avg) CHECK_MESSAGE(h.avg_of(a).count() == v, a);
}

TEST_CASE("range excludes the average") {
    auto h = evcorr::testing::running_heuristics();
    std::vector<Duration> e{Duration{1}, Duration{2}, Duration{3}, Duration{5}, Duration{6}, Duration{7}};
    CHECK(h.range_of("E") == e);
    CHECK(h.range_size("E") == 6);
    CHECK(h.range_of("A").empty());
    CHECK(h.range_size("A") == 0);
    CHECK(h.range_of("J") == std::vector<Duration>{Duration{3}});

    for (const auto& [a, b] : h.entries()) {
        auto avg = h.avg_of(a);
        CHECK(h.min_of(a) <= avg);
        CHECK(avg <= h.max_of(a));
        auto r = h.range_of(a);
        CHECK(r.size() == h.range_size(a));
        CHECK(r.size() == static_cast<std::size_t>(b.max - b.min));
        r.push_back(avg);
        std::sort(r.begin(), r.end());
        for (std::size_t i = 0; i < r.size(); ++i) CHECK(r[i] == h.min_of(a) + Duration{static_cast<long>(i)});
    }
}

TEST_CASE("bounds are inclusive") {
    auto h = evcorr::testing::running_heuristics();
    CHECK(h.within("B", Duration{1}));
    CHECK(h.within("B", Duration{4}));
    CHECK_FALSE(h.within("B", Duration{5}));
    CHECK_FALSE(h.within("B", Duration{0}));
}

TEST_CASE("units scale every derived value") {
    HeuristicTable h(Duration{60});
    h.set("X", 2, 5);
    CHECK(h.min_of("X") == Duration{120});
    CHECK(h.max_of("X") == Duration{300});
    CHECK(h.avg_of("X") == Duration{240});
    CHECK(h.range_size("X") == 3);
    CHECK(h.within("X", Duration{241}));
}

TEST_CASE("table errors") {
    HeuristicTable h;
    CHECK(code_of([&] { h.set("X", 0, 3); }) == "NON_POSITIVE");
    CHECK(code_of([&] { h.set("X", 4, 3); }) == "MIN_GT_MAX");
    CHECK(code_of([&] { h.bounds("nope"); }) == "UNKNOWN_ACTIVITY");
    CHECK(code_of([] { HeuristicTable bad(Duration{0}); }) == "BAD_UNIT");
}

TEST_CASE("CSV loading") {
    CHECK(load_heuristics("").entries().empty());
    auto h = load_heuristics("X,1,2\n# comment\n\nY , 3 , 3\n");
    CHECK(h.bounds("X") == HeuristicBounds{1, 2});
    CHECK(h.bounds("Y") == HeuristicBounds{3, 3});
    CHECK(load_heuristics(save_heuristics(h)) == h);

    CHECK(code_of([] { load_heuristics("X,1\n"); }) == "MALFORMED_ROW");
    CHECK(code_of([] { load_heuristics("X,one,2\n"); }) == "MALFORMED_ROW");
    CHECK(code_of([] { load_heuristics("X,1,2\nX,1,3\n"); }) == "DUPLICATE");
    try {
        load_heuristics("activity,min,max\nX,1,2\nY,5,2\n");
        FAIL("expected an error");
    } catch (const HeuristicsError& e) {
        CHECK(e.code() == "MIN_GT_MAX");
        CHECK(e.line() == 3);
    }
}

namespace {

std::vector<LabeledEvent> case_two_log() {
    // Case 2 of the running example in its correlated form.
    const char* rows[] = {"02 A", "03 B", "04 C", "06 B", "07 D", "08 J", "11 I", "13 E", "14 E",
                          "15 F", "16 L", "17 G", "18 H", "19 E", "20 G", "21 L", "22 L", "23 N",
                          "24 B", "25 M", "26 C", "27 I", "28 M", "29 J", "31 L", "32 M"};
    std::vector<LabeledEvent> log;
    for (const char* r : rows) {
        std::string s(r);
        log.push_back({evcorr::testing::at("11:55:" + s.substr(0, 2), s.substr(3)), "2"});
    }
    return log;
}

}  // namespace

TEST_CASE("extraction from a completed-only log") {
    auto td = evcorr::testing::running_td();
    SUBCASE("single trace, durations from the latest satisfied alternative") {
        std::vector<LabeledEvent> log{{evcorr::testing::at("10:00:00", "A"), "c"},
                                      {evcorr::testing::at("10:00:03", "B"), "c"},
                                      {evcorr::testing::at("10:00:05", "D"), "c"},
                                      {evcorr::testing::at("10:00:09", "E"), "c"}};
        auto r = extract_heuristics(log, td);
        CHECK(r.table.bounds("B") == HeuristicBounds{3, 3});
        CHECK(r.table.bounds("D") == HeuristicBounds{2, 2});
        CHECK(r.table.bounds("E") == HeuristicBounds{4, 4});
        CHECK_FALSE(r.table.contains("A"));
    }
    SUBCASE("zero durations are rejected with a warning") {
        std::vector<LabeledEvent> log{{evcorr::testing::at("10:00:00", "A"), "c"},
                                      {evcorr::testing::at("10:00:00", "B"), "c"}};
        auto r = extract_heuristics(log, td);
        CHECK_FALSE(r.table.contains("B"));
        CHECK(r.warnings.size() == 1);
    }
    SUBCASE("case 2 of the running example") {
        auto r = extract_heuristics(case_two_log(), td);
        // Hand-computed: E after D@07 at 13 (6) and after H@18 at 19 (1); E@14 also measured from D@07 (7).
        CHECK(r.table.bounds("E") == HeuristicBounds{1, 7});
        // F@15 is measured from E@14, the latest E, although E@13 is the one
        // the case view pairs it with: the log holds both clones.
        CHECK(r.table.bounds("F") == HeuristicBounds{1, 1});
        CHECK(r.table.bounds("B") == HeuristicBounds{1, 4});
        CHECK(r.table.bounds("M") == HeuristicBounds{1, 6});
        CHECK_FALSE(r.table.contains("A"));
    }
    SUBCASE("empty log") {
        auto r = extract_heuristics({}, td);
        CHECK(r.table.entries().empty());
        CHECK(save_heuristics(r.table) == "activity,min,max\n");
    }
}

TEST_CASE("extraction from a started/completed log pairs per case") {
    auto td = evcorr::testing::running_td();
    auto ev = [](const std::string& hms, const std::string& a, Lifecycle lc, const std::string& c) {
        auto e = evcorr::testing::at(hms, a);
        e.lifecycle = lc;
        return LabeledEvent{e, c};
    };
    std::vector<LabeledEvent> log{
        ev("10:00:00", "B", Lifecycle::started, "1"), ev("10:00:01", "B", Lifecycle::started, "2"),
        ev("10:00:02", "B", Lifecycle::completed, "2"), ev("10:00:05", "B", Lifecycle::completed, "1"),
        ev("10:00:06", "C", Lifecycle::completed, "1")};
    auto r = extract_heuristics(log, td);
    CHECK(r.table.bounds("B") == HeuristicBounds{1, 5});
    CHECK_FALSE(r.table.contains("C"));
    CHECK(r.warnings.size() == 1);
}

TEST_CASE("extraction rounds outward into coarse units") {
    auto td = evcorr::testing::running_td();
    std::vector<LabeledEvent> log{{evcorr::testing::at("10:00:00", "A"), "c"},
                                  {evcorr::testing::at("10:01:30", "B"), "c"}};
    auto r = extract_heuristics(log, td, Duration{60});
    CHECK(r.table.bounds("B") == HeuristicBounds{1, 2});
}
