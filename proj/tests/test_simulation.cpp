#include <doctest.h>

#include "evcorr/simulation.hpp"
#include "fixtures.hpp"

using namespace evcorr;

namespace {

SimulationConfig running_config(std::uint64_t seed) {
    SimulationConfig cfg;
    cfg.seed = seed;
    cfg.weights = {{"N", 1}, {"M", 3}, {"F", 1}, {"G", 3}};
    return cfg;
}

}  // namespace

TEST_CASE("simulated running-example log") {
    auto net = evcorr::testing::running_net();
    auto h = evcorr::testing::running_heuristics();
    auto td = build_task_dependencies(net);
    auto log = simulate_log(net, h, running_config(5));

    CHECK(log.size() > 700);
    CHECK(log.size() < 1300);
    for (std::size_t i = 1; i < log.size(); ++i) CHECK(log[i - 1].event.timestamp <= log[i].event.timestamp);

    std::map<std::string, std::vector<const UncorrelatedEvent*>> cases;
    for (const auto& e : log) cases[e.case_id].push_back(&e.event);
    CHECK(cases.size() == 100);
    for (const auto& [id, events] : cases) {
        INFO("case " << id);
        CHECK(events.front()->activity == "A");
        CHECK(events.back()->activity == "M");
        // Some alternative of every later event has all its members strictly earlier.
        for (std::size_t i = 1; i < events.size(); ++i) {
            const auto& e = *events[i];
            bool satisfied = false;
            for (const auto& set : td.of(e.activity)) {
                bool all = true;
                for (const auto& x : set) {
                    bool seen = false;
                    for (std::size_t j = 0; j < i; ++j)
                        seen |= events[j]->activity == x && events[j]->timestamp < e.timestamp;
                    all &= seen;
                }
                satisfied |= all;
            }
            CHECK(satisfied);
        }
    }
}

TEST_CASE("simulation is reproducible per seed") {
    auto net = evcorr::testing::running_net();
    auto h = evcorr::testing::running_heuristics();
    CHECK(simulate_log(net, h, running_config(9)) == simulate_log(net, h, running_config(9)));
    CHECK_FALSE(simulate_log(net, h, running_config(9)) == simulate_log(net, h, running_config(10)));
}

TEST_CASE("simulation needs heuristics for every observable transition") {
    auto net = evcorr::testing::running_net();
    HeuristicTable h;
    h.set("A", 1, 1);
    CHECK_THROWS_AS(simulate_log(net, h), HeuristicsError);
}

TEST_CASE("extracted heuristics stay inside the generating bounds") {
    auto net = evcorr::testing::running_net();
    auto h = evcorr::testing::running_heuristics();
    auto td = build_task_dependencies(net);
    // Within one case the latest occurrence of each dependency is the one that
    // enabled the activity, so every measured gap is a drawn duration.
    auto log = simulate_log(net, h, running_config(21));
    auto extracted = extract_heuristics(log, td).table;
    for (const auto& [a, b] : extracted.entries()) {
        INFO(a);
        CHECK(b.min >= h.bounds(a).min);
        CHECK(b.max <= h.bounds(a).max);
    }
}
