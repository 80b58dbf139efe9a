#include <doctest.h>

#include "evcorr/task_dependencies.hpp"
#include "fixtures.hpp"

using namespace evcorr;
using evcorr::testing::fixture;
using evcorr::testing::slurp;

namespace {

std::string code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const ModelError& e) {
        return e.code();
    }
    return "";
}

}  // namespace

TEST_CASE("running example dependencies, written out by hand") {
    auto td = evcorr::testing::running_td();
    CHECK(td.of("A").empty());
    CHECK(td.is_start("A"));
    CHECK(td.of("B") == Alternatives{{"A"}, {"N"}});
    CHECK(td.of("C") == Alternatives{{"B"}});
    CHECK(td.of("D") == Alternatives{{"B"}});
    CHECK(td.of("E") == Alternatives{{"D"}, {"H"}});
    CHECK(td.of("F") == Alternatives{{"E"}});
    CHECK(td.of("G") == Alternatives{{"E"}});
    CHECK(td.of("H") == Alternatives{{"F"}});
    CHECK(td.of("I") == Alternatives{{"C"}});
    CHECK(td.of("J") == Alternatives{{"C"}});
    CHECK(td.of("L") == Alternatives{{"G"}, {"I", "J"}});
    CHECK(td.of("M") == Alternatives{{"L"}});
    CHECK(td.of("N") == Alternatives{{"L"}});
    CHECK(td.deps.size() == 13);
    CHECK(td.loop_entries == std::set<std::string>{"D", "G", "H", "I", "J", "N"});
    CHECK(td.warnings.empty());
}

TEST_CASE("JSON export matches the fixture and round-trips") {
    auto td = evcorr::testing::running_td();
    auto expected = nlohmann::json::parse(slurp(fixture("running_td.json")));
    CHECK(to_json(td) == expected);
    CHECK(task_dependencies_from_json(to_json(td)) == td);
}

TEST_CASE("raw dependencies keep the silent join") {
    auto net = evcorr::testing::running_net();
    auto raw = raw_dependencies(net);
    CHECK(raw.deps.at("L") == Alternatives{{"G"}, {"t_join"}});
    CHECK(raw.deps.at("t_join") == Alternatives{{"I", "J"}});
    CHECK(raw.deps.at("A").empty());
}

TEST_CASE("non-Cartesian product") {
    CHECK(non_cartesian_product({}) == Alternatives{{}});
    CHECK(non_cartesian_product({{"a", "b"}, {"c"}}) == Alternatives{{"a", "c"}, {"b", "c"}});
    // A transition producing into both places collapses to a singleton set.
    CHECK(non_cartesian_product({{"a", "b"}, {"a"}}) == Alternatives{{"a"}, {"a", "b"}});
    CHECK(non_cartesian_product({{"a", "b"}, {"c", "d"}}).size() == 4);
    CHECK(code_of([] { non_cartesian_product({{"a"}, {}}); }) == "EMPTY_FAMILY");
}

TEST_CASE("nested silent transitions are eliminated to fixpoint") {
    auto net = parse_simple_net(R"(
place s
place p1
place p2
place p3
place e
transition A
transition t1 tau
transition t2 tau
transition B
arc s A
arc A p1
arc p1 t1
arc t1 p2
arc p2 t2
arc t2 p3
arc p3 B
arc B e
)");
    auto td = build_task_dependencies(net);
    CHECK(td.of("B") == Alternatives{{"A"}});
    for (const auto& [activity, alts] : td.deps)
        for (const auto& set : alts) CHECK(set.count("tau") == 0);
    CHECK(td.loop_entries.empty());
}

TEST_CASE("silent cycle is rejected") {
    auto net = parse_simple_net(R"(
place s
place p1
place p2
place e
transition A
transition t1 tau
transition t2 tau
transition B
arc s A
arc A p1
arc p1 t1
arc t1 p2
arc p2 t2
arc t2 p1
arc p2 B
arc B e
)");
    CHECK(code_of([&] { build_task_dependencies(net); }) == "SILENT_CYCLE");
}

TEST_CASE("silent start transition") {
    SUBCASE("alone: its successors become start activities") {
        auto net = parse_simple_net(R"(
place s
place p1
place e
transition t0 tau
transition A
arc s t0
arc t0 p1
arc p1 A
arc A e
)");
        auto td = build_task_dependencies(net);
        CHECK(td.is_start("A"));
    }
    SUBCASE("synchronized with another dependency") {
        auto net = parse_simple_net(R"(
place s
place p1
place p2
place p3
place e
transition t0 tau
transition A
transition B
arc s t0
arc t0 p1
arc t0 p2
arc p1 A
arc A p3
arc p2 B
arc p3 B
arc B e
)");
        // B waits on A and on t0 directly; t0 has nothing to wait for.
        CHECK(code_of([&] { build_task_dependencies(net); }) == "VACUOUS_DEPENDENCY");
    }
    SUBCASE("start activity that can be re-entered") {
        auto net = parse_simple_net(R"(
place s
place p1
place p2
place e
transition t0 tau
transition A
transition B
transition C
arc s t0
arc t0 p1
arc p1 A
arc A p2
arc p2 B
arc B p1
arc p2 C
arc C e
)");
        auto td = build_task_dependencies(net);
        CHECK(td.is_start("A"));
        REQUIRE(td.warnings.size() == 1);
        CHECK(td.warnings.front().code == diag::kStartOnCycle);
    }
}

TEST_CASE("loop entries") {
    SUBCASE("acyclic net has none") {
        auto net = parse_simple_net(R"(
place s
place p1
place p2
place e
transition A
transition B
transition C
transition D
arc s A
arc A p1
arc p1 B
arc p1 C
arc B p2
arc C p2
arc p2 D
arc D e
)");
        auto td = build_task_dependencies(net);
        CHECK(td.of("D") == Alternatives{{"B"}, {"C"}});
        CHECK(td.loop_entries.empty());
    }
    SUBCASE("self loop") {
        auto net = parse_simple_net(R"(
place s
place p1
place e
transition A
transition B
transition C
arc s A
arc A p1
arc p1 B
arc B p1
arc p1 C
arc C e
)");
        auto td = build_task_dependencies(net);
        CHECK(td.of("B") == Alternatives{{"A"}, {"B"}});
        CHECK(td.loop_entries == std::set<std::string>{"B"});
    }
    SUBCASE("subset of members of multi-alternative activities") {
        auto td = evcorr::testing::running_td();
        std::set<std::string> candidates;
        for (const auto& [a, alts] : td.deps)
            if (alts.size() >= 2)
                for (const auto& s : alts) candidates.insert(s.begin(), s.end());
        for (const auto& x : td.loop_entries) CHECK(candidates.count(x) == 1);
    }
}

TEST_CASE("dependency graph of the running example") {
    auto g = build_dependency_graph(evcorr::testing::running_td());
    CHECK(g.nodes.size() == 13);
    CHECK(g.edges.count({"N", "B"}) == 1);
    CHECK(g.edges.count({"I", "L"}) == 1);
    CHECK(g.edges.count({"J", "L"}) == 1);
    CHECK(g.edges.size() == 16);
}

TEST_CASE("JSON import rejects malformed documents") {
    CHECK_THROWS(task_dependencies_from_json(nlohmann::json::parse(R"({"deps": 3})")));
    CHECK_THROWS(task_dependencies_from_json(nlohmann::json::parse(R"([1,2])")));
}
