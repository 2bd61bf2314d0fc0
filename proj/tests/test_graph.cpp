#include "oracles/paths.hpp"
#include "predsync/error.hpp"
#include "predsync/graph.hpp"
#include "support.hpp"

#include <doctest.h>

#include <random>

using namespace predsync;

namespace {

DelayGraph example_graph() {
    DelayGraph g(5);
    g.add_edge(0, 1, 1.0, 4);
    g.add_edge(0, 2, 1.0, 5);
    g.add_edge(1, 2, 1.0, 6);
    g.add_edge(1, 3, 1.0, 11);
    g.add_edge(1, 4, 1.0, 3);
    g.add_edge(2, 4, 1.0, 10);
    g.add_edge(3, 4, 1.0, 12);
    return g;
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::InvalidArgument;
}

std::vector<oracle::RawEdge> raw(const support::RandomDag& dag) {
    std::vector<oracle::RawEdge> out;
    for (const auto& e : dag.edges) out.push_back({e.sender, e.receiver, e.delay});
    return out;
}

}  // namespace

TEST_CASE("topological order of the four-agent graph") {
    CHECK(topological_order(example_graph()) == std::vector<NodeId>{0, 1, 2, 3, 4});
    CHECK(topological_order(DelayGraph(1)) == std::vector<NodeId>{0});
}

TEST_CASE("order is recomputed from edges, not ids") {
    DelayGraph g(4);
    g.add_edge(0, 3, 1.0, 1);
    g.add_edge(3, 1, 1.0, 1);
    g.add_edge(1, 2, 1.0, 1);
    CHECK(topological_order(g) == std::vector<NodeId>{0, 3, 1, 2});
}

TEST_CASE("structural errors") {
    DelayGraph cyc(3);
    cyc.add_edge(0, 1, 1.0, 1);
    cyc.add_edge(1, 2, 1.0, 1);
    cyc.add_edge(2, 1, 1.0, 1);
    CHECK(code_of([&] { topological_order(cyc); }) == ErrorCode::CycleDetected);
    try {
        topological_order(cyc);
    } catch (const Error& e) {
        const std::string msg = e.what();
        CHECK((msg.find('1') != std::string::npos || msg.find('2') != std::string::npos));
    }

    DelayGraph leader(2);
    leader.add_edge(1, 0, 1.0, 1);
    CHECK(code_of([&] { topological_order(leader); }) == ErrorCode::LeaderHasInEdge);

    DelayGraph g(3);
    CHECK(code_of([&] { g.add_edge(0, 1, 1.0, 0); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { g.add_edge(0, 1, -1.0, 2); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { g.add_edge(0, 5, 1.0, 2); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { g.add_edge(1, 1, 1.0, 2); }) == ErrorCode::CycleDetected);
    g.add_edge(0, 1, 1.0, 2);
    CHECK(code_of([&] { g.add_edge(0, 1, 1.0, 3); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("modified longest path examples") {
    const DelayGraph g = example_graph();
    CHECK(modified_longest_path(g, 2, 4) == 9);
    CHECK(modified_longest_path(g, 3, 4) == 11);
    CHECK(modified_longest_path(g, 4, 1) == std::nullopt);
    CHECK(modified_longest_path(g, 1, 4) == 21);
    CHECK(modified_longest_path(g, 0, 4) == 24);
}

TEST_CASE("prediction horizons") {
    const DelayGraph g = example_graph();
    CHECK(prediction_horizon(g, 1, 2) == HorizonRange{0, 9});
    CHECK(prediction_horizon(g, 1, 3) == HorizonRange{0, 11});
    CHECK(prediction_horizon(g, 0, 1) == HorizonRange{0, 21});
    CHECK(prediction_horizon(g, 3, 4) == HorizonRange{0, 0});
    CHECK(code_of([&] { prediction_horizon(g, 2, 3); }) == ErrorCode::EdgeAbsent);
}

TEST_CASE("exactness time") {
    CHECK(exactness_time(example_graph()) == 33);

    DelayGraph single(2);
    single.add_edge(0, 1, 1.0, 5);
    CHECK(exactness_time(single) == 5);

    DelayGraph leaves(3);
    leaves.add_edge(0, 1, 1.0, 2);
    leaves.add_edge(0, 2, 1.0, 7);
    CHECK(exactness_time(leaves) == 9);
}

TEST_CASE("topology matrices") {
    const TopologyMatrices t = topology_matrices(example_graph());
    Eigen::MatrixXd expected(4, 4);
    expected << 1, 0, 0, 0,
                -1, 2, 0, 0,
                -1, 0, 1, 0,
                -1, -1, -1, 3;
    CHECK((t.h_plus_d0() - expected).norm() == 0.0);
    CHECK(t.t_max == 33);
    CHECK(t.horizons.at({0, 1}) == 21);
    CHECK(t.horizons.at({2, 4}) == 0);
}

TEST_CASE("DP matches path enumeration on random DAGs") {
    std::mt19937_64 rng(20240611);
    for (int trial = 0; trial < 200; ++trial) {
        const auto dag = support::random_dag(rng, 7);
        const DelayGraph g = support::to_graph(dag);
        const auto edges = raw(dag);
        for (int i = 0; i < dag.node_count; ++i) {
            for (int j = 0; j < dag.node_count; ++j) {
                if (i == j) continue;
                REQUIRE(modified_longest_path(g, i, j) == oracle::longest_modified(edges, i, j));
            }
            REQUIRE(forward_horizon(g, i) == oracle::longest_from(edges, i, dag.node_count));
        }
    }
}

TEST_CASE("concatenated paths never beat the longest path") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const DelayGraph g = support::to_graph(support::random_dag(rng, 7));
        const int n = static_cast<int>(g.node_count());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int l = 0; l < n; ++l) {
                    if (i == j || j == l || i == l) continue;
                    const auto ij = modified_longest_path(g, i, j);
                    const auto jl = modified_longest_path(g, j, l);
                    if (!ij || !jl) continue;
                    const auto il = modified_longest_path(g, i, l);
                    REQUIRE(il.has_value());
                    CHECK(*il >= *ij + *jl);
                }
    }
}

TEST_CASE("horizons never shrink when a delay grows") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        auto dag = support::random_dag(rng, 7);
        const DelayGraph before = support::to_graph(dag);
        std::uniform_int_distribution<std::size_t> pick(0, dag.edges.size() - 1);
        dag.edges[pick(rng)].delay += 3;
        const DelayGraph after = support::to_graph(dag);
        for (const auto& e : before.edges()) {
            CHECK(prediction_horizon(after, e.sender, e.receiver).last >=
                  prediction_horizon(before, e.sender, e.receiver).last);
        }
        int widest = 0;
        for (const auto& e : after.edges()) widest = std::max(widest, e.delay);
        CHECK(exactness_time(after) >= widest);
    }
}
