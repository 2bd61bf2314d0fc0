#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace predsync {

// Node 0 is the exosystem (leader); agents are 1..N.
using NodeId = int;

struct Edge {
    NodeId sender = 0;
    NodeId receiver = 0;
    double weight = 0.0;  // a_{receiver,sender} > 0
    int delay = 1;        // tau_{sender,receiver} >= 1, in steps
};

/// Weighted communication digraph with a fixed integer delay per edge.
///
/// Structural problems that only show up globally (cycles, in-edges on the
/// leader) are reported by topological_order(); add_edge() only rejects
/// malformed individual edges.
class DelayGraph {
public:
    explicit DelayGraph(std::size_t node_count);

    void add_edge(NodeId sender, NodeId receiver, double weight, int delay);

    std::size_t node_count() const noexcept { return node_count_; }
    std::size_t agent_count() const noexcept { return node_count_ - 1; }

    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const Edge* find_edge(NodeId sender, NodeId receiver) const;
    std::vector<Edge> in_edges(NodeId node) const;
    std::vector<Edge> out_edges(NodeId node) const;

    // a_{receiver,sender}; zero when the edge is absent.
    double weight(NodeId receiver, NodeId sender) const;

private:
    void check_node(NodeId node) const;

    std::size_t node_count_;
    std::vector<Edge> edges_;
};

struct HorizonRange {
    int first = 0;
    int last = 0;  // inclusive
    int size() const noexcept { return last - first + 1; }
    friend bool operator==(const HorizonRange&, const HorizonRange&) = default;
};

/// H, D0 and the derived quantities for a validated graph.
struct TopologyMatrices {
    Eigen::MatrixXd H;   // N x N
    Eigen::MatrixXd D0;  // N x N diagonal
    std::map<std::pair<NodeId, NodeId>, int> horizons;  // (sender, receiver) -> w
    int t_max = 0;

    Eigen::MatrixXd h_plus_d0() const { return H + D0; }
};

// Kahn's algorithm; ties broken by ascending node id.
// Throws CycleDetected (naming a node on a cycle) or LeaderHasInEdge.
std::vector<NodeId> topological_order(const DelayGraph& graph);

// max over paths from -> to of (sum of delays - number of edges);
// nullopt when to is unreachable from `from`.
std::optional<int> modified_longest_path(const DelayGraph& graph, NodeId from, NodeId to);

// Largest modified weight of any path leaving `node` (0 for a sink). This is
// how far ahead every sender must forecast for `node`.
int forward_horizon(const DelayGraph& graph, NodeId node);

// Index range of forecasts the sender ships to the receiver.
HorizonRange prediction_horizon(const DelayGraph& graph, NodeId sender, NodeId receiver);

// Sum over receivers of their largest in-edge delay.
int exactness_time(const DelayGraph& graph);

TopologyMatrices topology_matrices(const DelayGraph& graph);

}  // namespace predsync
