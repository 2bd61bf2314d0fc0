#include "predsync/graph.hpp"

#include "predsync/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <string>

namespace predsync {

DelayGraph::DelayGraph(std::size_t node_count) : node_count_(node_count) {
    if (node_count == 0) {
        fail(ErrorCode::InvalidArgument, "graph needs at least the leader node");
    }
}

void DelayGraph::check_node(NodeId node) const {
    if (node < 0 || static_cast<std::size_t>(node) >= node_count_) {
        fail(ErrorCode::InvalidArgument,
             "node " + std::to_string(node) + " out of range [0, " +
                 std::to_string(node_count_ - 1) + "]");
    }
}

void DelayGraph::add_edge(NodeId sender, NodeId receiver, double weight, int delay) {
    check_node(sender);
    check_node(receiver);
    if (sender == receiver) {
        fail(ErrorCode::CycleDetected, "self loop on node " + std::to_string(sender));
    }
    if (!(weight > 0.0) || !std::isfinite(weight)) {
        fail(ErrorCode::InvalidArgument, "edge weight must be positive and finite");
    }
    if (delay < 1) {
        fail(ErrorCode::InvalidArgument,
             "edge " + std::to_string(sender) + "->" + std::to_string(receiver) +
                 ": delay must be a positive integer");
    }
    if (find_edge(sender, receiver) != nullptr) {
        fail(ErrorCode::InvalidArgument, "duplicate edge " + std::to_string(sender) + "->" +
                                             std::to_string(receiver));
    }
    edges_.push_back(Edge{sender, receiver, weight, delay});
}

const Edge* DelayGraph::find_edge(NodeId sender, NodeId receiver) const {
    auto it = std::find_if(edges_.begin(), edges_.end(), [&](const Edge& e) {
        return e.sender == sender && e.receiver == receiver;
    });
    return it == edges_.end() ? nullptr : &*it;
}

std::vector<Edge> DelayGraph::in_edges(NodeId node) const {
    std::vector<Edge> out;
    for (const auto& e : edges_) {
        if (e.receiver == node) out.push_back(e);
    }
    std::sort(out.begin(), out.end(),
              [](const Edge& a, const Edge& b) { return a.sender < b.sender; });
    return out;
}

std::vector<Edge> DelayGraph::out_edges(NodeId node) const {
    std::vector<Edge> out;
    for (const auto& e : edges_) {
        if (e.sender == node) out.push_back(e);
    }
    std::sort(out.begin(), out.end(),
              [](const Edge& a, const Edge& b) { return a.receiver < b.receiver; });
    return out;
}

double DelayGraph::weight(NodeId receiver, NodeId sender) const {
    const Edge* e = find_edge(sender, receiver);
    return e ? e->weight : 0.0;
}

std::vector<NodeId> topological_order(const DelayGraph& graph) {
    const auto n = graph.node_count();
    std::vector<int> indegree(n, 0);
    for (const auto& e : graph.edges()) {
        if (e.receiver == 0) {
            fail(ErrorCode::LeaderHasInEdge,
                 "leader node 0 has an incoming edge from " + std::to_string(e.sender));
        }
        ++indegree[e.receiver];
    }

    std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
    for (std::size_t v = 0; v < n; ++v) {
        if (indegree[v] == 0) ready.push(static_cast<NodeId>(v));
    }

    std::vector<NodeId> order;
    order.reserve(n);
    while (!ready.empty()) {
        const NodeId v = ready.top();
        ready.pop();
        order.push_back(v);
        for (const auto& e : graph.edges()) {
            if (e.sender == v && --indegree[e.receiver] == 0) ready.push(e.receiver);
        }
    }

    if (order.size() != n) {
        // Some node with remaining in-degree lies on (or downstream of) a
        // cycle; walk predecessors with remaining in-degree until one repeats.
        NodeId v = 0;
        while (indegree[v] == 0) ++v;
        std::vector<bool> seen(n, false);
        while (!seen[v]) {
            seen[v] = true;
            for (const auto& e : graph.edges()) {
                if (e.receiver == v && indegree[e.sender] > 0) {
                    v = e.sender;
                    break;
                }
            }
        }
        fail(ErrorCode::CycleDetected, "cycle through node " + std::to_string(v));
    }
    return order;
}

namespace {

void check_node_arg(const DelayGraph& graph, NodeId node) {
    if (node < 0 || static_cast<std::size_t>(node) >= graph.node_count()) {
        fail(ErrorCode::InvalidArgument, "node " + std::to_string(node) + " out of range");
    }
}

}  // namespace

std::optional<int> modified_longest_path(const DelayGraph& graph, NodeId from, NodeId to) {
    check_node_arg(graph, from);
    check_node_arg(graph, to);
    if (from == to) {
        fail(ErrorCode::InvalidArgument, "modified_longest_path needs distinct endpoints");
    }
    const auto order = topological_order(graph);

    std::vector<std::optional<int>> best(graph.node_count());
    best[from] = 0;
    for (NodeId v : order) {
        if (!best[v]) continue;
        for (const auto& e : graph.out_edges(v)) {
            const int candidate = *best[v] + e.delay - 1;
            if (!best[e.receiver] || candidate > *best[e.receiver]) best[e.receiver] = candidate;
        }
    }
    return best[to];
}

int forward_horizon(const DelayGraph& graph, NodeId node) {
    check_node_arg(graph, node);
    const auto order = topological_order(graph);
    std::vector<int> reach(graph.node_count(), 0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        for (const auto& e : graph.out_edges(*it)) {
            reach[*it] = std::max(reach[*it], e.delay - 1 + reach[e.receiver]);
        }
    }
    return reach[node];
}

HorizonRange prediction_horizon(const DelayGraph& graph, NodeId sender, NodeId receiver) {
    if (graph.find_edge(sender, receiver) == nullptr) {
        fail(ErrorCode::EdgeAbsent, "no edge " + std::to_string(sender) + "->" +
                                        std::to_string(receiver));
    }
    return HorizonRange{0, forward_horizon(graph, receiver)};
}

int exactness_time(const DelayGraph& graph) {
    topological_order(graph);
    int total = 0;
    for (std::size_t j = 1; j < graph.node_count(); ++j) {
        int widest = 0;
        for (const auto& e : graph.in_edges(static_cast<NodeId>(j))) widest = std::max(widest, e.delay);
        total += widest;
    }
    return total;
}

TopologyMatrices topology_matrices(const DelayGraph& graph) {
    topological_order(graph);
    const auto agents = static_cast<Eigen::Index>(graph.agent_count());

    TopologyMatrices out;
    out.H = Eigen::MatrixXd::Zero(agents, agents);
    out.D0 = Eigen::MatrixXd::Zero(agents, agents);
    for (const auto& e : graph.edges()) {
        const Eigen::Index i = e.receiver - 1;
        if (e.sender == 0) {
            out.D0(i, i) += e.weight;
        } else {
            out.H(i, e.sender - 1) -= e.weight;
            out.H(i, i) += e.weight;
        }
        out.horizons[{e.sender, e.receiver}] = forward_horizon(graph, e.receiver);
    }
    out.t_max = exactness_time(graph);
    return out;
}

}  // namespace predsync
