#pragma once

#include "predsync/config.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace support {

inline std::string source_path(const std::string& rel) { return std::string(PREDSYNC_SOURCE_DIR) + "/" + rel; }

inline predsync::Scenario four_agent_scenario() { return predsync::load_scenario(source_path("scenarios/four_agents.toml")); }

inline predsync::SirParams default_sir() { return predsync::load_sir_params(source_path("scenarios/sir_two_region.toml")); }

constexpr double kOmega = 1.2;

inline Eigen::MatrixXd rotation() {
    const double c = std::cos(kOmega * M_PI), s = std::sin(kOmega * M_PI);
    Eigen::MatrixXd S(2, 2);
    S << c, s, -s, c;
    return S;
}

// Agent parameters (alpha_1..alpha_4) of the four-agent example.
struct Alpha {
    double a1, a2, a3, a4;
};

inline const std::vector<Alpha>& agent_alphas() {
    static const std::vector<Alpha> alphas{{1, 0, 1, 1}, {2, 0, 1, 2}, {1, 3, 1, 2}, {2, 1, 1, 1}};
    return alphas;
}

// Closed-form regulator solution for the companion-like agents.
inline Eigen::MatrixXd closed_form_X(const Alpha& a) {
    const double w = kOmega * M_PI;
    Eigen::MatrixXd X(3, 2);
    X << 0, 1, -std::sin(w), std::cos(w), -std::sin(2 * w) / a.a1, std::cos(2 * w) / a.a1;
    return X;
}

inline Eigen::MatrixXd closed_form_U(const Alpha& a) {
    const double w = kOmega * M_PI;
    Eigen::MatrixXd U(1, 2);
    U << -std::sin(3 * w) / a.a1 + a.a3 * std::sin(w) + a.a4 / a.a1 * std::sin(2 * w),
        std::cos(3 * w) / a.a1 - a.a2 - a.a3 * std::cos(w) - a.a4 / a.a1 * std::cos(2 * w);
    return U;
}

struct RandomDag {
    int node_count;
    std::vector<predsync::Edge> edges;
};

// Random DAG on 0..n-1 with edges only from lower to higher ids, then a random
// relabelling of the agents so the topological order is not the id order.
inline RandomDag random_dag(std::mt19937_64& rng, int max_nodes, bool relabel = true) {
    std::uniform_int_distribution<int> nodes(2, max_nodes);
    std::uniform_int_distribution<int> delay(1, 6);
    std::bernoulli_distribution keep(0.45);
    std::uniform_real_distribution<double> weight(0.2, 1.5);
    RandomDag dag;
    dag.node_count = nodes(rng);
    std::vector<int> label(static_cast<std::size_t>(dag.node_count));
    for (int i = 0; i < dag.node_count; ++i) label[static_cast<std::size_t>(i)] = i;
    if (relabel) std::shuffle(label.begin() + 1, label.end(), rng);
    for (int to = 1; to < dag.node_count; ++to) {
        bool any = false;
        for (int from = 0; from < to; ++from) {
            if (keep(rng)) {
                dag.edges.push_back({label[static_cast<std::size_t>(from)], label[static_cast<std::size_t>(to)],
                                     weight(rng), delay(rng)});
                any = true;
            }
        }
        if (!any) {
            std::uniform_int_distribution<int> pick(0, to - 1);
            dag.edges.push_back({label[static_cast<std::size_t>(pick(rng))], label[static_cast<std::size_t>(to)],
                                 weight(rng), delay(rng)});
        }
    }
    return dag;
}

inline predsync::DelayGraph to_graph(const RandomDag& dag) {
    predsync::DelayGraph g(static_cast<std::size_t>(dag.node_count));
    for (const auto& e : dag.edges) g.add_edge(e.sender, e.receiver, e.weight, e.delay);
    return g;
}

inline Eigen::MatrixXd agent_matrix(const Alpha& a) {
    Eigen::MatrixXd m(3, 3);
    m << 0, 1, 0, 0, 0, a.a1, a.a2, a.a3, a.a4;
    return m;
}

// Random DAG populated with the example's agent types; gains come from pole
// targets and beta is picked so the coupling condition holds.
inline predsync::Scenario random_scenario(std::mt19937_64& rng, int max_nodes, const std::string& mode) {
    std::normal_distribution<double> gauss;
    const RandomDag dag = random_dag(rng, max_nodes);
    predsync::Scenario sc;
    sc.name = "random";
    sc.S = rotation();
    sc.v0 = Eigen::Vector2d(gauss(rng), gauss(rng));
    sc.F = Eigen::RowVector2d(0, -1);
    sc.mode = mode;
    sc.horizon = 120;
    sc.edges = dag.edges;
    std::vector<double> in_weight(static_cast<std::size_t>(dag.node_count), 0.0);
    for (const auto& e : dag.edges) in_weight[static_cast<std::size_t>(e.receiver)] += e.weight;
    sc.beta = 0.9 / *std::max_element(in_weight.begin(), in_weight.end());
    for (int i = 1; i < dag.node_count; ++i) {
        const Alpha& alpha = agent_alphas()[static_cast<std::size_t>(i - 1) % agent_alphas().size()];
        predsync::AgentConfig a;
        a.A = agent_matrix(alpha);
        a.B = Eigen::Vector3d(0, 0, 1);
        a.C = Eigen::RowVector3d(1, 0, 0);
        a.poles = predsync::PoleList{0.2, -0.3, 0.4};
        a.observer_poles = predsync::PoleList{0.5, 0.4, 0.3};
        a.x0 = Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng));
        a.xi0 = Eigen::Vector2d(gauss(rng), gauss(rng));
        a.x_hat0 = Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng));
        sc.agents.push_back(std::move(a));
    }
    return sc;
}

// Every initial condition multiplied by `factor`.
inline predsync::Scenario scaled(predsync::Scenario sc, double factor) {
    sc.v0 *= factor;
    for (auto& a : sc.agents) {
        a.x0 *= factor;
        if (a.xi0) *a.xi0 *= factor;
        if (a.x_hat0) *a.x_hat0 *= factor;
    }
    return sc;
}

}  // namespace support
