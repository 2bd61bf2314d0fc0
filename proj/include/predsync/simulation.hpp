#pragma once

#include "predsync/graph.hpp"
#include "predsync/sync.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace predsync {

enum class FeedbackKind { State, Output };

struct SimulationMode {
    FeedbackKind feedback = FeedbackKind::State;
    bool compensate = true;

    friend bool operator==(const SimulationMode&, const SimulationMode&) = default;
};

// "state_feedback", "output_feedback" or "no_compensation".
SimulationMode parse_mode(std::string_view name);
std::string mode_name(SimulationMode mode);

struct AgentSetup {
    AgentModel model;
    AgentGains gains;
    Eigen::VectorXd x0;
    Eigen::VectorXd xi0;
    Eigen::VectorXd x_hat0;
};

struct Thresholds {
    double prediction = 1e-9;
    double sync = 1e-4;
    double regulated = 1e-4;
};

/// Everything the kernel needs, already validated.
struct PreparedScenario {
    std::string name;
    ExosystemModel exo;
    Eigen::VectorXd v0;
    DelayGraph graph{1};
    std::vector<NodeId> order;
    TopologyMatrices topo;
    std::vector<AgentSetup> agents;  // agents[i - 1] is node i
    Eigen::MatrixXd F;
    double beta = 0.0;
    SimulationMode mode;
    int horizon = 0;
    Thresholds thresholds;
};

struct AgentTrace {
    std::vector<Eigen::VectorXd> x;
    std::vector<Eigen::VectorXd> x_hat;
    std::vector<Eigen::VectorXd> xi;
    std::vector<Eigen::VectorXd> y;
    std::vector<Eigen::VectorXd> u;
    std::vector<Eigen::VectorXd> e;
    std::vector<double> observer_error;    // |xi(k) - v(k)|_2
    std::vector<double> prediction_error;  // max over out-edges and s, inf-norm
    // Base value received from the leader at k; zero when nothing arrived or
    // the agent has no leader edge.
    std::vector<Eigen::VectorXd> exo_base_received;
};

struct ChannelStats {
    std::size_t sent = 0;
    std::size_t received = 0;
    std::size_t dropped = 0;
    std::size_t in_flight = 0;
};

struct SimMetrics {
    int first_exact_step = -1;  // -1: never exact through the horizon
    double max_prediction_error_after_tmax = 0.0;
    double observer_error_sup_tmax = 0.0;
    std::vector<double> final_regulated;  // |e_i(K)|_2
    double final_sync = 0.0;              // max_{i,j} |y_i(K) - y_j(K)|_2
    bool predictions_exact = false;
    bool regulated_ok = false;
    bool sync_ok = false;
};

struct SimTrace {
    int steps = 0;  // rows are k = 0..steps
    SimulationMode mode;
    std::vector<Eigen::VectorXd> v;
    std::vector<double> leader_prediction_error;
    std::vector<AgentTrace> agents;
    // (sender, receiver) -> per send step, base followed by the forecasts.
    std::map<std::pair<NodeId, NodeId>, std::vector<std::vector<Eigen::VectorXd>>> sent;
    std::map<std::pair<NodeId, NodeId>, ChannelStats> channels;
    SimMetrics metrics;
};

SimTrace run_simulation(const PreparedScenario& scenario);

void write_trace_csv(const SimTrace& trace, std::ostream& out);
void write_trace_json(const SimTrace& trace, std::ostream& out);
std::string metrics_json(const SimTrace& trace, int indent = 2);

}  // namespace predsync
