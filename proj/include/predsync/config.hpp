#pragma once

#include "predsync/graph.hpp"
#include "predsync/sir.hpp"
#include "predsync/simulation.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace predsync {

using PoleList = std::vector<std::complex<double>>;

struct AgentConfig {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
    Eigen::MatrixXd C;
    std::optional<Eigen::MatrixXd> K_x;
    std::optional<PoleList> poles;  // used when K_x is absent
    std::optional<Eigen::MatrixXd> L;
    std::optional<PoleList> observer_poles;
    Eigen::VectorXd x0;
    std::optional<Eigen::VectorXd> xi0;     // default zero
    std::optional<Eigen::VectorXd> x_hat0;  // default zero
};

struct Scenario {
    std::string name;
    Eigen::MatrixXd S;
    Eigen::VectorXd v0;
    double beta = 0.0;
    Eigen::MatrixXd F;
    std::vector<AgentConfig> agents;
    std::vector<Edge> edges;
    std::string mode = "state_feedback";
    int horizon = 800;
    std::uint64_t seed = 0;
    Thresholds thresholds;
};

enum class FileFormat { Auto, Toml, Json };

// Errors carry the offending field path, e.g. "agents[1].A[2][0]".
Scenario parse_scenario(const std::string& text, FileFormat format);
Scenario load_scenario(const std::string& path);
std::string scenario_to_json(const Scenario& sc, int indent = 2);

struct AgentCheck {
    int node = 0;
    double closed_loop_radius = 0.0;  // rho(A + B K_x)
    std::optional<double> observer_radius;
    bool stabilizable = false;
    bool detectable = false;
    double residual_primary = 0.0;
    double residual_output = 0.0;
};

struct CheckReport {
    std::vector<NodeId> order;
    std::vector<std::pair<Edge, HorizonRange>> horizons;
    int t_max = 0;
    double rho_s = 0.0;
    double rho_coupling = 0.0;  // rho(I - beta (H + D0))
    double coupling_lhs = 0.0;
    bool coupling_ok = false;
    std::vector<AgentCheck> agents;
    std::vector<std::string> failures;

    bool ok() const noexcept { return failures.empty(); }
};

// Graph structure errors are thrown; numerical conditions are collected into
// failures so the whole report is still produced.
CheckReport check_scenario(const Scenario& sc);
std::string check_report_json(const CheckReport& report, int indent = 2);

// Throws ValidationError listing the failures when any check fails.
PreparedScenario prepare(const Scenario& sc);

SirParams parse_sir_params(const std::string& text, FileFormat format);
SirParams load_sir_params(const std::string& path);
std::string sir_params_to_json(const SirParams& p, int indent = 2);

std::string read_file(const std::string& path);

}  // namespace predsync
