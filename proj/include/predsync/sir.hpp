#pragma once

#include "predsync/koopman.hpp"

#include <Eigen/Dense>

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace predsync {

struct SirParams {
    double beta_r = 0.35;
    double beta_u = 0.35;
    double gamma_r = 0.35;
    double gamma_u = 0.35;
    double m_ru = 0.95;
    double h = 0.01;
    double D = 10.0;
    double i_r0 = 0.5;
    double r_r0 = 0.0;
    double i_u0 = 0.2;
    double r_u0 = 0.0;
    int steps = 10000;

    // D / h; throws ValidationError unless it is a whole number.
    int tau() const;
    void validate() const;
};

struct SirState {
    double i_r = 0.0;
    double r_r = 0.0;
    double i_u = 0.0;
    double r_u = 0.0;

    friend bool operator==(const SirState&, const SirState&) = default;
};

// Urban recovery boost s_u * beta_u * (1 + m).
double mitigation_control(const SirParams& p, const SirState& x);

SirState sir_step(const SirParams& p, const SirState& x, double i_r_delayed);

struct SirRun {
    std::vector<SirState> states;   // k = 0..steps
    std::vector<double> u_bar;      // i_r(k - tau), 0 before the first arrival
    std::vector<double> mitigation;
    bool excursion = false;         // some fraction left [0, 1]
};

SirRun simulate_sir(const SirParams& p);

// Koopman models fitted on one nonlinear closed-loop trajectory.
KoopmanModel fit_sir_koopman(const SirRun& run);

// [1 0] C_r A_r^tau: applied to lift(x_r(k - tau)) it forecasts i_r(k).
Eigen::RowVectorXd forecast_row(const KoopmanModel& model, int tau);

double compensated_input(const KoopmanModel& model, const Eigen::Vector2d& x_r_delayed, int tau);

enum class SirMode { Baseline, Compensated };

SirMode parse_sir_mode(std::string_view name);
std::string sir_mode_name(SirMode mode);

struct Peak {
    double value = 0.0;
    int step = 0;
};

// First occurrence of the maximum over k >= from.
Peak peak_of(const std::vector<double>& series, int from = 0);

struct SirScenario {
    SirMode mode = SirMode::Baseline;
    Rollout rollout;
    std::vector<double> mitigation;
    Peak peak_i_u;
    Peak peak_i_r;
    Peak peak_i_u_after_arrival;  // restricted to k >= tau
    bool excursion = false;
};

SirScenario run_sir_scenario(const SirParams& p, SirMode mode, const KoopmanModel& model);

struct SirComparison {
    SirRun truth;
    KoopmanModel model;
    SirScenario baseline;
    SirScenario compensated;
    double delta = 0.0;                 // peak(i_u) baseline - compensated
    double delta_after_arrival = 0.0;
    Eigen::Vector4d fidelity;           // max |rollout - truth| per state, baseline arm
};

SirComparison compare_sir(const SirParams& p);

void write_sir_csv(const SirParams& p, const SirScenario& s, std::ostream& out, bool header = true);
std::string sir_report_json(const SirParams& p, const SirComparison& c, int indent = 2);

}  // namespace predsync
