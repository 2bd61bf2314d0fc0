#pragma once

#include "predsync/netsim.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace predsync {

/// Leader dynamics v(k+1) = S v(k).
struct ExosystemModel {
    Eigen::MatrixXd S;

    Eigen::Index dim() const noexcept { return S.rows(); }
};

/// Plant x(k+1) = A x(k) + B u(k), y(k) = C x(k).
struct AgentModel {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
    Eigen::MatrixXd C;

    Eigen::Index states() const noexcept { return A.rows(); }
    Eigen::Index inputs() const noexcept { return B.cols(); }
    Eigen::Index outputs() const noexcept { return C.rows(); }

    // Shape consistency and finiteness; throws ShapeMismatch / NonFinite.
    void validate() const;
};

struct AgentGains {
    Eigen::MatrixXd K_x;   // m x n
    Eigen::MatrixXd K_xi;  // m x q, always U - K_x X
    Eigen::MatrixXd L;     // n x p; empty unless an observer gain was given
    Eigen::MatrixXd X;     // n x q
    Eigen::MatrixXd U;     // m x q
    double residual_primary = 0.0;
    double residual_output = 0.0;

    bool has_observer() const noexcept { return L.size() > 0; }
};

// Solves the regulator equations for the agent and derives K_xi.
AgentGains assemble_gains(const AgentModel& agent, const ExosystemModel& exo,
                          const Eigen::MatrixXd& F, const Eigen::MatrixXd& K_x,
                          const Eigen::MatrixXd& L = {});

Eigen::VectorXd exosystem_step(const ExosystemModel& exo, const Eigen::VectorXd& v);

struct ExoPrediction {
    Eigen::VectorXd base;                  // S^tau v
    std::vector<Eigen::VectorXd> horizon;  // S^s base, s = 1..w
};

ExoPrediction exo_predictor(const ExosystemModel& exo, const Eigen::VectorXd& v, int tau,
                            int horizon_w);

/// One in-neighbour as seen at the current step: its coupling weight and the
/// bundle that arrived (nullptr before the first arrival, read as zero).
struct NeighborInput {
    double weight = 0.0;
    const MessageBundle* bundle = nullptr;
};

/// Distributed observer of one agent together with its predictors.
///
/// The observer runs xi(k+1) = S_hat xi(k) + g(0), where g(t) is the coupling
/// input built from the t-th forecast of every received bundle:
///     g(t) = beta * sum_j a_ij S value_j(t).
/// The predictor for a receiver r with delay tau is the closed form of
/// iterating the observer tau steps ahead on g(0..tau-1); each further
/// distributed predictor advances it one more step on g(tau+s-1).
class ObserverNode {
public:
    ObserverNode(const ExosystemModel& exo, double beta, double total_in_weight,
                 Eigen::VectorXd xi0, int max_power);

    const Eigen::VectorXd& xi() const noexcept { return xi_; }
    const Eigen::MatrixXd& s_hat() const noexcept { return powers_[1]; }
    const Eigen::MatrixXd& s_hat_power(int t) const;

    Eigen::VectorXd coupling_input(std::span<const NeighborInput> inputs, int t) const;

    // Xi_{i,r}(k).
    Eigen::VectorXd predictor(int tau, std::span<const NeighborInput> inputs) const;

    // Xi_{i,r,s}(k) from Xi_{i,r,s-1}(k).
    Eigen::VectorXd distributed_predictor(int tau, int s, const Eigen::VectorXd& previous,
                                          std::span<const NeighborInput> inputs) const;

    MessageBundle prediction_bundle(NodeId self, long k, int tau, int horizon_w,
                                    std::span<const NeighborInput> inputs) const;

    Eigen::VectorXd next_state(std::span<const NeighborInput> inputs) const;
    void advance(Eigen::VectorXd next) { xi_ = std::move(next); }

private:
    Eigen::MatrixXd coupling_;  // beta * S
    std::vector<Eigen::MatrixXd> powers_;  // S_hat^t, t = 0..max_power
    Eigen::VectorXd xi_;
};

Eigen::VectorXd state_feedback(const AgentGains& gains, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& xi);

Eigen::VectorXd output_feedback(const AgentGains& gains, const Eigen::VectorXd& x_hat,
                                const Eigen::VectorXd& xi);

// x_hat(k+1) = A x_hat + B u + L (C x_hat - y); the estimation error then
// evolves under A + L C, the matrix observer_gain() places.
Eigen::VectorXd luenberger_step(const AgentModel& agent, const AgentGains& gains,
                                const Eigen::VectorXd& x_hat, const Eigen::VectorXd& u,
                                const Eigen::VectorXd& y);

struct RegulatedError {
    Eigen::VectorXd e;        // C x + F v
    Eigen::VectorXd x_tilde;  // x - X v
};

RegulatedError regulated_error(const AgentModel& agent, const AgentGains& gains,
                               const Eigen::MatrixXd& F, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& v);

}  // namespace predsync
