#include "predsync/sync.hpp"

#include "predsync/error.hpp"
#include "predsync/linalg.hpp"

#include <string>

namespace predsync {

void AgentModel::validate() const {
    if (A.rows() != A.cols()) fail(ErrorCode::NonSquare, "A must be square");
    if (B.rows() != A.rows()) fail(ErrorCode::ShapeMismatch, "B must have as many rows as A");
    if (C.cols() != A.rows()) fail(ErrorCode::ShapeMismatch, "C must have as many columns as A");
    if (!A.allFinite() || !B.allFinite() || !C.allFinite()) {
        fail(ErrorCode::NonFinite, "agent matrices must be finite");
    }
}

AgentGains assemble_gains(const AgentModel& agent, const ExosystemModel& exo,
                          const Eigen::MatrixXd& F, const Eigen::MatrixXd& K_x,
                          const Eigen::MatrixXd& L) {
    agent.validate();
    if (K_x.rows() != agent.inputs() || K_x.cols() != agent.states()) {
        fail(ErrorCode::ShapeMismatch, "K_x must be m x n");
    }
    if (L.size() > 0 && (L.rows() != agent.states() || L.cols() != agent.outputs())) {
        fail(ErrorCode::ShapeMismatch, "L must be n x p");
    }
    const RegulatorSolution reg = solve_regulator(agent.A, agent.B, agent.C, exo.S, F);
    AgentGains out;
    out.K_x = K_x;
    out.L = L;
    out.X = reg.X;
    out.U = reg.U;
    out.K_xi = reg.U - K_x * reg.X;
    out.residual_primary = reg.residual_primary;
    out.residual_output = reg.residual_output;
    return out;
}

Eigen::VectorXd exosystem_step(const ExosystemModel& exo, const Eigen::VectorXd& v) {
    return exo.S * v;
}

ExoPrediction exo_predictor(const ExosystemModel& exo, const Eigen::VectorXd& v, int tau,
                            int horizon_w) {
    if (tau < 1 || horizon_w < 0) {
        fail(ErrorCode::InvalidArgument, "exo_predictor needs tau >= 1 and horizon >= 0");
    }
    ExoPrediction out;
    out.base = matrix_power(exo.S, tau) * v;
    out.horizon.reserve(static_cast<std::size_t>(horizon_w));
    Eigen::VectorXd current = out.base;
    for (int s = 1; s <= horizon_w; ++s) {
        current = exo.S * current;
        out.horizon.push_back(current);
    }
    return out;
}

ObserverNode::ObserverNode(const ExosystemModel& exo, double beta, double total_in_weight,
                           Eigen::VectorXd xi0, int max_power)
    : coupling_(beta * exo.S), xi_(std::move(xi0)) {
    if (xi_.size() != exo.dim()) {
        fail(ErrorCode::ShapeMismatch, "observer state must have the exosystem dimension");
    }
    const Eigen::MatrixXd s_hat = (1.0 - beta * total_in_weight) * exo.S;
    powers_.reserve(static_cast<std::size_t>(std::max(max_power, 1)) + 1);
    powers_.push_back(Eigen::MatrixXd::Identity(exo.dim(), exo.dim()));
    for (int t = 1; t <= std::max(max_power, 1); ++t) powers_.push_back(powers_.back() * s_hat);
}

const Eigen::MatrixXd& ObserverNode::s_hat_power(int t) const {
    if (t < 0 || static_cast<std::size_t>(t) >= powers_.size()) {
        fail(ErrorCode::InvalidArgument, "S_hat power " + std::to_string(t) + " not precomputed");
    }
    return powers_[static_cast<std::size_t>(t)];
}

Eigen::VectorXd ObserverNode::coupling_input(std::span<const NeighborInput> inputs, int t) const {
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(xi_.size());
    for (const auto& in : inputs) {
        if (in.bundle == nullptr) continue;
        sum += in.weight * in.bundle->value(t);
    }
    return coupling_ * sum;
}

Eigen::VectorXd ObserverNode::predictor(int tau, std::span<const NeighborInput> inputs) const {
    if (tau < 1) fail(ErrorCode::InvalidArgument, "predictor delay must be >= 1");
    Eigen::VectorXd out = s_hat_power(tau) * xi_;
    for (int t = 0; t < tau; ++t) out += s_hat_power(tau - 1 - t) * coupling_input(inputs, t);
    return out;
}

Eigen::VectorXd ObserverNode::distributed_predictor(int tau, int s, const Eigen::VectorXd& previous,
                                                    std::span<const NeighborInput> inputs) const {
    if (s < 1) fail(ErrorCode::InvalidArgument, "distributed predictor index must be >= 1");
    return s_hat() * previous + coupling_input(inputs, tau + s - 1);
}

MessageBundle ObserverNode::prediction_bundle(NodeId self, long k, int tau, int horizon_w,
                                              std::span<const NeighborInput> inputs) const {
    MessageBundle out;
    out.sender = self;
    out.send_step = k;
    out.base = predictor(tau, inputs);
    out.horizon_values.reserve(static_cast<std::size_t>(horizon_w));
    const Eigen::VectorXd* previous = &out.base;
    for (int s = 1; s <= horizon_w; ++s) {
        out.horizon_values.push_back(distributed_predictor(tau, s, *previous, inputs));
        previous = &out.horizon_values.back();
    }
    return out;
}

Eigen::VectorXd ObserverNode::next_state(std::span<const NeighborInput> inputs) const {
    return s_hat() * xi_ + coupling_input(inputs, 0);
}

Eigen::VectorXd state_feedback(const AgentGains& gains, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& xi) {
    return gains.K_x * x + gains.K_xi * xi;
}

Eigen::VectorXd output_feedback(const AgentGains& gains, const Eigen::VectorXd& x_hat,
                                const Eigen::VectorXd& xi) {
    return gains.K_x * x_hat + gains.K_xi * xi;
}

Eigen::VectorXd luenberger_step(const AgentModel& agent, const AgentGains& gains,
                                const Eigen::VectorXd& x_hat, const Eigen::VectorXd& u,
                                const Eigen::VectorXd& y) {
    Eigen::VectorXd next = agent.A * x_hat + agent.B * u;
    if (gains.has_observer()) next += gains.L * (agent.C * x_hat - y);
    return next;
}

RegulatedError regulated_error(const AgentModel& agent, const AgentGains& gains,
                               const Eigen::MatrixXd& F, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& v) {
    return RegulatedError{agent.C * x + F * v, x - gains.X * v};
}

}  // namespace predsync
