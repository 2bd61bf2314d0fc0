#include "predsync/simulation.hpp"

#include "predsync/error.hpp"
#include "predsync/netsim.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstdio>
#include <optional>

namespace predsync {

namespace {

using Key = std::pair<NodeId, NodeId>;

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double inf_dist(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (a - b).lpNorm<Eigen::Infinity>();
}

std::vector<std::vector<double>> rows(const std::vector<Eigen::VectorXd>& series) {
    std::vector<std::vector<double>> out;
    out.reserve(series.size());
    for (const auto& v : series) out.emplace_back(v.data(), v.data() + v.size());
    return out;
}

template <class T>
void truncate(std::vector<T>& v, std::size_t n) {
    if (v.size() > n) v.resize(n);
}

}  // namespace

SimulationMode parse_mode(std::string_view name) {
    if (name == "state_feedback") return {FeedbackKind::State, true};
    if (name == "output_feedback") return {FeedbackKind::Output, true};
    if (name == "no_compensation") return {FeedbackKind::State, false};
    fail(ErrorCode::InvalidArgument, "unknown mode '" + std::string(name) + "'");
}

std::string mode_name(SimulationMode mode) {
    if (!mode.compensate) return "no_compensation";
    return mode.feedback == FeedbackKind::State ? "state_feedback" : "output_feedback";
}

SimTrace run_simulation(const PreparedScenario& sc) {
    const int K = sc.horizon;
    if (K < 0) fail(ErrorCode::InvalidArgument, "horizon must be >= 0");
    const std::size_t n_agents = sc.graph.agent_count();
    if (sc.agents.size() != n_agents) {
        fail(ErrorCode::ShapeMismatch, "scenario lists " + std::to_string(sc.agents.size()) +
                                           " agents, graph has " + std::to_string(n_agents));
    }
    const bool comp = sc.mode.compensate;
    const bool output_fb = sc.mode.feedback == FeedbackKind::Output;
    const auto q = sc.exo.dim();

    std::vector<int> fwd(sc.graph.node_count());
    for (std::size_t j = 0; j < fwd.size(); ++j) fwd[j] = forward_horizon(sc.graph, static_cast<NodeId>(j));
    auto ship = [&](NodeId receiver) { return comp ? fwd[static_cast<std::size_t>(receiver)] : 0; };

    // Forecasts made at k are checked against states up to k + tau + w, so the
    // kernel keeps stepping that far past K.
    int lookahead = 0;
    for (const auto& e : sc.graph.edges()) lookahead = std::max(lookahead, e.delay + ship(e.receiver));
    const int total = K + lookahead;

    std::map<Key, Channel> channels;
    for (const auto& e : sc.graph.edges()) {
        channels.emplace(Key{e.sender, e.receiver}, Channel(e.sender, e.receiver, e.delay));
    }

    std::vector<ObserverNode> observers;
    std::vector<Eigen::VectorXd> x(n_agents), x_hat(n_agents);
    observers.reserve(n_agents);
    for (std::size_t a = 0; a < n_agents; ++a) {
        const NodeId node = static_cast<NodeId>(a + 1);
        double total_weight = 0.0;
        for (const auto& e : sc.graph.in_edges(node)) total_weight += e.weight;
        int max_power = 1;
        for (const auto& e : sc.graph.out_edges(node)) max_power = std::max(max_power, e.delay);
        observers.emplace_back(sc.exo, sc.beta, total_weight, sc.agents[a].xi0, max_power);
        x[a] = sc.agents[a].x0;
        x_hat[a] = output_fb ? sc.agents[a].x_hat0 : sc.agents[a].x0;
    }

    SimTrace trace;
    trace.steps = K;
    trace.mode = sc.mode;
    trace.agents.resize(n_agents);
    for (const auto& e : sc.graph.edges()) trace.sent[{e.sender, e.receiver}].reserve(total + 1);

    Eigen::VectorXd v = sc.v0;
    const auto leader_edges = sc.graph.out_edges(0);

    for (int k = 0; k <= total; ++k) {
        trace.v.push_back(v);

        for (const auto& e : leader_edges) {
            MessageBundle b;
            b.sender = 0;
            b.send_step = k;
            if (comp) {
                ExoPrediction p = exo_predictor(sc.exo, v, e.delay, ship(e.receiver));
                b.base = std::move(p.base);
                b.horizon_values = std::move(p.horizon);
            } else {
                b.base = v;
            }
            std::vector<Eigen::VectorXd> values{b.base};
            values.insert(values.end(), b.horizon_values.begin(), b.horizon_values.end());
            trace.sent[{0, e.receiver}].push_back(std::move(values));
            channels.at({0, e.receiver}).send(std::move(b), k);
        }

        for (const NodeId node : sc.order) {
            if (node == 0) continue;
            const std::size_t a = static_cast<std::size_t>(node - 1);
            const AgentSetup& ag = sc.agents[a];
            ObserverNode& obs = observers[a];
            AgentTrace& tr = trace.agents[a];

            const auto in = sc.graph.in_edges(node);
            std::vector<std::optional<MessageBundle>> arrived(in.size());
            std::vector<NeighborInput> inputs(in.size());
            Eigen::VectorXd exo_base = Eigen::VectorXd::Zero(q);
            for (std::size_t j = 0; j < in.size(); ++j) {
                arrived[j] = channels.at({in[j].sender, node}).receive(k);
                inputs[j] = NeighborInput{in[j].weight, arrived[j] ? &*arrived[j] : nullptr};
                if (in[j].sender == 0 && arrived[j]) exo_base = arrived[j]->base;
            }

            for (const auto& e : sc.graph.out_edges(node)) {
                MessageBundle b;
                if (comp) {
                    b = obs.prediction_bundle(node, k, e.delay, ship(e.receiver), inputs);
                } else {
                    b.sender = node;
                    b.send_step = k;
                    b.base = obs.xi();
                }
                std::vector<Eigen::VectorXd> values{b.base};
                values.insert(values.end(), b.horizon_values.begin(), b.horizon_values.end());
                trace.sent[{node, e.receiver}].push_back(std::move(values));
                channels.at({node, e.receiver}).send(std::move(b), k);
            }

            const Eigen::VectorXd y = ag.model.C * x[a];
            const Eigen::VectorXd u = output_fb ? output_feedback(ag.gains, x_hat[a], obs.xi())
                                                : state_feedback(ag.gains, x[a], obs.xi());
            const RegulatedError err = regulated_error(ag.model, ag.gains, sc.F, x[a], v);

            tr.x.push_back(x[a]);
            tr.x_hat.push_back(x_hat[a]);
            tr.xi.push_back(obs.xi());
            tr.y.push_back(y);
            tr.u.push_back(u);
            tr.e.push_back(err.e);
            tr.observer_error.push_back((obs.xi() - v).norm());
            tr.exo_base_received.push_back(std::move(exo_base));

            obs.advance(obs.next_state(inputs));
            if (output_fb) {
                x_hat[a] = luenberger_step(ag.model, ag.gains, x_hat[a], u, y);
            } else {
                x_hat[a] = ag.model.A * x[a] + ag.model.B * u;
            }
            x[a] = ag.model.A * x[a] + ag.model.B * u;
        }

        v = exosystem_step(sc.exo, v);
    }

    // Prediction errors against the run's own future states.
    const std::size_t rows_kept = static_cast<std::size_t>(K) + 1;
    trace.leader_prediction_error.assign(rows_kept, 0.0);
    for (auto& tr : trace.agents) tr.prediction_error.assign(tr.x.size(), 0.0);
    for (const auto& e : sc.graph.edges()) {
        const auto& sent = trace.sent.at({e.sender, e.receiver});
        for (std::size_t k = 0; k < rows_kept; ++k) {
            double worst = 0.0;
            for (std::size_t s = 0; s < sent[k].size(); ++s) {
                const std::size_t at = k + static_cast<std::size_t>(e.delay) + s;
                const Eigen::VectorXd& target =
                    e.sender == 0 ? trace.v[at]
                                  : trace.agents[static_cast<std::size_t>(e.sender - 1)].xi[at];
                worst = std::max(worst, inf_dist(sent[k][s], target));
            }
            double& slot = e.sender == 0
                               ? trace.leader_prediction_error[k]
                               : trace.agents[static_cast<std::size_t>(e.sender - 1)].prediction_error[k];
            slot = std::max(slot, worst);
        }
    }

    for (const auto& [key, ch] : channels) {
        trace.channels[key] = ChannelStats{ch.sent_count(), ch.received_count(), ch.dropped_count(),
                                           ch.in_flight()};
    }

    truncate(trace.v, rows_kept);
    for (auto& tr : trace.agents) {
        truncate(tr.x, rows_kept);
        truncate(tr.x_hat, rows_kept);
        truncate(tr.xi, rows_kept);
        truncate(tr.y, rows_kept);
        truncate(tr.u, rows_kept);
        truncate(tr.e, rows_kept);
        truncate(tr.observer_error, rows_kept);
        truncate(tr.prediction_error, rows_kept);
        truncate(tr.exo_base_received, rows_kept);
    }
    for (auto& [key, sent] : trace.sent) truncate(sent, rows_kept);

    SimMetrics& m = trace.metrics;
    const int t_max = sc.topo.t_max;
    auto step_error = [&](std::size_t k) {
        double worst = trace.leader_prediction_error[k];
        for (const auto& tr : trace.agents) worst = std::max(worst, tr.prediction_error[k]);
        return worst;
    };
    int last_bad = -1;
    for (std::size_t k = 0; k < rows_kept; ++k) {
        const double err = step_error(k);
        if (!(err <= sc.thresholds.prediction)) last_bad = static_cast<int>(k);
        if (static_cast<int>(k) >= t_max) {
            m.max_prediction_error_after_tmax = std::max(m.max_prediction_error_after_tmax, err);
        }
        if (static_cast<int>(k) <= t_max) {
            for (const auto& tr : trace.agents) {
                m.observer_error_sup_tmax = std::max(m.observer_error_sup_tmax, tr.observer_error[k]);
            }
        }
    }
    m.first_exact_step = last_bad + 1 < static_cast<int>(rows_kept) ? last_bad + 1 : -1;
    m.predictions_exact = m.first_exact_step >= 0 && m.first_exact_step <= t_max;

    m.regulated_ok = true;
    for (const auto& tr : trace.agents) {
        const double norm = tr.e.back().norm();
        m.final_regulated.push_back(norm);
        if (!(norm <= sc.thresholds.regulated)) m.regulated_ok = false;
    }
    for (std::size_t i = 0; i < trace.agents.size(); ++i) {
        for (std::size_t j = i + 1; j < trace.agents.size(); ++j) {
            m.final_sync = std::max(m.final_sync, (trace.agents[i].y.back() - trace.agents[j].y.back()).norm());
        }
    }
    m.sync_ok = m.final_sync <= sc.thresholds.sync;
    return trace;
}

void write_trace_csv(const SimTrace& trace, std::ostream& out) {
    Eigen::Index nx = trace.v.empty() ? 0 : trace.v.front().size();
    Eigen::Index ny = 0, nu = 0, ne = 0;
    for (const auto& tr : trace.agents) {
        if (tr.x.empty()) continue;
        nx = std::max(nx, tr.x.front().size());
        ny = std::max(ny, tr.y.front().size());
        nu = std::max(nu, tr.u.front().size());
        ne = std::max(ne, tr.e.front().size());
    }
    out << "step,node";
    for (Eigen::Index i = 0; i < nx; ++i) out << ",x_" << i;
    for (Eigen::Index i = 0; i < ny; ++i) out << ",y_" << i;
    for (Eigen::Index i = 0; i < nu; ++i) out << ",u_" << i;
    for (Eigen::Index i = 0; i < ne; ++i) out << ",e_" << i;
    out << ",observer_error,prediction_error\n";

    auto cells = [&](const Eigen::VectorXd* v, Eigen::Index width) {
        for (Eigen::Index i = 0; i < width; ++i) {
            out << ',';
            if (v != nullptr && i < v->size()) out << fmt17((*v)(i));
        }
    };
    for (std::size_t k = 0; k < trace.v.size(); ++k) {
        out << k << ",0";
        cells(&trace.v[k], nx);
        cells(nullptr, ny);
        cells(nullptr, nu);
        cells(nullptr, ne);
        out << ',' << fmt17(0.0) << ',' << fmt17(trace.leader_prediction_error[k]) << '\n';
        for (std::size_t a = 0; a < trace.agents.size(); ++a) {
            const AgentTrace& tr = trace.agents[a];
            out << k << ',' << a + 1;
            cells(&tr.x[k], nx);
            cells(&tr.y[k], ny);
            cells(&tr.u[k], nu);
            cells(&tr.e[k], ne);
            out << ',' << fmt17(tr.observer_error[k]) << ',' << fmt17(tr.prediction_error[k]) << '\n';
        }
    }
}

void write_trace_json(const SimTrace& trace, std::ostream& out) {
    nlohmann::json doc;
    doc["steps"] = trace.steps;
    doc["mode"] = mode_name(trace.mode);
    nlohmann::json nodes = nlohmann::json::array();
    nodes.push_back({{"node", 0},
                     {"v", rows(trace.v)},
                     {"prediction_error", trace.leader_prediction_error}});
    for (std::size_t a = 0; a < trace.agents.size(); ++a) {
        const AgentTrace& tr = trace.agents[a];
        nodes.push_back({{"node", a + 1},
                         {"x", rows(tr.x)},
                         {"x_hat", rows(tr.x_hat)},
                         {"xi", rows(tr.xi)},
                         {"y", rows(tr.y)},
                         {"u", rows(tr.u)},
                         {"e", rows(tr.e)},
                         {"observer_error", tr.observer_error},
                         {"prediction_error", tr.prediction_error}});
    }
    doc["nodes"] = std::move(nodes);
    out << doc.dump() << '\n';
}

std::string metrics_json(const SimTrace& trace, int indent) {
    const SimMetrics& m = trace.metrics;
    nlohmann::json channels = nlohmann::json::array();
    for (const auto& [key, st] : trace.channels) {
        channels.push_back({{"sender", key.first},
                            {"receiver", key.second},
                            {"sent", st.sent},
                            {"received", st.received},
                            {"dropped", st.dropped},
                            {"in_flight", st.in_flight}});
    }
    nlohmann::json doc = {
        {"mode", mode_name(trace.mode)},
        {"steps", trace.steps},
        {"first_exact_step", m.first_exact_step},
        {"max_prediction_error_after_tmax", m.max_prediction_error_after_tmax},
        {"observer_error_sup_tmax", m.observer_error_sup_tmax},
        {"final_regulated", m.final_regulated},
        {"final_sync", m.final_sync},
        {"predictions_exact", m.predictions_exact},
        {"regulated_ok", m.regulated_ok},
        {"sync_ok", m.sync_ok},
        {"channels", channels},
    };
    return doc.dump(indent);
}

}  // namespace predsync
