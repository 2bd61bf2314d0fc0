#pragma once

// Centralized reference for the observer/predictor network.
//
// Every quantity is kept in one global time-indexed table. A transmitted
// forecast is produced by literally stepping the sender's observer forward on
// the histories it has received, and the leader's forecasts by repeated
// multiplication, so nothing here shares code with the engine.

#include "oracles/paths.hpp"

#include <Eigen/Dense>

#include <map>
#include <utility>
#include <vector>

namespace oracle {

struct WeightedEdge {
    int from;
    int to;
    double weight;
    int delay;
};

struct ObserverRun {
    std::vector<Eigen::VectorXd> v;                // v[k]
    std::vector<std::vector<Eigen::VectorXd>> xi;  // xi[agent][k], agent = node - 1
    // (from, to) -> [k] -> forecasts s = 0..w
    std::map<std::pair<int, int>, std::vector<std::vector<Eigen::VectorXd>>> sent;
    std::map<int, int> horizon;  // receiver -> w
};

inline ObserverRun run_observers(const Eigen::MatrixXd& S, double beta, const std::vector<WeightedEdge>& edges,
                                 int node_count, const Eigen::VectorXd& v0,
                                 const std::vector<Eigen::VectorXd>& xi0, int steps) {
    std::vector<RawEdge> raw;
    for (const auto& e : edges) raw.push_back({e.from, e.to, e.delay});

    ObserverRun run;
    for (int j = 0; j < node_count; ++j) run.horizon[j] = longest_from(raw, j, node_count);

    const auto q = S.rows();
    std::vector<Eigen::MatrixXd> s_hat(static_cast<std::size_t>(node_count));
    for (int i = 1; i < node_count; ++i) {
        double total = 0.0;
        for (const auto& e : edges) {
            if (e.to == i) total += e.weight;
        }
        s_hat[static_cast<std::size_t>(i)] = S - beta * total * S;
    }

    run.v.push_back(v0);
    run.xi.resize(static_cast<std::size_t>(node_count - 1));
    for (int i = 1; i < node_count; ++i) run.xi[static_cast<std::size_t>(i - 1)].push_back(xi0[static_cast<std::size_t>(i - 1)]);

    for (int k = 0; k <= steps; ++k) {
        const auto kk = static_cast<std::size_t>(k);

        for (const auto& e : edges) {
            if (e.from != 0) continue;
            std::vector<Eigen::VectorXd> values;
            Eigen::VectorXd z = run.v[kk];
            for (int t = 0; t < e.delay; ++t) z = S * z;
            values.push_back(z);
            for (int s = 1; s <= run.horizon[e.to]; ++s) {
                z = S * z;
                values.push_back(z);
            }
            run.sent[{0, e.to}].push_back(std::move(values));
        }

        for (int i = 1; i < node_count; ++i) {
            const auto ii = static_cast<std::size_t>(i - 1);
            // received[t]: coupling input built from the t-th forecast of
            // every bundle that arrives at k.
            auto received = [&](int t) {
                Eigen::VectorXd sum = Eigen::VectorXd::Zero(q);
                for (const auto& e : edges) {
                    if (e.to != i || k < e.delay) continue;
                    const auto& bundle = run.sent.at({e.from, i})[static_cast<std::size_t>(k - e.delay)];
                    sum += beta * e.weight * (S * bundle.at(static_cast<std::size_t>(t)));
                }
                return sum;
            };
            const Eigen::VectorXd& now = run.xi[ii][kk];
            for (const auto& e : edges) {
                if (e.from != i) continue;
                std::vector<Eigen::VectorXd> values;
                Eigen::VectorXd z = now;
                const int last = e.delay + run.horizon[e.to];
                for (int t = 0; t < last; ++t) {
                    z = s_hat[static_cast<std::size_t>(i)] * z + received(t);
                    if (t >= e.delay - 1) values.push_back(z);
                }
                run.sent[{i, e.to}].push_back(std::move(values));
            }
            run.xi[ii].push_back(s_hat[static_cast<std::size_t>(i)] * now + received(0));
        }
        run.v.push_back(S * run.v[kk]);
    }
    return run;
}

}  // namespace oracle
