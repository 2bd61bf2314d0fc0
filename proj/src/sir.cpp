#include "predsync/sir.hpp"

#include "predsync/error.hpp"
#include "predsync/linalg.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace predsync {

namespace {

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

bool state_in_unit(const Eigen::Vector2d& x) { return in_unit(x(0)) && in_unit(x(1)); }

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::json peak_json(const Peak& p) { return {{"value", p.value}, {"step", p.step}}; }

}  // namespace

int SirParams::tau() const {
    if (!(h > 0.0) || !std::isfinite(h)) fail(ErrorCode::ValidationError, "h must be positive");
    if (!(D >= 0.0) || !std::isfinite(D)) fail(ErrorCode::ValidationError, "D must be >= 0");
    const double ratio = D / h;
    const double whole = std::round(ratio);
    if (std::abs(ratio - whole) > 1e-9 * std::max(1.0, ratio)) {
        fail(ErrorCode::ValidationError, "D / h = " + fmt17(ratio) + " is not a whole number of steps");
    }
    return static_cast<int>(whole);
}

void SirParams::validate() const {
    for (double rate : {beta_r, beta_u, gamma_r, gamma_u}) {
        if (!(rate >= 0.0) || !std::isfinite(rate)) {
            fail(ErrorCode::ValidationError, "contact and recovery rates must be finite and >= 0");
        }
    }
    if (!in_unit(m_ru)) fail(ErrorCode::ValidationError, "m_ru must lie in [0, 1]");
    for (double f : {i_r0, r_r0, i_u0, r_u0}) {
        if (!in_unit(f)) fail(ErrorCode::ValidationError, "initial fractions must lie in [0, 1]");
    }
    if (i_r0 + r_r0 > 1.0 || i_u0 + r_u0 > 1.0) {
        fail(ErrorCode::ValidationError, "i + r must not exceed 1 in either region");
    }
    if (steps < 0) fail(ErrorCode::ValidationError, "steps must be >= 0");
    (void)tau();
}

double mitigation_control(const SirParams& p, const SirState& x) {
    return (1.0 - x.i_u - x.r_u) * p.beta_u * (1.0 + p.m_ru);
}

SirState sir_step(const SirParams& p, const SirState& x, double i_r_delayed) {
    const double s_r = 1.0 - x.i_r - x.r_r;
    const double s_u = 1.0 - x.i_u - x.r_u;
    SirState next;
    next.i_r = (1.0 - p.h * p.gamma_r + p.h * s_r * p.beta_r * (1.0 - p.m_ru)) * x.i_r;
    next.r_r = x.r_r + p.h * p.gamma_r * x.i_r;
    next.i_u = (1.0 - p.h * p.gamma_u) * x.i_u + p.h * s_u * p.beta_u * p.m_ru * (i_r_delayed - x.i_u);
    next.r_u = x.r_u + p.h * (p.gamma_u + mitigation_control(p, x)) * x.i_u;
    return next;
}

SirRun simulate_sir(const SirParams& p) {
    p.validate();
    const int tau = p.tau();
    SirRun run;
    run.states.reserve(static_cast<std::size_t>(p.steps) + 1);
    run.states.push_back(SirState{p.i_r0, p.r_r0, p.i_u0, p.r_u0});
    for (int k = 0;; ++k) {
        const SirState& x = run.states.back();
        const double delayed = k >= tau ? run.states[static_cast<std::size_t>(k - tau)].i_r : 0.0;
        run.u_bar.push_back(delayed);
        run.mitigation.push_back(mitigation_control(p, x));
        if (!in_unit(x.i_r) || !in_unit(x.r_r) || !in_unit(x.i_u) || !in_unit(x.r_u)) run.excursion = true;
        if (k == p.steps) break;
        run.states.push_back(sir_step(p, x, delayed));
    }
    return run;
}

KoopmanModel fit_sir_koopman(const SirRun& run) {
    std::vector<Eigen::Vector2d> rural, urban;
    rural.reserve(run.states.size());
    urban.reserve(run.states.size());
    for (const auto& s : run.states) {
        rural.emplace_back(s.i_r, s.r_r);
        urban.emplace_back(s.i_u, s.r_u);
    }
    return fit_koopman(rural, urban, run.u_bar);
}

Eigen::RowVectorXd forecast_row(const KoopmanModel& model, int tau) {
    if (tau < 0) fail(ErrorCode::InvalidArgument, "forecast steps must be >= 0");
    return model.C_r.row(0) * matrix_power(model.A_r, tau);
}

double compensated_input(const KoopmanModel& model, const Eigen::Vector2d& x_r_delayed, int tau) {
    return forecast_row(model, tau).dot(Dictionary(Dictionary::Region::R).lift(x_r_delayed));
}

SirMode parse_sir_mode(std::string_view name) {
    if (name == "baseline") return SirMode::Baseline;
    if (name == "compensated") return SirMode::Compensated;
    fail(ErrorCode::InvalidArgument, "unknown SIR mode '" + std::string(name) + "'");
}

std::string sir_mode_name(SirMode mode) {
    return mode == SirMode::Baseline ? "baseline" : "compensated";
}

Peak peak_of(const std::vector<double>& series, int from) {
    Peak p;
    p.step = -1;
    for (std::size_t k = static_cast<std::size_t>(std::max(from, 0)); k < series.size(); ++k) {
        if (p.step < 0 || series[k] > p.value) {
            p.value = series[k];
            p.step = static_cast<int>(k);
        }
    }
    if (p.step < 0) p.step = 0;
    return p;
}

SirScenario run_sir_scenario(const SirParams& p, SirMode mode, const KoopmanModel& model) {
    p.validate();
    const int tau = p.tau();
    const Dictionary dict_r(Dictionary::Region::R);
    const Eigen::RowVectorXd row = forecast_row(model, tau);

    InputPolicy policy = [&](int k, std::span<const Eigen::Vector2d> rural) {
        if (k < tau) return 0.0;
        const Eigen::Vector2d& delayed = rural[static_cast<std::size_t>(k - tau)];
        return mode == SirMode::Baseline ? delayed(0) : row.dot(dict_r.lift(delayed));
    };

    SirScenario out;
    out.mode = mode;
    out.rollout = relift_rollout(model, Eigen::Vector2d(p.i_r0, p.r_r0), Eigen::Vector2d(p.i_u0, p.r_u0),
                                 policy, p.steps);
    std::vector<double> i_u, i_r;
    for (std::size_t k = 0; k < out.rollout.urban.size(); ++k) {
        const Eigen::Vector2d& xr = out.rollout.rural[k];
        const Eigen::Vector2d& xu = out.rollout.urban[k];
        i_r.push_back(xr(0));
        i_u.push_back(xu(0));
        out.mitigation.push_back(mitigation_control(p, SirState{xr(0), xr(1), xu(0), xu(1)}));
        if (!state_in_unit(xr) || !state_in_unit(xu)) out.excursion = true;
    }
    out.peak_i_u = peak_of(i_u);
    out.peak_i_r = peak_of(i_r);
    out.peak_i_u_after_arrival = peak_of(i_u, tau);
    return out;
}

SirComparison compare_sir(const SirParams& p) {
    SirComparison c;
    c.truth = simulate_sir(p);
    c.model = fit_sir_koopman(c.truth);
    c.baseline = run_sir_scenario(p, SirMode::Baseline, c.model);
    c.compensated = run_sir_scenario(p, SirMode::Compensated, c.model);
    c.delta = c.baseline.peak_i_u.value - c.compensated.peak_i_u.value;
    c.delta_after_arrival =
        c.baseline.peak_i_u_after_arrival.value - c.compensated.peak_i_u_after_arrival.value;
    c.fidelity.setZero();
    for (std::size_t k = 0; k < c.truth.states.size(); ++k) {
        const SirState& t = c.truth.states[k];
        const Eigen::Vector2d& xr = c.baseline.rollout.rural[k];
        const Eigen::Vector2d& xu = c.baseline.rollout.urban[k];
        const Eigen::Vector4d err(std::abs(xr(0) - t.i_r), std::abs(xr(1) - t.r_r),
                                  std::abs(xu(0) - t.i_u), std::abs(xu(1) - t.r_u));
        c.fidelity = c.fidelity.cwiseMax(err);
    }
    return c;
}

void write_sir_csv(const SirParams& p, const SirScenario& s, std::ostream& out, bool header) {
    if (header) out << "step,time,i_r,r_r,i_u,r_u,u_mitigation,u_bar,mode\n";
    const std::string mode = sir_mode_name(s.mode);
    for (std::size_t k = 0; k < s.rollout.rural.size(); ++k) {
        const Eigen::Vector2d& xr = s.rollout.rural[k];
        const Eigen::Vector2d& xu = s.rollout.urban[k];
        out << k << ',' << fmt17(static_cast<double>(k) * p.h) << ',' << fmt17(xr(0)) << ','
            << fmt17(xr(1)) << ',' << fmt17(xu(0)) << ',' << fmt17(xu(1)) << ','
            << fmt17(s.mitigation[k]) << ',' << fmt17(s.rollout.u_bar[k]) << ',' << mode << '\n';
    }
}

std::string sir_report_json(const SirParams& p, const SirComparison& c, int indent) {
    auto arm = [](const SirScenario& s) {
        return nlohmann::json{{"peak_i_u", peak_json(s.peak_i_u)},
                              {"peak_i_r", peak_json(s.peak_i_r)},
                              {"peak_i_u_after_arrival", peak_json(s.peak_i_u_after_arrival)},
                              {"excursion", s.excursion}};
    };
    nlohmann::json doc = {
        {"tau", p.tau()},
        {"steps", p.steps},
        {"baseline", arm(c.baseline)},
        {"compensated", arm(c.compensated)},
        {"delta", c.delta},
        {"delta_after_arrival", c.delta_after_arrival},
        {"fidelity", {{"i_r", c.fidelity(0)}, {"r_r", c.fidelity(1)}, {"i_u", c.fidelity(2)}, {"r_u", c.fidelity(3)}}},
        {"fit", {{"rural_residual", c.model.fit_r.residual},
                 {"urban_residual", c.model.fit_u.residual},
                 {"rural_rank", c.model.fit_r.rank},
                 {"urban_rank", c.model.fit_u.rank}}},
        {"truth_excursion", c.truth.excursion},
    };
    return doc.dump(indent);
}

}  // namespace predsync
