#include "predsync/error.hpp"
#include "predsync/sir.hpp"
#include "support.hpp"

#include <doctest.h>

#include <sstream>

using namespace predsync;

namespace {

SirParams short_params() {
    SirParams p;
    p.steps = 3000;
    return p;
}

std::vector<double> urban_i(const SirScenario& s) {
    std::vector<double> out;
    for (const auto& x : s.rollout.urban) out.push_back(x(0));
    return out;
}

}  // namespace

TEST_CASE("parameter validation") {
    SirParams p;
    CHECK(p.tau() == 1000);
    p.D = 0.015;
    CHECK_THROWS_AS(p.tau(), Error);
    p.D = 0.0;
    CHECK(p.tau() == 0);
    p.m_ru = 1.5;
    CHECK_THROWS_AS(p.validate(), Error);
    p.m_ru = 0.5;
    p.i_r0 = 0.7;
    p.r_r0 = 0.5;
    CHECK_THROWS_AS(p.validate(), Error);
    CHECK(parse_sir_mode("compensated") == SirMode::Compensated);
    CHECK(sir_mode_name(SirMode::Baseline) == "baseline");
    CHECK_THROWS_AS(parse_sir_mode("both"), Error);
}

TEST_CASE("euler step") {
    const SirParams p;
    const SirState free{0.0, 0.3, 0.0, 0.2};
    CHECK(sir_step(p, free, 0.0) == free);

    SirParams decoupled;
    decoupled.m_ru = 0.0;
    const SirState x{0.4, 0.1, 0.3, 0.2};
    const SirState next = sir_step(decoupled, x, 0.9);
    CHECK(next.i_u == doctest::Approx((1.0 - decoupled.h * decoupled.gamma_u) * x.i_u).epsilon(1e-15));

    // Hand evaluation of one step at the default parameters.
    const SirState y = sir_step(p, x, 0.25);
    const double s_r = 1 - 0.4 - 0.1, s_u = 1 - 0.3 - 0.2;
    CHECK(y.i_r == doctest::Approx((1 - 0.01 * 0.35 + 0.01 * s_r * 0.35 * 0.05) * 0.4));
    CHECK(y.r_r == doctest::Approx(0.1 + 0.01 * 0.35 * 0.4));
    CHECK(y.i_u == doctest::Approx((1 - 0.01 * 0.35) * 0.3 + 0.01 * s_u * 0.35 * 0.95 * (0.25 - 0.3)));
    CHECK(y.r_u == doctest::Approx(0.2 + 0.01 * (0.35 + s_u * 0.35 * 1.95) * 0.3));
    CHECK(mitigation_control(p, x) == doctest::Approx(s_u * 0.35 * 1.95));
}

TEST_CASE("nonlinear run invariants") {
    const SirRun run = simulate_sir(support::default_sir());
    REQUIRE(run.states.size() == 10001);
    CHECK_FALSE(run.excursion);
    for (std::size_t k = 1; k < run.states.size(); ++k) {
        CHECK(run.states[k].r_r >= run.states[k - 1].r_r);
        CHECK(run.states[k].r_u >= run.states[k - 1].r_u);
    }
    for (std::size_t k = 0; k < 1000; ++k) CHECK(run.u_bar[k] == 0.0);
    CHECK(run.u_bar[1500] == run.states[500].i_r);
}

TEST_CASE("decoupled urban infection decays") {
    SirParams p = short_params();
    p.m_ru = 0.0;
    const SirRun run = simulate_sir(p);
    for (std::size_t k = 1; k < run.states.size(); ++k) CHECK(run.states[k].i_u < run.states[k - 1].i_u);
}

TEST_CASE("compensated input") {
    KoopmanModel id;
    id.A_r = Eigen::MatrixXd::Identity(9, 9);
    id.C_r = readout_matrix(9);
    const Eigen::Vector2d x(0.37, 0.2);
    CHECK(compensated_input(id, x, 50) == doctest::Approx(0.37));

    const SirParams p = support::default_sir();
    const SirRun run = simulate_sir(p);
    const KoopmanModel m = fit_sir_koopman(run);
    CHECK(compensated_input(m, x, 0) == x(0));

    const int tau = p.tau();
    double worst = 0.0;
    for (int k = tau; k <= p.steps; k += 10) {
        const SirState& d = run.states[static_cast<std::size_t>(k - tau)];
        const double u = compensated_input(m, Eigen::Vector2d(d.i_r, d.r_r), tau);
        worst = std::max(worst, std::abs(u - run.states[static_cast<std::size_t>(k)].i_r));
    }
    CHECK(worst <= 0.01);
}

TEST_CASE("peak metric") {
    const std::vector<double> series{0.1, 0.5, 0.3, 0.5, 0.2};
    const Peak p = peak_of(series);
    CHECK(p.value == 0.5);
    CHECK(p.step == 1);
    CHECK(peak_of(series, 2).step == 3);
    CHECK(peak_of(std::vector<double>{0.0, 0.0}).step == 0);

    auto longer = series;
    longer.insert(longer.end(), {0.1, 0.05, 0.0});
    CHECK(peak_of(longer).value == p.value);
    CHECK(peak_of(longer).step == p.step);
}

TEST_CASE("scenario arms agree before the first arrival") {
    const SirParams p = short_params();
    const KoopmanModel m = fit_sir_koopman(simulate_sir(p));
    const SirScenario base = run_sir_scenario(p, SirMode::Baseline, m);
    const SirScenario comp = run_sir_scenario(p, SirMode::Compensated, m);
    const int tau = p.tau();
    for (int k = 0; k <= tau; ++k) {
        CHECK(base.rollout.urban[static_cast<std::size_t>(k)] == comp.rollout.urban[static_cast<std::size_t>(k)]);
    }
    for (std::size_t k = 0; k < base.rollout.rural.size(); ++k) CHECK(base.rollout.rural[k] == comp.rollout.rural[k]);
    CHECK(base.rollout.urban[static_cast<std::size_t>(tau) + 1] != comp.rollout.urban[static_cast<std::size_t>(tau) + 1]);
}

TEST_CASE("no delay makes compensation a no-op") {
    SirParams p = short_params();
    p.D = 0.0;
    const SirComparison c = compare_sir(p);
    CHECK(c.delta == 0.0);
    for (std::size_t k = 0; k < c.baseline.rollout.urban.size(); ++k) {
        CHECK(c.baseline.rollout.urban[k] == c.compensated.rollout.urban[k]);
    }
}

TEST_CASE("zero infection stays at zero") {
    SirParams p = short_params();
    p.i_r0 = 0.0;
    p.i_u0 = 0.0;
    const SirComparison c = compare_sir(p);
    for (const SirScenario* s : {&c.baseline, &c.compensated}) {
        CHECK(std::abs(s->peak_i_u.value) <= 1e-12);
        const auto series = urban_i(*s);
        CHECK(*std::max_element(series.begin(), series.end()) <= 1e-12);
    }
    CHECK(c.baseline.peak_i_u.step == 0);
}

TEST_CASE("without migration compensation changes nothing") {
    SirParams p = short_params();
    p.m_ru = 0.0;
    const SirComparison c = compare_sir(p);
    CHECK(std::abs(c.delta) <= 1e-6);
}

TEST_CASE("koopman rollout tracks the nonlinear model") {
    const SirComparison c = compare_sir(support::default_sir());
    for (int i = 0; i < 4; ++i) CHECK(c.fidelity(i) <= 0.02);
    CHECK_FALSE(c.baseline.excursion);
    CHECK(c.delta_after_arrival > 0.0);
    CHECK(c.compensated.peak_i_u_after_arrival.step >= 1000);
}

TEST_CASE("trace csv layout") {
    SirParams p = short_params();
    p.steps = 5;
    p.D = 0.02;
    const KoopmanModel m = fit_sir_koopman(simulate_sir(short_params()));
    const SirScenario s = run_sir_scenario(p, SirMode::Compensated, m);
    std::ostringstream out;
    write_sir_csv(p, s, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "step,time,i_r,r_r,i_u,r_u,u_mitigation,u_bar,mode");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(line.substr(line.rfind(',') + 1) == "compensated");
    }
    CHECK(rows == 6);
}
