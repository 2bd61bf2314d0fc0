#include "predsync/config.hpp"
#include "predsync/error.hpp"
#include "support.hpp"

#include <doctest.h>

#include <string>

using namespace predsync;

namespace {

const char* kMinimal = R"(
name = "tiny"
horizon = 60
[exosystem]
S = [[1.0]]
v0 = [2.0]
[gains]
beta = 0.5
F = [[-1.0]]
[[agents]]
A = [[0.5]]
B = [[1.0]]
C = [[1.0]]
poles = [0.1]
x0 = [0.0]
[[edges]]
from = 0
to = 1
delay = 2
)";

struct Failure {
    ErrorCode code;
    std::string message;
};

Failure parse_failure(const std::string& text, FileFormat fmt = FileFormat::Toml) {
    try {
        parse_scenario(text, fmt);
    } catch (const Error& e) {
        return {e.code(), e.what()};
    }
    FAIL("parse accepted bad input");
    return {};
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
    const auto at = text.find(from);
    REQUIRE(at != std::string::npos);
    return text.replace(at, from.size(), to);
}

bool same_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
}

}  // namespace

TEST_CASE("four-agent scenario loads") {
    const Scenario sc = support::four_agent_scenario();
    CHECK(sc.agents.size() == 4);
    CHECK(sc.edges.size() == 7);
    CHECK(sc.beta == 0.25);
    CHECK(sc.horizon == 800);
    CHECK((sc.S - support::rotation()).norm() <= 1e-15);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(same_matrix(sc.agents[i].A, support::agent_matrix(support::agent_alphas()[i])));
    }
}

TEST_CASE("json round trip keeps matrices bit-equal") {
    const Scenario sc = support::four_agent_scenario();
    const Scenario back = parse_scenario(scenario_to_json(sc), FileFormat::Json);
    CHECK(same_matrix(back.S, sc.S));
    CHECK(back.v0 == sc.v0);
    CHECK(same_matrix(back.F, sc.F));
    CHECK(back.beta == sc.beta);
    CHECK(back.mode == sc.mode);
    CHECK(back.horizon == sc.horizon);
    REQUIRE(back.agents.size() == sc.agents.size());
    for (std::size_t i = 0; i < sc.agents.size(); ++i) {
        CHECK(same_matrix(back.agents[i].A, sc.agents[i].A));
        CHECK(same_matrix(back.agents[i].B, sc.agents[i].B));
        CHECK(same_matrix(back.agents[i].C, sc.agents[i].C));
        CHECK(same_matrix(*back.agents[i].K_x, *sc.agents[i].K_x));
        CHECK(*back.agents[i].observer_poles == *sc.agents[i].observer_poles);
        CHECK(back.agents[i].x0 == sc.agents[i].x0);
    }
    REQUIRE(back.edges.size() == sc.edges.size());
    for (std::size_t i = 0; i < sc.edges.size(); ++i) {
        CHECK(back.edges[i].sender == sc.edges[i].sender);
        CHECK(back.edges[i].receiver == sc.edges[i].receiver);
        CHECK(back.edges[i].weight == sc.edges[i].weight);
        CHECK(back.edges[i].delay == sc.edges[i].delay);
    }
    CHECK(scenario_to_json(back) == scenario_to_json(sc));
}

TEST_CASE("complex pole pairs") {
    const std::string text = replace(replace(kMinimal, "A = [[0.5]]", "A = [[0.5, 1.0], [0.0, 1.2]]"),
                                     "poles = [0.1]", "poles = [[0.2, 0.3], [0.2, -0.3]]");
    std::string fixed = replace(text, "B = [[1.0]]", "B = [[0.0], [1.0]]");
    fixed = replace(fixed, "C = [[1.0]]", "C = [[1.0, 0.0]]");
    fixed = replace(fixed, "x0 = [0.0]", "x0 = [0.0, 0.0]");
    const Scenario sc = parse_scenario(fixed, FileFormat::Toml);
    REQUIRE(sc.agents[0].poles.has_value());
    CHECK((*sc.agents[0].poles)[0] == std::complex<double>(0.2, 0.3));
    const CheckReport rep = check_scenario(sc);
    CHECK(rep.ok());
    CHECK(rep.agents[0].closed_loop_radius == doctest::Approx(std::abs(std::complex<double>(0.2, 0.3))));
}

TEST_CASE("field-path parse errors") {
    auto f = parse_failure(replace(kMinimal, "delay = 2", "delay = 0"));
    CHECK(f.code == ErrorCode::ParseError);
    CHECK(f.message.find("edges[0].delay") != std::string::npos);

    f = parse_failure(replace(kMinimal, "A = [[0.5]]", "A = [[0.5, \"x\"]]"));
    CHECK(f.message.find("agents[0].A[0][1]") != std::string::npos);

    f = parse_failure(replace(kMinimal, "beta = 0.5", "betta = 0.5"));
    CHECK(f.code == ErrorCode::ParseError);
    CHECK(f.message.find("gains") != std::string::npos);

    f = parse_failure(replace(kMinimal, "name = \"tiny\"", "name = \"tiny\"\nmode = \"fast\""));
    CHECK(f.message.find("mode") != std::string::npos);

    f = parse_failure(replace(kMinimal, "S = [[1.0]]", "S = [[1.0]]\nrotation = 1.2"));
    CHECK(f.message.find("exosystem") != std::string::npos);

    f = parse_failure("this is = = not toml");
    CHECK(f.code == ErrorCode::ParseError);
    f = parse_failure("{\"name\": 3}", FileFormat::Json);
    CHECK(f.code == ErrorCode::ParseError);
}

TEST_CASE("check report on the four-agent scenario") {
    const CheckReport rep = check_scenario(support::four_agent_scenario());
    CHECK(rep.ok());
    CHECK(rep.t_max == 33);
    CHECK(std::abs(rep.coupling_lhs - 0.75) <= 1e-9);
    CHECK(rep.coupling_ok);
    CHECK(rep.order == std::vector<NodeId>{0, 1, 2, 3, 4});
    for (const auto& a : rep.agents) {
        CHECK(a.closed_loop_radius < 1.0);
        REQUIRE(a.observer_radius.has_value());
        CHECK(*a.observer_radius == doctest::Approx(0.5));
        CHECK(a.residual_primary <= 1e-9);
        CHECK(a.residual_output <= 1e-9);
    }
    for (const auto& [edge, range] : rep.horizons) {
        if (edge.sender == 0 && edge.receiver == 1) CHECK(range.last == 21);
        if (edge.sender == 1 && edge.receiver == 2) CHECK(range.last == 9);
    }
    const std::string json = check_report_json(rep);
    CHECK(json.find("\"t_max\": 33") != std::string::npos);
}

TEST_CASE("check report failures") {
    Scenario sc = support::four_agent_scenario();
    sc.beta = 1.0;
    CheckReport rep = check_scenario(sc);
    CHECK_FALSE(rep.ok());
    CHECK(std::abs(rep.coupling_lhs - 2.0) <= 1e-9);
    REQUIRE(rep.failures.size() == 1);
    CHECK(rep.failures[0].find("coupling") != std::string::npos);
    CHECK_THROWS_AS(prepare(sc), Error);

    sc = support::four_agent_scenario();
    sc.agents[1].K_x = Eigen::MatrixXd(Eigen::RowVector3d(1, 1, 1));
    rep = check_scenario(sc);
    CHECK_FALSE(rep.ok());
    CHECK(rep.failures[0].find("agents[1]") != std::string::npos);

    sc = support::four_agent_scenario();
    sc.mode = "output_feedback";
    sc.agents[2].observer_poles.reset();
    rep = check_scenario(sc);
    CHECK_FALSE(rep.ok());

    sc = support::four_agent_scenario();
    sc.edges.push_back(Edge{4, 1, 1.0, 2});
    try {
        check_scenario(sc);
        FAIL("cycle accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::CycleDetected);
    }

    sc = support::four_agent_scenario();
    sc.agents[0].x0 = Eigen::Vector2d(1, 2);
    try {
        check_scenario(sc);
        FAIL("bad shape accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ShapeMismatch);
        CHECK(std::string(e.what()).find("agents[0].x0") != std::string::npos);
    }
}

TEST_CASE("prepare synthesizes gains from poles") {
    const Scenario sc = parse_scenario(kMinimal, FileFormat::Toml);
    const PreparedScenario p = prepare(sc);
    REQUIRE(p.agents.size() == 1);
    CHECK(p.agents[0].gains.K_x(0, 0) == doctest::Approx(-0.4));
    CHECK(p.agents[0].xi0.norm() == 0.0);
    CHECK(p.horizon == 60);
    const SimTrace tr = run_simulation(p);
    CHECK(tr.metrics.regulated_ok);
    CHECK(tr.metrics.predictions_exact);
}

TEST_CASE("thresholds are configurable") {
    const std::string text =
        std::string(kMinimal) + "[thresholds]\nsync = 0.5\nregulated = 0.25\nprediction = 1e-6\n";
    const Scenario sc = parse_scenario(text, FileFormat::Toml);
    CHECK(sc.thresholds.sync == 0.5);
    CHECK(sc.thresholds.regulated == 0.25);
    CHECK(sc.thresholds.prediction == 1e-6);
}

TEST_CASE("sir parameters") {
    const SirParams p = support::default_sir();
    CHECK(p.m_ru == 0.95);
    CHECK(p.tau() == 1000);
    CHECK(p.steps == 10000);
    const SirParams back = parse_sir_params(sir_params_to_json(p), FileFormat::Json);
    CHECK(back.D == p.D);
    CHECK(back.i_u0 == p.i_u0);

    const SirParams defaults = parse_sir_params("", FileFormat::Toml);
    CHECK(defaults.beta_r == 0.35);
    CHECK_THROWS_AS(parse_sir_params("[sir]\nD = 0.015\n", FileFormat::Toml), Error);
    CHECK_THROWS_AS(parse_sir_params("[sir]\nbogus = 1\n", FileFormat::Toml), Error);
}

TEST_CASE("missing files are io errors") {
    try {
        load_scenario("/nonexistent/scenario.toml");
        FAIL("missing file accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IoError);
    }
}
