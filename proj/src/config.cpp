#include "predsync/config.hpp"

#include "predsync/error.hpp"
#include "predsync/linalg.hpp"

#include "json.hpp"
#include "toml.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace predsync {

using nlohmann::json;

namespace {

json toml_to_json(const toml::node& node, const std::string& path) {
    if (const auto* t = node.as_table()) {
        json out = json::object();
        for (auto&& [key, value] : *t) {
            const std::string k(key.str());
            out[k] = toml_to_json(value, path.empty() ? k : path + "." + k);
        }
        return out;
    }
    if (const auto* a = node.as_array()) {
        json out = json::array();
        std::size_t i = 0;
        for (const auto& value : *a) out.push_back(toml_to_json(value, path + "[" + std::to_string(i++) + "]"));
        return out;
    }
    if (const auto* v = node.as_integer()) return v->get();
    if (const auto* v = node.as_floating_point()) return v->get();
    if (const auto* v = node.as_boolean()) return v->get();
    if (const auto* v = node.as_string()) return v->get();
    fail(ErrorCode::ParseError, path + ": unsupported TOML value type");
}

json parse_document(const std::string& text, FileFormat format) {
    if (format == FileFormat::Auto) {
        const auto first = text.find_first_not_of(" \t\r\n");
        format = first != std::string::npos && text[first] == '{' ? FileFormat::Json : FileFormat::Toml;
    }
    if (format == FileFormat::Json) {
        try {
            return json::parse(text);
        } catch (const json::parse_error& e) {
            fail(ErrorCode::ParseError, std::string("json: ") + e.what());
        }
    }
    try {
        const toml::table table = toml::parse(text);
        return toml_to_json(table, "");
    } catch (const toml::parse_error& e) {
        std::ostringstream msg;
        msg << "toml line " << e.source().begin.line << ": " << e.description();
        fail(ErrorCode::ParseError, msg.str());
    }
}

FileFormat format_for(const std::string& path) {
    auto ends_with = [&](std::string_view suffix) {
        return path.size() >= suffix.size() && path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    if (ends_with(".json")) return FileFormat::Json;
    if (ends_with(".toml")) return FileFormat::Toml;
    return FileFormat::Auto;
}

std::string at(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

std::string idx(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) fail(ErrorCode::ParseError, (path.empty() ? "document" : path) + ": expected a table");
}

void allow_keys(const json& j, const std::string& path, std::initializer_list<std::string_view> keys) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(keys.begin(), keys.end(), it.key()) == keys.end()) {
            fail(ErrorCode::ParseError, at(path, it.key()) + ": unknown field");
        }
    }
}

const json& need(const json& j, const std::string& path, const std::string& key) {
    if (!j.contains(key)) fail(ErrorCode::ParseError, at(path, key) + ": missing");
    return j.at(key);
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(ErrorCode::ParseError, path + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(ErrorCode::ParseError, path + ": must be finite");
    return v;
}

long long integer(const json& j, const std::string& path) {
    if (j.is_number_integer()) return j.get<long long>();
    if (j.is_number_float()) {
        const double v = j.get<double>();
        if (std::isfinite(v) && v == std::floor(v)) return static_cast<long long>(v);
    }
    fail(ErrorCode::ParseError, path + ": expected an integer");
}

Eigen::VectorXd vector(const json& j, const std::string& path) {
    if (!j.is_array()) fail(ErrorCode::ParseError, path + ": expected an array of numbers");
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], idx(path, i));
    return v;
}

Eigen::MatrixXd matrix(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(ErrorCode::ParseError, path + ": expected a non-empty nested array");
    if (!j.front().is_array()) fail(ErrorCode::ParseError, idx(path, 0) + ": expected a row array");
    const std::size_t cols = j.front().size();
    if (cols == 0) fail(ErrorCode::ParseError, idx(path, 0) + ": empty row");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < j.size(); ++r) {
        const json& row = j[r];
        if (!row.is_array()) fail(ErrorCode::ParseError, idx(path, r) + ": expected a row array");
        if (row.size() != cols) {
            fail(ErrorCode::ParseError, idx(path, r) + ": has " + std::to_string(row.size()) +
                                            " entries, expected " + std::to_string(cols));
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = number(row[c], idx(idx(path, r), c));
        }
    }
    return m;
}

PoleList poles(const json& j, const std::string& path) {
    if (!j.is_array()) fail(ErrorCode::ParseError, path + ": expected an array of poles");
    PoleList out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const json& p = j[i];
        if (p.is_array()) {
            if (p.size() != 2) fail(ErrorCode::ParseError, idx(path, i) + ": complex pole must be [re, im]");
            out.emplace_back(number(p[0], idx(idx(path, i), 0)), number(p[1], idx(idx(path, i), 1)));
        } else {
            out.emplace_back(number(p, idx(path, i)), 0.0);
        }
    }
    return out;
}

json rows_json(const Eigen::MatrixXd& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        out.push_back(std::move(row));
    }
    return out;
}

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json poles_json(const PoleList& list) {
    json out = json::array();
    for (const auto& p : list) {
        if (p.imag() == 0.0) {
            out.push_back(p.real());
        } else {
            out.push_back(json::array({p.real(), p.imag()}));
        }
    }
    return out;
}

Eigen::MatrixXd rotation(double omega) {
    const double c = std::cos(omega * M_PI);
    const double s = std::sin(omega * M_PI);
    Eigen::MatrixXd S(2, 2);
    S << c, s, -s, c;
    return S;
}

AgentConfig parse_agent(const json& j, const std::string& path) {
    require_object(j, path);
    allow_keys(j, path, {"A", "B", "C", "K_x", "poles", "L", "observer_poles", "x0", "xi0", "x_hat0"});
    AgentConfig a;
    a.A = matrix(need(j, path, "A"), at(path, "A"));
    a.B = matrix(need(j, path, "B"), at(path, "B"));
    a.C = matrix(need(j, path, "C"), at(path, "C"));
    if (j.contains("K_x")) a.K_x = matrix(j["K_x"], at(path, "K_x"));
    if (j.contains("poles")) a.poles = poles(j["poles"], at(path, "poles"));
    if (j.contains("L")) a.L = matrix(j["L"], at(path, "L"));
    if (j.contains("observer_poles")) a.observer_poles = poles(j["observer_poles"], at(path, "observer_poles"));
    a.x0 = vector(need(j, path, "x0"), at(path, "x0"));
    if (j.contains("xi0")) a.xi0 = vector(j["xi0"], at(path, "xi0"));
    if (j.contains("x_hat0")) a.x_hat0 = vector(j["x_hat0"], at(path, "x_hat0"));
    return a;
}

Edge parse_edge(const json& j, const std::string& path) {
    require_object(j, path);
    allow_keys(j, path, {"from", "to", "weight", "delay"});
    Edge e;
    e.sender = static_cast<NodeId>(integer(need(j, path, "from"), at(path, "from")));
    e.receiver = static_cast<NodeId>(integer(need(j, path, "to"), at(path, "to")));
    e.weight = j.contains("weight") ? number(j["weight"], at(path, "weight")) : 1.0;
    const long long delay = integer(need(j, path, "delay"), at(path, "delay"));
    if (delay < 1) fail(ErrorCode::ParseError, at(path, "delay") + ": must be >= 1 step");
    e.delay = static_cast<int>(delay);
    if (!(e.weight > 0.0)) fail(ErrorCode::ParseError, at(path, "weight") + ": must be > 0");
    return e;
}

Scenario scenario_from_json(const json& doc) {
    require_object(doc, "");
    allow_keys(doc, "", {"name", "mode", "horizon", "seed", "exosystem", "gains", "agents", "edges", "thresholds"});
    Scenario sc;
    if (doc.contains("name")) {
        if (!doc["name"].is_string()) fail(ErrorCode::ParseError, "name: expected a string");
        sc.name = doc["name"].get<std::string>();
    }
    if (doc.contains("mode")) {
        if (!doc["mode"].is_string()) fail(ErrorCode::ParseError, "mode: expected a string");
        sc.mode = doc["mode"].get<std::string>();
        try {
            (void)parse_mode(sc.mode);
        } catch (const Error& e) {
            fail(ErrorCode::ParseError, std::string("mode: ") + e.what());
        }
    }
    if (doc.contains("horizon")) {
        const long long k = integer(doc["horizon"], "horizon");
        if (k < 0) fail(ErrorCode::ParseError, "horizon: must be >= 0");
        sc.horizon = static_cast<int>(k);
    }
    if (doc.contains("seed")) {
        const long long s = integer(doc["seed"], "seed");
        if (s < 0) fail(ErrorCode::ParseError, "seed: must be >= 0");
        sc.seed = static_cast<std::uint64_t>(s);
    }

    const json& exo = need(doc, "", "exosystem");
    require_object(exo, "exosystem");
    allow_keys(exo, "exosystem", {"S", "rotation", "v0"});
    if (exo.contains("S") == exo.contains("rotation")) {
        fail(ErrorCode::ParseError, "exosystem: give exactly one of S or rotation");
    }
    sc.S = exo.contains("S") ? matrix(exo["S"], "exosystem.S") : rotation(number(exo["rotation"], "exosystem.rotation"));
    sc.v0 = vector(need(exo, "exosystem", "v0"), "exosystem.v0");

    const json& gains = need(doc, "", "gains");
    require_object(gains, "gains");
    allow_keys(gains, "gains", {"beta", "F"});
    sc.beta = number(need(gains, "gains", "beta"), "gains.beta");
    sc.F = matrix(need(gains, "gains", "F"), "gains.F");

    const json& agents = need(doc, "", "agents");
    if (!agents.is_array() || agents.empty()) fail(ErrorCode::ParseError, "agents: expected a non-empty array");
    for (std::size_t i = 0; i < agents.size(); ++i) sc.agents.push_back(parse_agent(agents[i], idx("agents", i)));

    const json& edges = need(doc, "", "edges");
    if (!edges.is_array()) fail(ErrorCode::ParseError, "edges: expected an array");
    for (std::size_t i = 0; i < edges.size(); ++i) sc.edges.push_back(parse_edge(edges[i], idx("edges", i)));

    if (doc.contains("thresholds")) {
        const json& t = doc["thresholds"];
        require_object(t, "thresholds");
        allow_keys(t, "thresholds", {"prediction", "sync", "regulated"});
        if (t.contains("prediction")) sc.thresholds.prediction = number(t["prediction"], "thresholds.prediction");
        if (t.contains("sync")) sc.thresholds.sync = number(t["sync"], "thresholds.sync");
        if (t.contains("regulated")) sc.thresholds.regulated = number(t["regulated"], "thresholds.regulated");
    }
    return sc;
}

void expect_shape(const Eigen::MatrixXd& m, Eigen::Index rows, Eigen::Index cols, const std::string& path) {
    if (m.rows() != rows || m.cols() != cols) {
        fail(ErrorCode::ShapeMismatch, path + ": is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                           ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
    }
}

void expect_size(const Eigen::VectorXd& v, Eigen::Index n, const std::string& path) {
    if (v.size() != n) {
        fail(ErrorCode::ShapeMismatch,
             path + ": has " + std::to_string(v.size()) + " entries, expected " + std::to_string(n));
    }
}

void check_shapes(const Scenario& sc) {
    if (sc.S.rows() != sc.S.cols()) fail(ErrorCode::NonSquare, "exosystem.S: must be square");
    const auto q = sc.S.rows();
    expect_size(sc.v0, q, "exosystem.v0");
    const auto p = sc.F.rows();
    expect_shape(sc.F, p, q, "gains.F");
    for (std::size_t i = 0; i < sc.agents.size(); ++i) {
        const AgentConfig& a = sc.agents[i];
        const std::string path = idx("agents", i);
        if (a.A.rows() != a.A.cols()) fail(ErrorCode::NonSquare, path + ".A: must be square");
        const auto n = a.A.rows();
        const auto m = a.B.cols();
        expect_shape(a.B, n, m, path + ".B");
        expect_shape(a.C, p, n, path + ".C");
        if (a.K_x) expect_shape(*a.K_x, m, n, path + ".K_x");
        if (a.L) expect_shape(*a.L, n, p, path + ".L");
        expect_size(a.x0, n, path + ".x0");
        if (a.xi0) expect_size(*a.xi0, q, path + ".xi0");
        if (a.x_hat0) expect_size(*a.x_hat0, n, path + ".x_hat0");
    }
}

DelayGraph build_graph(const Scenario& sc) {
    DelayGraph g(sc.agents.size() + 1);
    for (const auto& e : sc.edges) g.add_edge(e.sender, e.receiver, e.weight, e.delay);
    return g;
}

struct Analysis {
    CheckReport report;
    DelayGraph graph{1};
    TopologyMatrices topo;
    std::vector<Eigen::MatrixXd> K_x;
    std::vector<Eigen::MatrixXd> L;  // empty matrix when absent
};

Analysis analyze(const Scenario& sc) {
    check_shapes(sc);
    Analysis an;
    CheckReport& rep = an.report;
    an.graph = build_graph(sc);
    rep.order = topological_order(an.graph);
    for (const auto& e : an.graph.edges()) {
        rep.horizons.emplace_back(e, prediction_horizon(an.graph, e.sender, e.receiver));
    }
    an.topo = topology_matrices(an.graph);
    rep.t_max = an.topo.t_max;

    rep.rho_s = spectral_radius(sc.S);
    const Eigen::MatrixXd hd0 = an.topo.h_plus_d0();
    rep.rho_coupling =
        spectral_radius(Eigen::MatrixXd::Identity(hd0.rows(), hd0.cols()) - sc.beta * hd0);
    const CouplingCheck cc = check_coupling_gain(sc.S, hd0, sc.beta);
    rep.coupling_lhs = cc.lhs;
    rep.coupling_ok = cc.ok;
    if (!cc.ok) {
        std::ostringstream msg;
        msg << "coupling gain: rho(S) * rho(I - beta(H + D0)) = " << cc.lhs << " is not < 1";
        rep.failures.push_back(msg.str());
    }

    const bool output_fb = parse_mode(sc.mode).feedback == FeedbackKind::Output;
    for (std::size_t i = 0; i < sc.agents.size(); ++i) {
        const AgentConfig& a = sc.agents[i];
        const std::string path = idx("agents", i);
        AgentCheck ac;
        ac.node = static_cast<int>(i) + 1;
        ac.stabilizable = is_stabilizable(a.A, a.B);
        ac.detectable = is_detectable(a.C, a.A);
        if (!ac.stabilizable) rep.failures.push_back(path + ": (A, B) is not stabilizable");
        if (!ac.detectable) rep.failures.push_back(path + ": (C, A) is not detectable");

        Eigen::MatrixXd k_x;
        try {
            if (a.K_x) {
                k_x = *a.K_x;
            } else if (a.poles) {
                k_x = place_poles(a.A, a.B, *a.poles);
            } else {
                rep.failures.push_back(path + ": needs K_x or poles");
            }
        } catch (const Error& e) {
            rep.failures.push_back(path + ".poles: " + e.what());
        }
        if (k_x.size() > 0) {
            ac.closed_loop_radius = spectral_radius(a.A + a.B * k_x);
            if (!(ac.closed_loop_radius < 1.0 - kSchurMargin)) {
                rep.failures.push_back(path + ": A + B K_x is not Schur");
            }
        }

        Eigen::MatrixXd l;
        try {
            if (a.L) {
                l = *a.L;
            } else if (a.observer_poles) {
                l = observer_gain(a.A, a.C, *a.observer_poles);
            }
        } catch (const Error& e) {
            rep.failures.push_back(path + ".observer_poles: " + e.what());
        }
        if (l.size() > 0) {
            ac.observer_radius = spectral_radius(a.A + l * a.C);
            if (!(*ac.observer_radius < 1.0 - kSchurMargin)) rep.failures.push_back(path + ": A + L C is not Schur");
        } else if (output_fb) {
            rep.failures.push_back(path + ": output feedback needs L or observer_poles");
        }

        try {
            const RegulatorSolution reg = solve_regulator(a.A, a.B, a.C, sc.S, sc.F);
            ac.residual_primary = reg.residual_primary;
            ac.residual_output = reg.residual_output;
        } catch (const Error& e) {
            rep.failures.push_back(path + ": regulator equations: " + e.what());
        }
        rep.agents.push_back(ac);
        an.K_x.push_back(std::move(k_x));
        an.L.push_back(std::move(l));
    }
    return an;
}

}  // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::IoError, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Scenario parse_scenario(const std::string& text, FileFormat format) {
    return scenario_from_json(parse_document(text, format));
}

Scenario load_scenario(const std::string& path) { return parse_scenario(read_file(path), format_for(path)); }

std::string scenario_to_json(const Scenario& sc, int indent) {
    json agents = json::array();
    for (const auto& a : sc.agents) {
        json j = {{"A", rows_json(a.A)}, {"B", rows_json(a.B)}, {"C", rows_json(a.C)}, {"x0", vector_json(a.x0)}};
        if (a.K_x) j["K_x"] = rows_json(*a.K_x);
        if (a.poles) j["poles"] = poles_json(*a.poles);
        if (a.L) j["L"] = rows_json(*a.L);
        if (a.observer_poles) j["observer_poles"] = poles_json(*a.observer_poles);
        if (a.xi0) j["xi0"] = vector_json(*a.xi0);
        if (a.x_hat0) j["x_hat0"] = vector_json(*a.x_hat0);
        agents.push_back(std::move(j));
    }
    json edges = json::array();
    for (const auto& e : sc.edges) {
        edges.push_back({{"from", e.sender}, {"to", e.receiver}, {"weight", e.weight}, {"delay", e.delay}});
    }
    json doc = {
        {"name", sc.name},
        {"mode", sc.mode},
        {"horizon", sc.horizon},
        {"seed", sc.seed},
        {"exosystem", {{"S", rows_json(sc.S)}, {"v0", vector_json(sc.v0)}}},
        {"gains", {{"beta", sc.beta}, {"F", rows_json(sc.F)}}},
        {"agents", agents},
        {"edges", edges},
        {"thresholds",
         {{"prediction", sc.thresholds.prediction}, {"sync", sc.thresholds.sync}, {"regulated", sc.thresholds.regulated}}},
    };
    return doc.dump(indent);
}

CheckReport check_scenario(const Scenario& sc) { return analyze(sc).report; }

std::string check_report_json(const CheckReport& r, int indent) {
    json horizons = json::array();
    for (const auto& [e, h] : r.horizons) {
        horizons.push_back({{"sender", e.sender}, {"receiver", e.receiver}, {"delay", e.delay},
                            {"first", h.first}, {"last", h.last}});
    }
    json agents = json::array();
    for (const auto& a : r.agents) {
        json j = {{"node", a.node},
                  {"closed_loop_radius", a.closed_loop_radius},
                  {"schur_margin", 1.0 - a.closed_loop_radius},
                  {"stabilizable", a.stabilizable},
                  {"detectable", a.detectable},
                  {"regulator_residual_primary", a.residual_primary},
                  {"regulator_residual_output", a.residual_output}};
        if (a.observer_radius) {
            j["observer_radius"] = *a.observer_radius;
            j["observer_schur_margin"] = 1.0 - *a.observer_radius;
        }
        agents.push_back(std::move(j));
    }
    json doc = {
        {"ok", r.ok()},
        {"topological_order", r.order},
        {"horizons", horizons},
        {"t_max", r.t_max},
        {"rho_s", r.rho_s},
        {"rho_coupling", r.rho_coupling},
        {"coupling_lhs", r.coupling_lhs},
        {"coupling_ok", r.coupling_ok},
        {"agents", agents},
        {"failures", r.failures},
    };
    return doc.dump(indent);
}

PreparedScenario prepare(const Scenario& sc) {
    Analysis an = analyze(sc);
    if (!an.report.ok()) {
        std::string msg = "scenario failed validation:";
        for (const auto& f : an.report.failures) msg += "\n  " + f;
        fail(ErrorCode::ValidationError, msg);
    }
    PreparedScenario out;
    out.name = sc.name;
    out.exo = ExosystemModel{sc.S};
    out.v0 = sc.v0;
    out.graph = an.graph;
    out.order = an.report.order;
    out.topo = an.topo;
    out.F = sc.F;
    out.beta = sc.beta;
    out.mode = parse_mode(sc.mode);
    out.horizon = sc.horizon;
    out.thresholds = sc.thresholds;
    const auto q = sc.S.rows();
    for (std::size_t i = 0; i < sc.agents.size(); ++i) {
        const AgentConfig& a = sc.agents[i];
        AgentSetup setup;
        setup.model = AgentModel{a.A, a.B, a.C};
        setup.gains = assemble_gains(setup.model, out.exo, sc.F, an.K_x[i], an.L[i]);
        setup.x0 = a.x0;
        setup.xi0 = a.xi0 ? *a.xi0 : Eigen::VectorXd::Zero(q);
        setup.x_hat0 = a.x_hat0 ? *a.x_hat0 : Eigen::VectorXd::Zero(a.A.rows());
        out.agents.push_back(std::move(setup));
    }
    return out;
}

SirParams parse_sir_params(const std::string& text, FileFormat format) {
    json doc = parse_document(text, format);
    require_object(doc, "");
    std::string path;
    if (doc.contains("sir")) {
        allow_keys(doc, "", {"sir"});
        doc = doc["sir"];
        path = "sir";
        require_object(doc, path);
    }
    allow_keys(doc, path,
               {"beta_r", "beta_u", "gamma_r", "gamma_u", "m_ru", "h", "D", "i_r0", "r_r0", "i_u0", "r_u0", "steps"});
    SirParams p;
    auto num = [&](const char* key, double& slot) {
        if (doc.contains(key)) slot = number(doc[key], at(path, key));
    };
    num("beta_r", p.beta_r);
    num("beta_u", p.beta_u);
    num("gamma_r", p.gamma_r);
    num("gamma_u", p.gamma_u);
    num("m_ru", p.m_ru);
    num("h", p.h);
    num("D", p.D);
    num("i_r0", p.i_r0);
    num("r_r0", p.r_r0);
    num("i_u0", p.i_u0);
    num("r_u0", p.r_u0);
    if (doc.contains("steps")) {
        const long long s = integer(doc["steps"], at(path, "steps"));
        if (s < 0) fail(ErrorCode::ParseError, at(path, "steps") + ": must be >= 0");
        p.steps = static_cast<int>(s);
    }
    p.validate();
    return p;
}

SirParams load_sir_params(const std::string& path) { return parse_sir_params(read_file(path), format_for(path)); }

std::string sir_params_to_json(const SirParams& p, int indent) {
    json doc = {{"beta_r", p.beta_r}, {"beta_u", p.beta_u}, {"gamma_r", p.gamma_r}, {"gamma_u", p.gamma_u},
                {"m_ru", p.m_ru},     {"h", p.h},           {"D", p.D},             {"i_r0", p.i_r0},
                {"r_r0", p.r_r0},     {"i_u0", p.i_u0},     {"r_u0", p.r_u0},       {"steps", p.steps}};
    return doc.dump(indent);
}

}  // namespace predsync
