#include "predsync/predsync.h"

#include "predsync/config.hpp"
#include "predsync/error.hpp"

#include "json.hpp"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <string>

using namespace predsync;

struct psync_scenario {
    Scenario sc;
};

struct psync_sim_result {
    SimTrace trace;
};

struct psync_sir_params {
    SirParams p;
};

namespace {

thread_local std::string g_last_error;

psync_status map_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return PSYNC_E_INVALID_ARGUMENT;
        case ErrorCode::CycleDetected: return PSYNC_E_CYCLE_DETECTED;
        case ErrorCode::LeaderHasInEdge: return PSYNC_E_LEADER_HAS_IN_EDGE;
        case ErrorCode::EdgeAbsent: return PSYNC_E_EDGE_ABSENT;
        case ErrorCode::NonSquare: return PSYNC_E_NON_SQUARE;
        case ErrorCode::NonFinite: return PSYNC_E_NON_FINITE;
        case ErrorCode::ShapeMismatch: return PSYNC_E_SHAPE_MISMATCH;
        case ErrorCode::NoSolution: return PSYNC_E_NO_SOLUTION;
        case ErrorCode::Uncontrollable: return PSYNC_E_UNCONTROLLABLE;
        case ErrorCode::TargetsNotConjugateClosed: return PSYNC_E_TARGETS_NOT_CONJUGATE_CLOSED;
        case ErrorCode::DuplicateSend: return PSYNC_E_DUPLICATE_SEND;
        case ErrorCode::HorizonInsufficient: return PSYNC_E_HORIZON_INSUFFICIENT;
        case ErrorCode::InsufficientData: return PSYNC_E_INSUFFICIENT_DATA;
        case ErrorCode::RankCollapse: return PSYNC_E_RANK_COLLAPSE;
        case ErrorCode::MissingInput: return PSYNC_E_MISSING_INPUT;
        case ErrorCode::ParseError: return PSYNC_E_PARSE;
        case ErrorCode::ValidationError: return PSYNC_E_VALIDATION;
        case ErrorCode::IoError: return PSYNC_E_IO;
    }
    return PSYNC_E_INTERNAL;
}

template <class F>
psync_status guard(F&& body) {
    try {
        body();
        g_last_error.clear();
        return PSYNC_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return map_code(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return PSYNC_E_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return PSYNC_E_INTERNAL;
    }
}

void need(const void* p, const char* what) {
    if (p == nullptr) fail(ErrorCode::InvalidArgument, std::string(what) + " must not be NULL");
}

char* dup(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

FileFormat format_of(const char* format) {
    if (format == nullptr) return FileFormat::Auto;
    const std::string f(format);
    if (f == "toml") return FileFormat::Toml;
    if (f == "json") return FileFormat::Json;
    fail(ErrorCode::InvalidArgument, "format must be toml or json");
}

void copy_vector(const Eigen::VectorXd& v, double* buf, size_t cap, size_t* len) {
    if (len != nullptr) *len = static_cast<size_t>(v.size());
    if (buf == nullptr) return;
    if (cap < static_cast<size_t>(v.size())) {
        fail(ErrorCode::InvalidArgument, "buffer holds " + std::to_string(cap) + " values, need " +
                                             std::to_string(v.size()));
    }
    std::memcpy(buf, v.data(), static_cast<size_t>(v.size()) * sizeof(double));
}

const AgentTrace& agent_at(const SimTrace& t, int node, int k) {
    if (node < 1 || static_cast<size_t>(node) > t.agents.size()) {
        fail(ErrorCode::InvalidArgument, "node " + std::to_string(node) + " is not an agent");
    }
    if (k < 0 || k > t.steps) fail(ErrorCode::InvalidArgument, "step " + std::to_string(k) + " out of range");
    return t.agents[static_cast<size_t>(node - 1)];
}

std::ofstream open_out(const char* path) {
    need(path, "path");
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::IoError, std::string("cannot write ") + path);
    return out;
}

}  // namespace

extern "C" {

const char* psync_last_error(void) { return g_last_error.c_str(); }

const char* psync_status_name(psync_status status) {
    switch (status) {
        case PSYNC_OK: return "ok";
        case PSYNC_E_INVALID_ARGUMENT: return "invalid_argument";
        case PSYNC_E_CYCLE_DETECTED: return "cycle_detected";
        case PSYNC_E_LEADER_HAS_IN_EDGE: return "leader_has_in_edge";
        case PSYNC_E_EDGE_ABSENT: return "edge_absent";
        case PSYNC_E_NON_SQUARE: return "non_square";
        case PSYNC_E_NON_FINITE: return "non_finite";
        case PSYNC_E_SHAPE_MISMATCH: return "shape_mismatch";
        case PSYNC_E_NO_SOLUTION: return "no_solution";
        case PSYNC_E_UNCONTROLLABLE: return "uncontrollable";
        case PSYNC_E_TARGETS_NOT_CONJUGATE_CLOSED: return "targets_not_conjugate_closed";
        case PSYNC_E_DUPLICATE_SEND: return "duplicate_send";
        case PSYNC_E_HORIZON_INSUFFICIENT: return "horizon_insufficient";
        case PSYNC_E_INSUFFICIENT_DATA: return "insufficient_data";
        case PSYNC_E_RANK_COLLAPSE: return "rank_collapse";
        case PSYNC_E_MISSING_INPUT: return "missing_input";
        case PSYNC_E_PARSE: return "parse_error";
        case PSYNC_E_VALIDATION: return "validation_error";
        case PSYNC_E_IO: return "io_error";
        case PSYNC_E_INTERNAL: return "internal_error";
    }
    return "unknown";
}

int psync_status_is_validation(psync_status status) {
    switch (status) {
        case PSYNC_E_INVALID_ARGUMENT:
        case PSYNC_E_CYCLE_DETECTED:
        case PSYNC_E_LEADER_HAS_IN_EDGE:
        case PSYNC_E_EDGE_ABSENT:
        case PSYNC_E_NON_SQUARE:
        case PSYNC_E_NON_FINITE:
        case PSYNC_E_SHAPE_MISMATCH:
        case PSYNC_E_NO_SOLUTION:
        case PSYNC_E_UNCONTROLLABLE:
        case PSYNC_E_TARGETS_NOT_CONJUGATE_CLOSED:
        case PSYNC_E_PARSE:
        case PSYNC_E_VALIDATION:
            return 1;
        default:
            return 0;
    }
}

void psync_string_free(char* s) { std::free(s); }

psync_status psync_scenario_load(const char* path, psync_scenario** out) {
    return guard([&] {
        need(path, "path");
        need(out, "out");
        *out = new psync_scenario{load_scenario(path)};
    });
}

psync_status psync_scenario_parse(const char* text, const char* format, psync_scenario** out) {
    return guard([&] {
        need(text, "text");
        need(out, "out");
        *out = new psync_scenario{parse_scenario(text, format_of(format))};
    });
}

void psync_scenario_free(psync_scenario* sc) { delete sc; }

psync_status psync_scenario_set_mode(psync_scenario* sc, const char* mode) {
    return guard([&] {
        need(sc, "scenario");
        need(mode, "mode");
        (void)parse_mode(mode);
        sc->sc.mode = mode;
    });
}

psync_status psync_scenario_set_horizon(psync_scenario* sc, int steps) {
    return guard([&] {
        need(sc, "scenario");
        if (steps < 0) fail(ErrorCode::InvalidArgument, "horizon must be >= 0");
        sc->sc.horizon = steps;
    });
}

psync_status psync_scenario_to_json(const psync_scenario* sc, char** out) {
    return guard([&] {
        need(sc, "scenario");
        need(out, "out");
        *out = dup(scenario_to_json(sc->sc));
    });
}

psync_status psync_scenario_check(const psync_scenario* sc, char** report_json, int* ok) {
    return guard([&] {
        need(sc, "scenario");
        const CheckReport report = check_scenario(sc->sc);
        if (ok != nullptr) *ok = report.ok() ? 1 : 0;
        if (report_json != nullptr) *report_json = dup(check_report_json(report));
    });
}

psync_status psync_simulate(const psync_scenario* sc, psync_sim_result** out) {
    return guard([&] {
        need(sc, "scenario");
        need(out, "out");
        *out = new psync_sim_result{run_simulation(prepare(sc->sc))};
    });
}

void psync_sim_result_free(psync_sim_result* res) { delete res; }

psync_status psync_sim_write_trace(const psync_sim_result* res, const char* path, const char* format) {
    return guard([&] {
        need(res, "result");
        const std::string f = format == nullptr ? "csv" : format;
        if (f != "csv" && f != "json") fail(ErrorCode::InvalidArgument, "format must be csv or json");
        std::ofstream out = open_out(path);
        if (f == "csv") {
            write_trace_csv(res->trace, out);
        } else {
            write_trace_json(res->trace, out);
        }
        if (!out) fail(ErrorCode::IoError, std::string("write failed: ") + path);
    });
}

psync_status psync_sim_metrics_json(const psync_sim_result* res, char** out) {
    return guard([&] {
        need(res, "result");
        need(out, "out");
        *out = dup(metrics_json(res->trace));
    });
}

int psync_sim_steps(const psync_sim_result* res) { return res == nullptr ? -1 : res->trace.steps; }

int psync_sim_agent_count(const psync_sim_result* res) {
    return res == nullptr ? -1 : static_cast<int>(res->trace.agents.size());
}

psync_status psync_sim_output(const psync_sim_result* res, int node, int k, double* buf, size_t cap, size_t* len) {
    return guard([&] {
        need(res, "result");
        copy_vector(agent_at(res->trace, node, k).y[static_cast<size_t>(k)], buf, cap, len);
    });
}

psync_status psync_sim_observer_state(const psync_sim_result* res, int node, int k, double* buf, size_t cap,
                                      size_t* len) {
    return guard([&] {
        need(res, "result");
        copy_vector(agent_at(res->trace, node, k).xi[static_cast<size_t>(k)], buf, cap, len);
    });
}

psync_status psync_sim_prediction(const psync_sim_result* res, int sender, int receiver, int k, int s, double* buf,
                                  size_t cap, size_t* len) {
    return guard([&] {
        need(res, "result");
        const auto it = res->trace.sent.find({sender, receiver});
        if (it == res->trace.sent.end()) {
            fail(ErrorCode::EdgeAbsent, "no edge " + std::to_string(sender) + "->" + std::to_string(receiver));
        }
        if (k < 0 || static_cast<size_t>(k) >= it->second.size()) {
            fail(ErrorCode::InvalidArgument, "step " + std::to_string(k) + " out of range");
        }
        const auto& values = it->second[static_cast<size_t>(k)];
        if (s < 0 || static_cast<size_t>(s) >= values.size()) {
            fail(ErrorCode::HorizonInsufficient, "forecast " + std::to_string(s) + " not shipped on this edge");
        }
        copy_vector(values[static_cast<size_t>(s)], buf, cap, len);
    });
}

psync_status psync_sir_load(const char* path, psync_sir_params** out) {
    return guard([&] {
        need(path, "path");
        need(out, "out");
        *out = new psync_sir_params{load_sir_params(path)};
    });
}

psync_status psync_sir_parse(const char* text, const char* format, psync_sir_params** out) {
    return guard([&] {
        need(text, "text");
        need(out, "out");
        *out = new psync_sir_params{parse_sir_params(text, format_of(format))};
    });
}

void psync_sir_free(psync_sir_params* p) { delete p; }

psync_status psync_sir_run(const psync_sir_params* p, const char* mode, const char* trace_path, char** report_json) {
    return guard([&] {
        need(p, "params");
        const std::string m = mode == nullptr ? "compare" : mode;
        const bool compare = m == "compare";
        SirMode single = SirMode::Baseline;
        if (!compare) single = parse_sir_mode(m);

        const SirComparison c = compare_sir(p->p);
        if (trace_path != nullptr) {
            std::ofstream out = open_out(trace_path);
            if (compare) {
                write_sir_csv(p->p, c.baseline, out, true);
                write_sir_csv(p->p, c.compensated, out, false);
            } else {
                write_sir_csv(p->p, single == SirMode::Baseline ? c.baseline : c.compensated, out, true);
            }
            if (!out) fail(ErrorCode::IoError, std::string("write failed: ") + trace_path);
        }
        if (report_json != nullptr) {
            nlohmann::json report = nlohmann::json::parse(sir_report_json(p->p, c));
            report["mode"] = m;
            if (!compare) {
                const char* drop = single == SirMode::Baseline ? "compensated" : "baseline";
                report.erase(drop);
                report.erase("delta");
                report.erase("delta_after_arrival");
            }
            *report_json = dup(report.dump(2));
        }
    });
}

psync_status psync_koopman_fit(const psync_sir_params* p, char** model_json) {
    return guard([&] {
        need(p, "params");
        need(model_json, "out");
        *model_json = dup(koopman_to_json(fit_sir_koopman(simulate_sir(p->p))));
    });
}

}  // extern "C"
