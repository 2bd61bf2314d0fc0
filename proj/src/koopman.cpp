#include "predsync/koopman.hpp"

#include "predsync/error.hpp"

#include "json.hpp"

#include <Eigen/SVD>

#include <string>

namespace predsync {

namespace {

nlohmann::json to_rows(const Eigen::MatrixXd& m) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        out.push_back(std::move(row));
    }
    return out;
}

Eigen::MatrixXd from_rows(const nlohmann::json& j, const std::string& field) {
    if (!j.is_array() || j.empty() || !j.front().is_array()) {
        fail(ErrorCode::ParseError, field + ": expected a nested array");
    }
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j.front().size());
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            fail(ErrorCode::ParseError, field + "[" + std::to_string(r) + "]: ragged row");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            const auto& cell = row[static_cast<std::size_t>(c)];
            if (!cell.is_number()) {
                fail(ErrorCode::ParseError,
                     field + "[" + std::to_string(r) + "][" + std::to_string(c) + "]: not a number");
            }
            m(r, c) = cell.get<double>();
        }
    }
    return m;
}

nlohmann::json fit_json(const EdmdFit& f) {
    return {{"residual", f.residual}, {"cutoff", f.cutoff}, {"rank", f.rank}};
}

EdmdFit fit_from_json(const nlohmann::json& j, const Eigen::MatrixXd& k) {
    EdmdFit f;
    f.K = k;
    f.residual = j.value("residual", 0.0);
    f.cutoff = j.value("cutoff", 0.0);
    f.rank = j.value("rank", 0);
    return f;
}

}  // namespace

std::vector<std::string> Dictionary::names() const {
    std::vector<std::string> out{"i", "r", "s", "s*i", "s*r", "i*r", "s^2", "i^2", "r^2"};
    if (region_ == Region::U) {
        out.emplace_back("s*ubar");
        out.emplace_back("ubar");
    }
    return out;
}

Eigen::VectorXd Dictionary::lift(const Eigen::Vector2d& x, std::optional<double> u) const {
    if (region_ == Region::U && !u) fail(ErrorCode::MissingInput, "urban dictionary needs ubar");
    if (region_ == Region::R && u) fail(ErrorCode::InvalidArgument, "rural dictionary takes no input");
    const double i = x(0), r = x(1), s = 1.0 - i - r;
    Eigen::VectorXd out(size());
    out.head<9>() << i, r, s, s * i, s * r, i * r, s * s, i * i, r * r;
    if (region_ == Region::U) {
        out(9) = s * *u;
        out(10) = *u;
    }
    return out;
}

EdmdFit edmd_fit(const Eigen::MatrixXd& y1, const Eigen::MatrixXd& y2) {
    if (y1.rows() != y2.rows() || y1.cols() != y2.cols()) {
        fail(ErrorCode::ShapeMismatch, "snapshot matrices must have equal shape");
    }
    // m snapshots give m - 1 pairs; m >= N + 1 means at least N pairs.
    if (y1.cols() < y1.rows()) {
        fail(ErrorCode::InsufficientData, "need at least " + std::to_string(y1.rows() + 1) +
                                              " snapshots, got " + std::to_string(y1.cols() + 1));
    }
    if (!y1.allFinite() || !y2.allFinite()) fail(ErrorCode::NonFinite, "snapshots must be finite");

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(y1, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    EdmdFit out;
    out.cutoff = sigma.size() > 0 ? kSvdCutoff * sigma(0) : 0.0;
    while (out.rank < sigma.size() && sigma(out.rank) > out.cutoff) ++out.rank;
    if (out.rank == 0) fail(ErrorCode::RankCollapse, "every singular value fell below the cutoff");

    const auto r = out.rank;
    const Eigen::MatrixXd v = svd.matrixV().leftCols(r);
    const Eigen::MatrixXd u = svd.matrixU().leftCols(r);
    const Eigen::VectorXd inv = sigma.head(r).cwiseInverse();
    out.K = (y2 * v) * inv.asDiagonal() * u.transpose();
    out.residual = (y2 - out.K * y1).norm();
    return out;
}

EdmdFit edmd_fit(const Dictionary& dict, std::span<const Eigen::Vector2d> states,
                 std::span<const double> inputs) {
    const bool with_input = dict.region() == Dictionary::Region::U;
    if (with_input && inputs.size() != states.size()) {
        fail(ErrorCode::ShapeMismatch, "urban fit needs one input per snapshot");
    }
    const auto m = static_cast<Eigen::Index>(states.size());
    if (m < dict.size() + 1) {
        fail(ErrorCode::InsufficientData, "need at least " + std::to_string(dict.size() + 1) +
                                              " snapshots, got " + std::to_string(m));
    }
    Eigen::MatrixXd lifted(dict.size(), m);
    for (Eigen::Index k = 0; k < m; ++k) {
        const auto idx = static_cast<std::size_t>(k);
        lifted.col(k) = with_input ? dict.lift(states[idx], inputs[idx]) : dict.lift(states[idx]);
    }
    return edmd_fit(lifted.leftCols(m - 1), lifted.rightCols(m - 1));
}

InputBlocks extract_blocks(const Eigen::MatrixXd& k_u) {
    if (k_u.rows() != 11 || k_u.cols() != 11) fail(ErrorCode::ShapeMismatch, "K_u must be 11 x 11");
    return InputBlocks{k_u.topLeftCorner(10, 10), k_u.block(0, 10, 10, 1)};
}

Eigen::MatrixXd readout_matrix(int lifted_dim) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(2, lifted_dim);
    c(0, 0) = 1.0;
    c(1, 1) = 1.0;
    return c;
}

KoopmanModel fit_koopman(std::span<const Eigen::Vector2d> rural, std::span<const Eigen::Vector2d> urban,
                         std::span<const double> urban_inputs) {
    KoopmanModel m;
    m.fit_r = edmd_fit(Dictionary(Dictionary::Region::R), rural);
    m.fit_u = edmd_fit(Dictionary(Dictionary::Region::U), urban, urban_inputs);
    m.K_r = m.fit_r.K;
    m.A_r = m.K_r;
    m.C_r = readout_matrix(9);
    m.K_u = m.fit_u.K;
    InputBlocks blocks = extract_blocks(m.K_u);
    m.A_u = std::move(blocks.A);
    m.B_u = std::move(blocks.B);
    m.C_u = readout_matrix(10);
    return m;
}

Rollout relift_rollout(const KoopmanModel& model, const Eigen::Vector2d& x0_r,
                       const Eigen::Vector2d& x0_u, const InputPolicy& policy, int steps) {
    if (steps < 0) fail(ErrorCode::InvalidArgument, "steps must be >= 0");
    const Dictionary dict_r(Dictionary::Region::R);
    const Dictionary dict_u(Dictionary::Region::U);
    Rollout out;
    const auto n = static_cast<std::size_t>(steps) + 1;
    out.rural.reserve(n);
    out.urban.reserve(n);
    out.u_bar.reserve(n);
    out.lifted_r.reserve(n);
    out.lifted_u.reserve(n);
    out.rural.push_back(x0_r);
    out.urban.push_back(x0_u);

    for (int k = 0;; ++k) {
        const double ubar = policy ? policy(k, out.rural) : 0.0;
        out.u_bar.push_back(ubar);
        out.lifted_r.push_back(dict_r.lift(out.rural.back()));
        out.lifted_u.push_back(dict_u.lift(out.urban.back(), ubar));
        if (k == steps) break;
        const Eigen::VectorXd next_r = model.C_r * (model.A_r * out.lifted_r.back());
        const Eigen::VectorXd& zu = out.lifted_u.back();
        const Eigen::VectorXd next_u = model.C_u * (model.A_u * zu.head(10) + model.B_u * ubar);
        out.rural.emplace_back(next_r(0), next_r(1));
        out.urban.emplace_back(next_u(0), next_u(1));
    }
    return out;
}

std::string koopman_to_json(const KoopmanModel& model, int indent) {
    nlohmann::json doc = {
        {"rural", {{"dictionary", "r"},
                   {"names", Dictionary(Dictionary::Region::R).names()},
                   {"K", to_rows(model.K_r)},
                   {"C", to_rows(model.C_r)},
                   {"fit", fit_json(model.fit_r)}}},
        {"urban", {{"dictionary", "u"},
                   {"names", Dictionary(Dictionary::Region::U).names()},
                   {"K", to_rows(model.K_u)},
                   {"A", to_rows(model.A_u)},
                   {"B", to_rows(model.B_u)},
                   {"C", to_rows(model.C_u)},
                   {"fit", fit_json(model.fit_u)}}},
    };
    return doc.dump(indent);
}

KoopmanModel koopman_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::ParseError, e.what());
    }
    if (!doc.contains("rural") || !doc.contains("urban")) {
        fail(ErrorCode::ParseError, "model needs 'rural' and 'urban' sections");
    }
    KoopmanModel m;
    m.K_r = from_rows(doc["rural"].value("K", nlohmann::json()), "rural.K");
    m.K_u = from_rows(doc["urban"].value("K", nlohmann::json()), "urban.K");
    if (m.K_r.rows() != 9 || m.K_r.cols() != 9) fail(ErrorCode::ShapeMismatch, "rural.K must be 9 x 9");
    m.A_r = m.K_r;
    m.C_r = readout_matrix(9);
    InputBlocks blocks = extract_blocks(m.K_u);
    m.A_u = std::move(blocks.A);
    m.B_u = std::move(blocks.B);
    m.C_u = readout_matrix(10);
    m.fit_r = fit_from_json(doc["rural"].value("fit", nlohmann::json::object()), m.K_r);
    m.fit_u = fit_from_json(doc["urban"].value("fit", nlohmann::json::object()), m.K_u);
    return m;
}

}  // namespace predsync
