#include "predsync/linalg.hpp"

#include "predsync/error.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <string>

namespace predsync {

namespace {

void require_square(const Eigen::MatrixXd& m, const char* what) {
    if (m.rows() != m.cols()) {
        fail(ErrorCode::NonSquare, std::string(what) + " must be square, got " +
                                       std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
}

void require_finite(const Eigen::MatrixXd& m, const char* what) {
    if (!m.allFinite()) fail(ErrorCode::NonFinite, std::string(what) + " has non-finite entries");
}

void require_shape(bool ok, const std::string& what) {
    if (!ok) fail(ErrorCode::ShapeMismatch, what);
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

int numeric_rank(const Eigen::MatrixXd& m) {
    if (m.size() == 0) return 0;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
    qr.setThreshold(1e-10);
    return static_cast<int>(qr.rank());
}

int numeric_rank(const Eigen::MatrixXcd& m) {
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
    lu.setThreshold(1e-10);
    return static_cast<int>(lu.rank());
}

void check_targets(const std::vector<std::complex<double>>& targets, Eigen::Index n) {
    if (static_cast<Eigen::Index>(targets.size()) != n) {
        fail(ErrorCode::ShapeMismatch, "need " + std::to_string(n) + " pole targets, got " +
                                           std::to_string(targets.size()));
    }
    std::vector<bool> used(targets.size(), false);
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (!std::isfinite(targets[i].real()) || !std::isfinite(targets[i].imag())) {
            fail(ErrorCode::NonFinite, "pole target is not finite");
        }
        if (std::abs(targets[i]) >= 1.0) {
            fail(ErrorCode::InvalidArgument, "pole targets must lie strictly inside the unit circle");
        }
        if (used[i] || std::abs(targets[i].imag()) <= 1e-12) continue;
        bool matched = false;
        for (std::size_t j = i + 1; j < targets.size() && !matched; ++j) {
            if (!used[j] && std::abs(targets[j] - std::conj(targets[i])) <= 1e-9) {
                used[j] = matched = true;
            }
        }
        if (!matched) {
            fail(ErrorCode::TargetsNotConjugateClosed, "pole targets are not closed under conjugation");
        }
    }
}

Eigen::MatrixXd evaluate_polynomial(const Eigen::VectorXd& coeffs, const Eigen::MatrixXd& a) {
    // Horner in matrix form.
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(a.rows(), a.cols());
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(a.rows(), a.cols());
    for (Eigen::Index i = 0; i < coeffs.size(); ++i) acc = acc * a + coeffs(i) * id;
    return acc;
}

Eigen::RowVectorXd ackermann(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                             const Eigen::VectorXd& desired) {
    const Eigen::MatrixXd ctrb = controllability_matrix(a, b);
    if (numeric_rank(ctrb) < a.rows()) fail(ErrorCode::Uncontrollable, "(A, B) is not controllable");
    Eigen::VectorXd last = Eigen::VectorXd::Zero(a.rows());
    last(a.rows() - 1) = 1.0;
    const Eigen::VectorXd y = ctrb.transpose().fullPivLu().solve(last);
    return -(y.transpose() * evaluate_polynomial(desired, a));
}

}  // namespace

double spectral_radius(const Eigen::MatrixXd& m) {
    require_square(m, "matrix");
    require_finite(m, "matrix");
    if (m.size() == 0) return 0.0;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
    if (solver.info() != Eigen::Success) {
        fail(ErrorCode::NonFinite, "eigenvalue iteration did not converge");
    }
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_schur(const Eigen::MatrixXd& m) { return spectral_radius(m) < 1.0 - kSchurMargin; }

CouplingCheck check_coupling_gain(const Eigen::MatrixXd& s, const Eigen::MatrixXd& hd0, double beta) {
    require_square(s, "S");
    require_square(hd0, "H + D0");
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(hd0.rows(), hd0.cols());
    CouplingCheck out;
    out.lhs = spectral_radius(s) * spectral_radius(id - beta * hd0);
    out.ok = out.lhs < 1.0;
    return out;
}

RegulatorSolution solve_regulator(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                  const Eigen::MatrixXd& c, const Eigen::MatrixXd& s,
                                  const Eigen::MatrixXd& f) {
    require_square(a, "A");
    require_square(s, "S");
    const Eigen::Index n = a.rows(), m = b.cols(), p = c.rows(), q = s.rows();
    require_shape(b.rows() == n, "B must have as many rows as A");
    require_shape(c.cols() == n, "C must have as many columns as A");
    require_shape(f.rows() == p && f.cols() == q, "F must be p x q");
    for (const auto* mat : {&a, &b, &c, &s, &f}) require_finite(*mat, "regulator input");

    const Eigen::MatrixXd iq = Eigen::MatrixXd::Identity(q, q);
    const Eigen::MatrixXd in = Eigen::MatrixXd::Identity(n, n);

    Eigen::MatrixXd system = Eigen::MatrixXd::Zero(n * q + p * q, n * q + m * q);
    system.topLeftCorner(n * q, n * q) = kron(s.transpose(), in) - kron(iq, a);
    system.topRightCorner(n * q, m * q) = -kron(iq, b);
    system.bottomLeftCorner(p * q, n * q) = kron(iq, c);

    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n * q + p * q);
    rhs.tail(p * q) = -Eigen::Map<const Eigen::VectorXd>(f.data(), p * q);

    const Eigen::VectorXd z = system.completeOrthogonalDecomposition().solve(rhs);

    RegulatorSolution out;
    out.X = Eigen::Map<const Eigen::MatrixXd>(z.data(), n, q);
    out.U = Eigen::Map<const Eigen::MatrixXd>(z.data() + n * q, m, q);
    out.residual_primary = (out.X * s - a * out.X - b * out.U).norm();
    out.residual_output = (c * out.X + f).norm();
    if (!(out.residual_primary <= kRegulatorTolerance) || !(out.residual_output <= kRegulatorTolerance)) {
        fail(ErrorCode::NoSolution, "regulator equations have no solution (residuals " +
                                        std::to_string(out.residual_primary) + ", " +
                                        std::to_string(out.residual_output) + ")");
    }
    return out;
}

Eigen::VectorXd characteristic_polynomial(const Eigen::MatrixXd& m) {
    require_square(m, "matrix");
    // Faddeev-LeVerrier.
    const Eigen::Index n = m.rows();
    Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(n + 1);
    coeffs(0) = 1.0;
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd mk = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 1; k <= n; ++k) {
        mk = m * mk + coeffs(k - 1) * id;
        coeffs(k) = -(m * mk).trace() / static_cast<double>(k);
    }
    return coeffs;
}

Eigen::VectorXd polynomial_from_roots(const std::vector<std::complex<double>>& roots) {
    std::vector<std::complex<double>> poly{1.0};
    for (const auto& r : roots) {
        std::vector<std::complex<double>> next(poly.size() + 1, 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i] += poly[i];
            next[i + 1] -= r * poly[i];
        }
        poly = std::move(next);
    }
    Eigen::VectorXd out(static_cast<Eigen::Index>(poly.size()));
    for (std::size_t i = 0; i < poly.size(); ++i) {
        if (std::abs(poly[i].imag()) > 1e-9 * std::max(1.0, std::abs(poly[i]))) {
            fail(ErrorCode::TargetsNotConjugateClosed, "roots are not closed under conjugation");
        }
        out(static_cast<Eigen::Index>(i)) = poly[i].real();
    }
    return out;
}

Eigen::MatrixXd controllability_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    require_square(a, "A");
    require_shape(b.rows() == a.rows(), "B must have as many rows as A");
    const Eigen::Index n = a.rows(), m = b.cols();
    Eigen::MatrixXd out(n, n * m);
    Eigen::MatrixXd block = b;
    for (Eigen::Index i = 0; i < n; ++i) {
        out.middleCols(i * m, m) = block;
        block = a * block;
    }
    return out;
}

Eigen::MatrixXd place_poles(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                            const std::vector<std::complex<double>>& targets) {
    require_square(a, "A");
    require_shape(b.rows() == a.rows(), "B must have as many rows as A");
    require_finite(a, "A");
    require_finite(b, "B");
    check_targets(targets, a.rows());
    const Eigen::VectorXd desired = polynomial_from_roots(targets);

    if (b.cols() == 1) return ackermann(a, b.col(0), desired);

    std::vector<Eigen::VectorXd> directions;
    for (Eigen::Index j = 0; j < b.cols(); ++j) directions.push_back(Eigen::VectorXd::Unit(b.cols(), j));
    directions.push_back(Eigen::VectorXd::Ones(b.cols()));
    for (const auto& g : directions) {
        const Eigen::VectorXd bg = b * g;
        if (numeric_rank(controllability_matrix(a, bg)) < a.rows()) continue;
        return g * ackermann(a, bg, desired);
    }
    fail(ErrorCode::Uncontrollable, "no single-input reduction of (A, B) is controllable");
}

Eigen::MatrixXd observer_gain(const Eigen::MatrixXd& a, const Eigen::MatrixXd& c,
                              const std::vector<std::complex<double>>& targets) {
    require_square(a, "A");
    require_shape(c.cols() == a.rows(), "C must have as many columns as A");
    return place_poles(a.transpose(), c.transpose(), targets).transpose();
}

namespace {

bool pbh_full_rank(const Eigen::MatrixXd& a, const Eigen::MatrixXd& other, bool stacked_right) {
    require_square(a, "A");
    if (a.size() == 0) return true;
    const Eigen::VectorXcd eig = Eigen::EigenSolver<Eigen::MatrixXd>(a, false).eigenvalues();
    const Eigen::Index n = a.rows();
    for (Eigen::Index k = 0; k < eig.size(); ++k) {
        if (std::abs(eig(k)) < 1.0) continue;
        const Eigen::MatrixXcd shifted =
            a.cast<std::complex<double>>() - eig(k) * Eigen::MatrixXcd::Identity(n, n);
        Eigen::MatrixXcd pencil;
        if (stacked_right) {
            pencil.resize(n, n + other.cols());
            pencil << shifted, other.cast<std::complex<double>>();
        } else {
            pencil.resize(n + other.rows(), n);
            pencil << shifted, other.cast<std::complex<double>>();
        }
        if (numeric_rank(pencil) < n) return false;
    }
    return true;
}

}  // namespace

bool is_stabilizable(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    require_shape(b.rows() == a.rows(), "B must have as many rows as A");
    return pbh_full_rank(a, b, true);
}

bool is_detectable(const Eigen::MatrixXd& c, const Eigen::MatrixXd& a) {
    require_shape(c.cols() == a.rows(), "C must have as many columns as A");
    return pbh_full_rank(a, c, false);
}

Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& m, int p) {
    require_square(m, "matrix");
    if (p < 0) fail(ErrorCode::InvalidArgument, "negative matrix power");
    Eigen::MatrixXd result = Eigen::MatrixXd::Identity(m.rows(), m.cols());
    Eigen::MatrixXd base = m;
    while (p > 0) {
        if (p & 1) result = result * base;
        base = base * base;
        p >>= 1;
    }
    return result;
}

}  // namespace predsync
