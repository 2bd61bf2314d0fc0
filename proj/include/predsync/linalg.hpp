#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace predsync {

inline constexpr double kRegulatorTolerance = 1e-9;
inline constexpr double kSchurMargin = 1e-12;

/// Solution of X S = A X + B U, 0 = C X + F.
struct RegulatorSolution {
    Eigen::MatrixXd X;
    Eigen::MatrixXd U;
    double residual_primary = 0.0;  // |XS - AX - BU|_F
    double residual_output = 0.0;   // |CX + F|_F
};

struct CouplingCheck {
    bool ok = false;
    double lhs = 0.0;  // rho(S) * rho(I - beta * HD0)
};

// Throws NonSquare / NonFinite.
double spectral_radius(const Eigen::MatrixXd& m);

bool is_schur(const Eigen::MatrixXd& m);

CouplingCheck check_coupling_gain(const Eigen::MatrixXd& s, const Eigen::MatrixXd& hd0, double beta);

/// Least-squares (minimum-norm) solve of the Kronecker-vectorized regulator
/// equations. Throws NoSolution when either residual exceeds 1e-9.
RegulatorSolution solve_regulator(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                  const Eigen::MatrixXd& c, const Eigen::MatrixXd& s,
                                  const Eigen::MatrixXd& f);

/// K such that eig(A + B K) = targets.
///
/// Single-input systems use Ackermann's formula. For m > 1 the input is
/// restricted to u = g k^T x with the first direction g (unit vectors, then
/// the all-ones vector) that leaves (A, B g) controllable.
Eigen::MatrixXd place_poles(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                            const std::vector<std::complex<double>>& targets);

// L such that eig(A + L C) = targets; dual of place_poles.
Eigen::MatrixXd observer_gain(const Eigen::MatrixXd& a, const Eigen::MatrixXd& c,
                              const std::vector<std::complex<double>>& targets);

// Monic characteristic polynomial coefficients, highest power first.
Eigen::VectorXd characteristic_polynomial(const Eigen::MatrixXd& m);

// Real coefficients of prod (z - r), highest power first. Roots must be
// closed under conjugation.
Eigen::VectorXd polynomial_from_roots(const std::vector<std::complex<double>>& roots);

Eigen::MatrixXd controllability_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

// PBH rank tests restricted to eigenvalues with modulus >= 1.
bool is_stabilizable(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);
bool is_detectable(const Eigen::MatrixXd& c, const Eigen::MatrixXd& a);

// M^p by repeated squaring.
Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& m, int p);

}  // namespace predsync
