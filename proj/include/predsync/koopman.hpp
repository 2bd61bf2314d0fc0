#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace predsync {

/// Monomial dictionary over a two-state compartment (i, r) with s = 1 - i - r.
///
/// Region R: [i, r, s, s*i, s*r, i*r, s^2, i^2, r^2]          (9)
/// Region U: the same nine, then [s*ubar, ubar]                 (11)
/// The order is part of the model format: C = [I2 | 0] relies on it.
class Dictionary {
public:
    enum class Region { R, U };

    explicit Dictionary(Region region) : region_(region) {}

    Region region() const noexcept { return region_; }
    int size() const noexcept { return region_ == Region::R ? 9 : 11; }
    std::vector<std::string> names() const;

    // Throws MissingInput when u is absent for region U, InvalidArgument when
    // it is given for region R.
    Eigen::VectorXd lift(const Eigen::Vector2d& x, std::optional<double> u = std::nullopt) const;

private:
    Region region_;
};

inline constexpr double kSvdCutoff = 1e-10;

struct EdmdFit {
    Eigen::MatrixXd K;
    double residual = 0.0;  // |Y2 - K Y1|_F
    double cutoff = 0.0;    // absolute singular value threshold used
    int rank = 0;
};

// min |Y2 - K Y1|_F through a truncated SVD pseudoinverse of Y1.
// Columns are snapshots. Throws InsufficientData / RankCollapse.
EdmdFit edmd_fit(const Eigen::MatrixXd& y1, const Eigen::MatrixXd& y2);

// Lifts a single trajectory (and for region U its aligned inputs) and fits.
EdmdFit edmd_fit(const Dictionary& dict, std::span<const Eigen::Vector2d> states,
                 std::span<const double> inputs = {});

struct InputBlocks {
    Eigen::MatrixXd A;  // 10 x 10
    Eigen::VectorXd B;  // 10
};

InputBlocks extract_blocks(const Eigen::MatrixXd& k_u);

struct KoopmanModel {
    Eigen::MatrixXd K_r, A_r, C_r;
    Eigen::MatrixXd K_u, A_u, C_u;
    Eigen::VectorXd B_u;
    EdmdFit fit_r;
    EdmdFit fit_u;
};

Eigen::MatrixXd readout_matrix(int lifted_dim);

KoopmanModel fit_koopman(std::span<const Eigen::Vector2d> rural, std::span<const Eigen::Vector2d> urban,
                         std::span<const double> urban_inputs);

// ubar(k) given the rural trajectory produced so far (entries 0..k).
using InputPolicy = std::function<double(int k, std::span<const Eigen::Vector2d> rural)>;

struct Rollout {
    std::vector<Eigen::Vector2d> rural;
    std::vector<Eigen::Vector2d> urban;
    std::vector<double> u_bar;
    std::vector<Eigen::VectorXd> lifted_r;  // dictionary value used at step k
    std::vector<Eigen::VectorXd> lifted_u;
};

// Each step projects A * lift(x) back to the physical states and re-lifts
// from there instead of carrying the lifted vector forward.
Rollout relift_rollout(const KoopmanModel& model, const Eigen::Vector2d& x0_r,
                       const Eigen::Vector2d& x0_u, const InputPolicy& policy, int steps);

std::string koopman_to_json(const KoopmanModel& model, int indent = 2);
KoopmanModel koopman_from_json(const std::string& text);

}  // namespace predsync
