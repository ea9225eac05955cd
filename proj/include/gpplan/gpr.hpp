#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cstddef>
#include <string>
#include <vector>

#include "gpplan/common.hpp"
#include "gpplan/errors.hpp"

namespace gpplan::gp {

/// Training data for the two regressed fields: terrain traversability in
/// (0,1] and Euclidean obstacle distance in metres. Invariants are enforced
/// at construction; in particular inputs closer than 1e-9 m are rejected as
/// duplicates.
class TrainingSet {
public:
    TrainingSet(PointList points, std::vector<double> traversability,
                std::vector<double> obstacle_distance);

    std::size_t size() const { return points_.size(); }
    const PointList& points() const { return points_; }
    const std::vector<double>& traversability() const { return traversability_; }
    const std::vector<double>& obstacle_distance() const { return obstacle_distance_; }

private:
    PointList points_;
    std::vector<double> traversability_;
    std::vector<double> obstacle_distance_;
};

/// RBF kernel hyperparameters. output_scale is the kernel variance s², so
/// k(a,a) = output_scale. observation_noise is a standard deviation and is
/// floored at 1e-6 to keep the Gram matrix positive-definite on
/// near-duplicate inputs.
struct KernelParams {
    double lengthscale = 1.0;
    double output_scale = 1.0;
    double observation_noise = 0.1;

    KernelParams() = default;
    KernelParams(double lengthscale_m, double output_scale_var, double noise_std);
};

constexpr double kNoiseFloor = 1e-6;

/// Posterior of both fields at one query point, with analytic derivatives
/// with respect to the query. The variance is the traversability head's
/// process variance, which is the sigma^2 the planners consume.
struct Posterior {
    double mean_T = 0.0;
    double mean_d = 0.0;
    double variance = 0.0;
    Vec2 grad_mean_T{0.0, 0.0};
    Vec2 grad_mean_d{0.0, 0.0};
    Vec2 grad_variance{0.0, 0.0};
};

double rbf_kernel(const Vec2& a, const Vec2& b, const KernelParams& params);

enum class Output { traversability, distance };

/// Two independent exact GPs over the shared inputs: one per output, each
/// with its own hyperparameters and Cholesky factorisation. Immutable after
/// construction and safe to share across concurrent readers.
class GprModel {
public:
    GprModel(TrainingSet training, KernelParams params_T, KernelParams params_d);

    const TrainingSet& training() const { return training_; }
    const KernelParams& params_T() const { return params_T_; }
    const KernelParams& params_d() const { return params_d_; }

    Posterior infer(const Vec2& q) const;
    std::vector<Posterior> infer_batch(const PointList& qs, bool with_gradients = true) const;

    /// Posterior mean of the obstacle-distance field only. Skips the
    /// variance solve, O(n) per query; used by collision checks.
    double mean_distance(const Vec2& q) const;

    /// Lower-triangular factor L with L·Lᵀ = K(X,X) + o_n²·I for the
    /// requested output head.
    Eigen::MatrixXd cholesky_factor(Output which) const;
    const Eigen::VectorXd& alpha_T() const { return alpha_T_; }
    const Eigen::VectorXd& alpha_d() const { return alpha_d_; }

    std::string to_json_string(int indent = -1) const;
    static GprModel from_json_string(const std::string& text);

private:
    TrainingSet training_;
    KernelParams params_T_;
    KernelParams params_d_;
    Eigen::Matrix2Xd inputs_;  // 2 x n copy of the training points
    Eigen::LLT<Eigen::MatrixXd> llt_T_;
    Eigen::LLT<Eigen::MatrixXd> llt_d_;
    Eigen::VectorXd alpha_T_;
    Eigen::VectorXd alpha_d_;
};

/// Factorises K(X,X) + o_n²·I for both output heads.
GprModel train(const TrainingSet& training, const KernelParams& params_T,
               const KernelParams& params_d);
GprModel train(const TrainingSet& training, const KernelParams& params);

inline Posterior infer(const GprModel& model, const Vec2& q) { return model.infer(q); }
inline std::vector<Posterior> infer_batch(const GprModel& model, const PointList& qs,
                                          bool with_gradients = true) {
    return model.infer_batch(qs, with_gradients);
}

/// Negative log marginal likelihood
///   ½·yᵀ[K+o_n²I]⁻¹y + ½·log det(K+o_n²I) + (n/2)·log 2π
/// of one output under the given hyperparameters.
double nlml(const TrainingSet& training, const KernelParams& params, Output target);

struct FitOptions {
    int max_iterations = 200;
    double initial_step = 0.05;
    double tol = 1e-6;      // convergence on |delta NLML|
    bool fit_noise = true;  // when false the observation noise is held fixed
};

/// Gradient descent on log-hyperparameters minimising the NLML. Candidate
/// steps whose factorisation fails or whose NLML increases are rejected and
/// the step halved, so the result never scores worse than `init`.
KernelParams fit_hyperparameters(const TrainingSet& training, const KernelParams& init,
                                 Output target, const FitOptions& options = {});

}  // namespace gpplan::gp
