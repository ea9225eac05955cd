#include "gpplan/gpr.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <numbers>

namespace gpplan::gp {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Squared-distance matrix between training inputs (n x n).
MatrixXd squared_distances(const Eigen::Matrix2Xd& x) {
    const Eigen::Index n = x.cols();
    const VectorXd sq = x.colwise().squaredNorm();
    MatrixXd d2 = sq.replicate(1, n) + sq.transpose().replicate(n, 1) - 2.0 * (x.transpose() * x);
    return d2.cwiseMax(0.0);
}

MatrixXd kernel_matrix(const Eigen::Matrix2Xd& x, const KernelParams& p) {
    const MatrixXd d2 = squared_distances(x);
    return p.output_scale * (-d2 / (2.0 * p.lengthscale * p.lengthscale)).array().exp();
}

Eigen::LLT<MatrixXd> factorise(const Eigen::Matrix2Xd& x, const KernelParams& p) {
    MatrixXd gram = kernel_matrix(x, p);
    gram.diagonal().array() += p.observation_noise * p.observation_noise;
    Eigen::LLT<MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) {
        throw NonPositiveDefiniteError("kernel Gram matrix is not positive-definite");
    }
    return llt;
}

Eigen::Matrix2Xd to_matrix(const PointList& points) {
    Eigen::Matrix2Xd x(2, static_cast<Eigen::Index>(points.size()));
    for (Eigen::Index i = 0; i < x.cols(); ++i) x.col(i) = points[static_cast<std::size_t>(i)];
    return x;
}

VectorXd to_vector(const std::vector<double>& v) {
    return Eigen::Map<const VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

TrainingSet::TrainingSet(PointList points, std::vector<double> traversability,
                         std::vector<double> obstacle_distance)
    : points_(std::move(points)),
      traversability_(std::move(traversability)),
      obstacle_distance_(std::move(obstacle_distance)) {
    if (points_.empty() || points_.size() != traversability_.size() ||
        points_.size() != obstacle_distance_.size()) {
        throw ParameterOutOfRangeError("training lists must have equal length >= 1");
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!points_[i].allFinite()) {
            throw ParameterOutOfRangeError("training point is not finite");
        }
        if (!(traversability_[i] > 0.0 && traversability_[i] <= 1.0)) {
            throw ParameterOutOfRangeError("traversability must lie in (0,1]");
        }
        if (!(obstacle_distance_[i] >= 0.0) || !std::isfinite(obstacle_distance_[i])) {
            throw ParameterOutOfRangeError("obstacle distance must be >= 0");
        }
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
        for (std::size_t j = i + 1; j < points_.size(); ++j) {
            if ((points_[i] - points_[j]).norm() < 1e-9) {
                throw SingularTrainingSetError("duplicate training inputs within 1e-9 m");
            }
        }
    }
}

KernelParams::KernelParams(double lengthscale_m, double output_scale_var, double noise_std) {
    if (!(lengthscale_m > 0.0) || !(output_scale_var > 0.0) || noise_std < 0.0 ||
        !std::isfinite(lengthscale_m) || !std::isfinite(output_scale_var) ||
        !std::isfinite(noise_std)) {
        throw ParameterOutOfRangeError("kernel parameters must be positive and finite");
    }
    lengthscale = lengthscale_m;
    output_scale = output_scale_var;
    observation_noise = std::max(noise_std, kNoiseFloor);
}

double rbf_kernel(const Vec2& a, const Vec2& b, const KernelParams& params) {
    const double d2 = (a - b).squaredNorm();
    return params.output_scale * std::exp(-d2 / (2.0 * params.lengthscale * params.lengthscale));
}

GprModel::GprModel(TrainingSet training, KernelParams params_T, KernelParams params_d)
    : training_(std::move(training)),
      params_T_(params_T),
      params_d_(params_d),
      inputs_(to_matrix(training_.points())),
      llt_T_(factorise(inputs_, params_T_)),
      llt_d_(factorise(inputs_, params_d_)),
      alpha_T_(llt_T_.solve(to_vector(training_.traversability()))),
      alpha_d_(llt_d_.solve(to_vector(training_.obstacle_distance()))) {}

GprModel train(const TrainingSet& training, const KernelParams& params_T,
               const KernelParams& params_d) {
    return GprModel(training, params_T, params_d);
}

GprModel train(const TrainingSet& training, const KernelParams& params) {
    return GprModel(training, params, params);
}

Posterior GprModel::infer(const Vec2& q) const { return infer_batch({q})[0]; }

std::vector<Posterior> GprModel::infer_batch(const PointList& qs, bool with_gradients) const {
    const Eigen::Index n = inputs_.cols();
    const Eigen::Index m = static_cast<Eigen::Index>(qs.size());
    std::vector<Posterior> out(qs.size());
    if (m == 0) return out;

    Eigen::Matrix2Xd q(2, m);
    for (Eigen::Index j = 0; j < m; ++j) q.col(j) = qs[static_cast<std::size_t>(j)];

    // Cross squared distances, n x m.
    const VectorXd sx = inputs_.colwise().squaredNorm();
    const VectorXd sq = q.colwise().squaredNorm();
    MatrixXd d2 = sx.replicate(1, m) + sq.transpose().replicate(n, 1) -
                  2.0 * (inputs_.transpose() * q);
    d2 = d2.cwiseMax(0.0);

    const double lT2 = params_T_.lengthscale * params_T_.lengthscale;
    const double ld2 = params_d_.lengthscale * params_d_.lengthscale;
    const MatrixXd kT = params_T_.output_scale * (-d2 / (2.0 * lT2)).array().exp();
    const MatrixXd kd = params_d_.output_scale * (-d2 / (2.0 * ld2)).array().exp();

    const VectorXd mean_T = kT.transpose() * alpha_T_;
    const VectorXd mean_d = kd.transpose() * alpha_d_;

    // beta = [K+o_n^2 I]^-1 K(X,q) for the traversability head, reused by
    // the variance and its gradient.
    const MatrixXd beta = llt_T_.solve(kT);
    const VectorXd quad = (kT.array() * beta.array()).colwise().sum();

    Eigen::Matrix2Xd grad_T, grad_d, grad_var;
    if (with_gradients) {
        // d k(q,x)/dq = -(q - x)/l^2 * k(q,x); the sums over training points
        // collapse into one weighted first moment per query.
        const MatrixXd wT = kT.array().colwise() * alpha_T_.array();
        const MatrixXd wd = kd.array().colwise() * alpha_d_.array();
        const Eigen::RowVectorXd s0T = wT.colwise().sum();
        const Eigen::RowVectorXd s0d = wd.colwise().sum();
        const Eigen::Matrix2Xd s1T = inputs_ * wT;
        const Eigen::Matrix2Xd s1d = inputs_ * wd;
        grad_T = -(q.array().rowwise() * s0T.array() - s1T.array()) / lT2;
        grad_d = -(q.array().rowwise() * s0d.array() - s1d.array()) / ld2;

        const MatrixXd wv = kT.array() * beta.array();
        const Eigen::RowVectorXd v0 = wv.colwise().sum();
        const Eigen::Matrix2Xd v1 = inputs_ * wv;
        grad_var = 2.0 * (q.array().rowwise() * v0.array() - v1.array()) / lT2;
    }

    for (Eigen::Index j = 0; j < m; ++j) {
        Posterior& p = out[static_cast<std::size_t>(j)];
        p.mean_T = mean_T(j);
        p.mean_d = mean_d(j);
        p.variance = std::max(params_T_.output_scale - quad(j), 0.0);
        if (with_gradients) {
            p.grad_mean_T = grad_T.col(j);
            p.grad_mean_d = grad_d.col(j);
            p.grad_variance = grad_var.col(j);
        }
    }
    return out;
}

double GprModel::mean_distance(const Vec2& q) const {
    const double ld2 = params_d_.lengthscale * params_d_.lengthscale;
    const VectorXd d2 = (inputs_.colwise() - q).colwise().squaredNorm();
    const VectorXd kd = params_d_.output_scale * (-d2 / (2.0 * ld2)).array().exp();
    return kd.dot(alpha_d_);
}

Eigen::MatrixXd GprModel::cholesky_factor(Output which) const {
    const auto& llt = which == Output::traversability ? llt_T_ : llt_d_;
    return llt.matrixL();
}

double nlml(const TrainingSet& training, const KernelParams& params, Output target) {
    const Eigen::Matrix2Xd x = to_matrix(training.points());
    const VectorXd y = to_vector(target == Output::traversability ? training.traversability()
                                                                  : training.obstacle_distance());
    const auto llt = factorise(x, params);
    const VectorXd alpha = llt.solve(y);
    const double log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    const double n = static_cast<double>(training.size());
    return 0.5 * y.dot(alpha) + 0.5 * log_det + 0.5 * n * std::log(2.0 * std::numbers::pi);
}

namespace {

struct NlmlEval {
    double value = 0.0;
    Eigen::Vector3d grad{0.0, 0.0, 0.0};  // wrt (log l, log s2, log o_n)
};

/// NLML and its gradient in log-parameter space.
///   dNLML/dθ = ½·tr((A⁻¹ - ααᵀ)·dA/dθ),  A = K + o_n²·I
NlmlEval nlml_with_gradient(const Eigen::Matrix2Xd& x, const VectorXd& y, const MatrixXd& d2,
                            const KernelParams& p) {
    const Eigen::Index n = x.cols();
    const double l2 = p.lengthscale * p.lengthscale;
    const MatrixXd k = p.output_scale * (-d2 / (2.0 * l2)).array().exp();
    MatrixXd gram = k;
    gram.diagonal().array() += p.observation_noise * p.observation_noise;
    Eigen::LLT<MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) {
        throw NonPositiveDefiniteError("candidate hyperparameters are not positive-definite");
    }
    const VectorXd alpha = llt.solve(y);
    const double log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();

    NlmlEval eval;
    eval.value = 0.5 * y.dot(alpha) + 0.5 * log_det +
                 0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);

    const MatrixXd a_inv = llt.solve(MatrixXd::Identity(n, n));
    const MatrixXd m = a_inv - alpha * alpha.transpose();
    const MatrixXd dk_dlog_l = k.array() * (d2.array() / l2);
    eval.grad(0) = 0.5 * (m.array() * dk_dlog_l.array()).sum();
    eval.grad(1) = 0.5 * (m.array() * k.array()).sum();
    eval.grad(2) = p.observation_noise * p.observation_noise * m.trace();
    return eval;
}

KernelParams params_from_log(const Eigen::Vector3d& theta) {
    return KernelParams(std::exp(theta(0)), std::exp(theta(1)), std::exp(theta(2)));
}

}  // namespace

KernelParams fit_hyperparameters(const TrainingSet& training, const KernelParams& init,
                                 Output target, const FitOptions& options) {
    if (training.size() < 2) {
        throw ParameterOutOfRangeError("hyperparameter fitting needs at least 2 points");
    }
    const Eigen::Matrix2Xd x = to_matrix(training.points());
    const VectorXd y = to_vector(target == Output::traversability ? training.traversability()
                                                                  : training.obstacle_distance());
    const MatrixXd d2 = squared_distances(x);

    constexpr double kLogBound = 12.0;
    const double log_noise_floor = std::log(kNoiseFloor);
    auto clamp_theta = [&](Eigen::Vector3d t) {
        t(0) = std::clamp(t(0), -kLogBound, kLogBound);
        t(1) = std::clamp(t(1), -kLogBound, kLogBound);
        t(2) = std::clamp(t(2), log_noise_floor, kLogBound);
        return t;
    };

    Eigen::Vector3d theta = clamp_theta({std::log(init.lengthscale), std::log(init.output_scale),
                                         std::log(init.observation_noise)});
    NlmlEval current = nlml_with_gradient(x, y, d2, params_from_log(theta));
    double step = options.initial_step;

    for (int it = 0; it < options.max_iterations; ++it) {
        Eigen::Vector3d direction = current.grad;
        if (!options.fit_noise) direction(2) = 0.0;
        if (direction.norm() < 1e-14) break;

        const Eigen::Vector3d candidate = clamp_theta(theta - step * direction);
        NlmlEval next;
        bool ok = true;
        try {
            next = nlml_with_gradient(x, y, d2, params_from_log(candidate));
        } catch (const NonPositiveDefiniteError&) {
            ok = false;
        }
        if (!ok || !(next.value <= current.value)) {
            step *= 0.5;
            if (step < 1e-14) break;
            continue;
        }
        const double improvement = current.value - next.value;
        theta = candidate;
        current = next;
        step = std::min(step * 1.2, 0.5);
        if (improvement < options.tol) break;
    }
    return params_from_log(theta);
}

std::string GprModel::to_json_string(int indent) const {
    nlohmann::json doc;
    auto& pts = doc["points"];
    pts = nlohmann::json::array();
    for (const auto& p : training_.points()) pts.push_back({p.x(), p.y()});
    doc["traversability"] = training_.traversability();
    doc["obstacle_distance"] = training_.obstacle_distance();
    auto dump_params = [](const KernelParams& p) {
        return nlohmann::json{{"lengthscale", p.lengthscale},
                              {"output_scale", p.output_scale},
                              {"observation_noise", p.observation_noise}};
    };
    doc["params_T"] = dump_params(params_T_);
    doc["params_d"] = dump_params(params_d_);
    return doc.dump(indent);
}

GprModel GprModel::from_json_string(const std::string& text) {
    const nlohmann::json doc = nlohmann::json::parse(text);
    PointList points;
    for (const auto& p : doc.at("points")) {
        points.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    }
    auto load_params = [](const nlohmann::json& j) {
        return KernelParams(j.at("lengthscale").get<double>(), j.at("output_scale").get<double>(),
                            j.at("observation_noise").get<double>());
    };
    TrainingSet training(std::move(points), doc.at("traversability").get<std::vector<double>>(),
                         doc.at("obstacle_distance").get<std::vector<double>>());
    return GprModel(std::move(training), load_params(doc.at("params_T")),
                    load_params(doc.at("params_d")));
}

}  // namespace gpplan::gp
