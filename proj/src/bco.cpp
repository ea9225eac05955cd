#include "gpplan/bco.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

namespace gpplan::bco {

namespace {

using bezier::ControlPolygon;

struct Evaluation {
    LossBreakdown loss;
    LossGradient gradient;
};

std::vector<Vec2> zero_gradient(std::size_t m) { return std::vector<Vec2>(m, Vec2::Zero()); }

/// One evaluation of the discretised loss and, optionally, its analytic
/// gradient. The knots t_k = k/M are fixed for the whole evaluation; the
/// chain rule runs through the Bernstein basis values at those knots and the
/// GP's analytic query-point derivatives.
Evaluation evaluate(const gp::GprModel& model, const ControlPolygon& poly, const BcoConfig& cfg,
                    int intervals, bool want_gradient) {
    const int m = static_cast<int>(poly.size());
    const int degree = m - 1;
    const std::size_t knots = static_cast<std::size_t>(intervals) + 1;
    const double dt = 1.0 / intervals;
    const double dist_sg = (poly.points.back() - poly.points.front()).norm();
    const double inv_dist_sg = dist_sg > 1e-12 ? 1.0 / dist_sg : 1.0;
    const double kappa_max = 1.0 / cfg.min_turn_radius;

    // Basis rows per knot for the position and both derivative combs.
    std::vector<std::vector<double>> basis(knots), basis_d1(knots), basis_d2(knots);
    PointList positions(knots);
    std::vector<Vec2> d1(knots), d2(knots);
    std::vector<Vec2> diff1(static_cast<std::size_t>(degree));
    for (int i = 0; i < degree; ++i) {
        diff1[static_cast<std::size_t>(i)] =
            poly.points[static_cast<std::size_t>(i + 1)] - poly.points[static_cast<std::size_t>(i)];
    }
    std::vector<Vec2> diff2;
    if (degree >= 2) {
        diff2.resize(static_cast<std::size_t>(degree - 1));
        for (int i = 0; i + 1 < degree; ++i) {
            diff2[static_cast<std::size_t>(i)] =
                diff1[static_cast<std::size_t>(i + 1)] - diff1[static_cast<std::size_t>(i)];
        }
    }

    for (std::size_t k = 0; k < knots; ++k) {
        const double t = static_cast<double>(k) / intervals;
        basis[k] = bezier::bernstein_basis(degree, t);
        Vec2 pos = Vec2::Zero();
        for (int i = 0; i <= degree; ++i) {
            pos += basis[k][static_cast<std::size_t>(i)] * poly.points[static_cast<std::size_t>(i)];
        }
        positions[k] = pos;

        basis_d1[k] = bezier::bernstein_basis(degree - 1, t);
        Vec2 v1 = Vec2::Zero();
        for (int i = 0; i < degree; ++i) {
            v1 += basis_d1[k][static_cast<std::size_t>(i)] * diff1[static_cast<std::size_t>(i)];
        }
        d1[k] = static_cast<double>(degree) * v1;

        d2[k] = Vec2::Zero();
        if (degree >= 2) {
            basis_d2[k] = bezier::bernstein_basis(degree - 2, t);
            Vec2 v2 = Vec2::Zero();
            for (int i = 0; i + 1 < degree; ++i) {
                v2 += basis_d2[k][static_cast<std::size_t>(i)] * diff2[static_cast<std::size_t>(i)];
            }
            d2[k] = static_cast<double>(degree) * static_cast<double>(degree - 1) * v2;
        }
    }

    const auto posteriors = model.infer_batch(positions, want_gradient);

    Evaluation ev;
    if (want_gradient) {
        ev.gradient.total = zero_gradient(poly.size());
        ev.gradient.length = zero_gradient(poly.size());
        ev.gradient.traversability = zero_gradient(poly.size());
        ev.gradient.variance = zero_gradient(poly.size());
        ev.gradient.obstacle = zero_gradient(poly.size());
        ev.gradient.curvature = zero_gradient(poly.size());
    }

    for (std::size_t k = 0; k < knots; ++k) {
        const double weight = (k == 0 || k + 1 == knots) ? 0.5 * dt : dt;
        const gp::Posterior& post = posteriors[k];

        const double speed = d1[k].norm();
        const double t_raw = post.mean_T;
        const double t_clamped = std::clamp(t_raw, 1e-3, 1.0);
        const double obstacle_gap = cfg.safety_radius - post.mean_d;
        bool degenerate = false;
        const double kappa = bezier::curvature_from_derivatives(d1[k], d2[k], &degenerate);

        ev.loss.length += weight * speed * inv_dist_sg;
        ev.loss.traversability += weight * (1.0 - t_clamped);
        ev.loss.variance += weight * post.variance;
        ev.loss.obstacle += weight * std::max(0.0, obstacle_gap);
        ev.loss.curvature += weight * std::max(0.0, kappa - kappa_max);

        if (!want_gradient) continue;

        // Integrand partials with respect to position / d1 / d2 at this knot.
        const bool trav_active = t_raw > 1e-3 && t_raw < 1.0;
        const bool obstacle_active = obstacle_gap > 0.0;
        const bool curvature_active = !degenerate && kappa > kappa_max;

        Vec2 dlen_dd1 = Vec2::Zero();
        if (speed > 1e-12) dlen_dd1 = d1[k] / speed * inv_dist_sg;

        Vec2 dcurv_dd1 = Vec2::Zero();
        Vec2 dcurv_dd2 = Vec2::Zero();
        if (curvature_active) {
            const double q = d1[k].squaredNorm();
            const double cross = d1[k].x() * d2[k].y() - d1[k].y() * d2[k].x();
            const double sign = cross >= 0.0 ? 1.0 : -1.0;
            const double q32 = q * std::sqrt(q);
            const double q52 = q32 * q;
            dcurv_dd1 = Vec2(sign * d2[k].y() / q32 - 3.0 * std::abs(cross) * d1[k].x() / q52,
                             -sign * d2[k].x() / q32 - 3.0 * std::abs(cross) * d1[k].y() / q52);
            dcurv_dd2 = Vec2(-sign * d1[k].y() / q32, sign * d1[k].x() / q32);
        }

        for (int i = 1; i + 1 < m; ++i) {  // endpoints frozen
            const std::size_t idx = static_cast<std::size_t>(i);
            const double b = basis[k][idx];
            // d d1 / d P_i = degree * (beta_{i-1} - beta_i) * I
            double c1 = 0.0;
            if (i - 1 < degree) c1 += basis_d1[k][static_cast<std::size_t>(i - 1)];
            if (i < degree) c1 -= basis_d1[k][idx];
            c1 *= static_cast<double>(degree);
            // d d2 / d P_i = degree*(degree-1) * (gamma_{i-2} - 2 gamma_{i-1} + gamma_i) * I
            double c2 = 0.0;
            if (degree >= 2) {
                const int last = degree - 2;
                if (i - 2 >= 0 && i - 2 <= last) c2 += basis_d2[k][static_cast<std::size_t>(i - 2)];
                if (i - 1 <= last) c2 -= 2.0 * basis_d2[k][static_cast<std::size_t>(i - 1)];
                if (i <= last) c2 += basis_d2[k][idx];
                c2 *= static_cast<double>(degree) * static_cast<double>(degree - 1);
            }

            ev.gradient.length[idx] += weight * c1 * dlen_dd1;
            if (trav_active) ev.gradient.traversability[idx] -= weight * b * post.grad_mean_T;
            ev.gradient.variance[idx] += weight * b * post.grad_variance;
            if (obstacle_active) ev.gradient.obstacle[idx] -= weight * b * post.grad_mean_d;
            if (curvature_active) {
                ev.gradient.curvature[idx] += weight * (c1 * dcurv_dd1 + c2 * dcurv_dd2);
            }
        }
    }

    ev.loss.total = ev.loss.length + cfg.f_T * ev.loss.traversability +
                    cfg.f_sigma * ev.loss.variance + cfg.f_o * ev.loss.obstacle +
                    cfg.f_c * ev.loss.curvature;
    if (want_gradient) {
        for (std::size_t i = 0; i < poly.size(); ++i) {
            ev.gradient.total[i] = ev.gradient.length[i] +
                                   cfg.f_T * ev.gradient.traversability[i] +
                                   cfg.f_sigma * ev.gradient.variance[i] +
                                   cfg.f_o * ev.gradient.obstacle[i] +
                                   cfg.f_c * ev.gradient.curvature[i];
        }
    }
    return ev;
}

}  // namespace

bezier::ControlPolygon init_priorless(const Vec2& start, const Vec2& goal, double cpr) {
    if (!(cpr > 0.0)) throw ParameterOutOfRangeError("cpr must be positive");
    const double dist = (goal - start).norm();
    if (dist < 1e-6) throw DegenerateEndpointsError("start and goal coincide");
    const int m = std::max(2, static_cast<int>(std::ceil(dist / cpr)) + 1);
    PointList points(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
        points[static_cast<std::size_t>(k)] =
            start + (static_cast<double>(k) / (m - 1)) * (goal - start);
    }
    points.front() = start;
    points.back() = goal;
    return bezier::make_polygon(std::move(points));
}

bezier::ControlPolygon init_from_prior(const PointList& path, double cpr) {
    if (!(cpr > 0.0)) throw ParameterOutOfRangeError("cpr must be positive");
    if (path.size() < 2) throw ParameterOutOfRangeError("prior path needs >= 2 waypoints");

    std::vector<double> cumulative(path.size(), 0.0);
    for (std::size_t i = 1; i < path.size(); ++i) {
        cumulative[i] = cumulative[i - 1] + (path[i] - path[i - 1]).norm();
    }
    const double length = cumulative.back();
    if (length < 1e-6) throw DegenerateEndpointsError("prior path has zero length");

    const int m = std::max(2, static_cast<int>(std::ceil(length / cpr)) + 1);
    PointList points(static_cast<std::size_t>(m));
    std::size_t segment = 0;
    for (int k = 0; k < m; ++k) {
        const double target = length * static_cast<double>(k) / (m - 1);
        while (segment + 2 < path.size() && cumulative[segment + 1] < target) ++segment;
        const double seg_len = cumulative[segment + 1] - cumulative[segment];
        const double frac = seg_len > 0.0 ? (target - cumulative[segment]) / seg_len : 0.0;
        points[static_cast<std::size_t>(k)] =
            path[segment] + std::clamp(frac, 0.0, 1.0) * (path[segment + 1] - path[segment]);
    }
    points.front() = path.front();
    points.back() = path.back();
    return bezier::make_polygon(std::move(points));
}

LossBreakdown loss(const gp::GprModel& model, const bezier::ControlPolygon& p,
                   const BcoConfig& cfg) {
    return loss(model, p, cfg, bezier::interval_count(p, cfg.res));
}

LossBreakdown loss(const gp::GprModel& model, const bezier::ControlPolygon& p,
                   const BcoConfig& cfg, int intervals) {
    return evaluate(model, p, cfg, intervals, /*want_gradient=*/false).loss;
}

LossGradient loss_gradient(const gp::GprModel& model, const bezier::ControlPolygon& p,
                           const BcoConfig& cfg) {
    return loss_gradient(model, p, cfg, bezier::interval_count(p, cfg.res));
}

LossGradient loss_gradient(const gp::GprModel& model, const bezier::ControlPolygon& p,
                           const BcoConfig& cfg, int intervals) {
    return evaluate(model, p, cfg, intervals, /*want_gradient=*/true).gradient;
}

OptimisationTrace optimise(const gp::GprModel& model, const bezier::ControlPolygon& p0,
                           const BcoConfig& cfg) {
    constexpr double kBeta1 = 0.9;
    constexpr double kBeta2 = 0.999;
    constexpr double kEps = 1e-8;

    OptimisationTrace trace;
    bezier::ControlPolygon poly = p0;
    const std::size_t m = poly.size();
    const std::size_t free_count = m >= 2 ? m - 2 : 0;

    Eigen::VectorXd mom1 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * free_count));
    Eigen::VectorXd mom2 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * free_count));

    double previous_total = std::numeric_limits<double>::infinity();
    int streak = 0;
    trace.stop_reason = StopReason::max_iterations;

    for (int iter = 1; iter <= cfg.max_iter; ++iter) {
        const int intervals = bezier::interval_count(poly, cfg.res);
        const Evaluation ev = evaluate(model, poly, cfg, intervals, /*want_gradient=*/true);
        trace.iterations.push_back(ev.loss);

        if (std::abs(ev.loss.total - previous_total) < cfg.early_stop_tol) {
            if (++streak >= cfg.patience) {
                trace.stop_reason = StopReason::converged;
                break;
            }
        } else {
            streak = 0;
        }
        previous_total = ev.loss.total;

        const double corr1 = 1.0 - std::pow(kBeta1, iter);
        const double corr2 = 1.0 - std::pow(kBeta2, iter);
        for (std::size_t i = 0; i < free_count; ++i) {
            const Vec2& g = ev.gradient.total[i + 1];
            for (int axis = 0; axis < 2; ++axis) {
                const Eigen::Index slot = static_cast<Eigen::Index>(2 * i) + axis;
                mom1(slot) = kBeta1 * mom1(slot) + (1.0 - kBeta1) * g(axis);
                mom2(slot) = kBeta2 * mom2(slot) + (1.0 - kBeta2) * g(axis) * g(axis);
                const double step =
                    cfg.lr * (mom1(slot) / corr1) / (std::sqrt(mom2(slot) / corr2) + kEps);
                poly.points[i + 1](axis) -= step;
            }
        }
    }

    trace.final_polygon = poly;
    trace.iterations_run = static_cast<int>(trace.iterations.size());
    return trace;
}

std::string trace_to_json_string(const OptimisationTrace& trace, int indent) {
    nlohmann::json doc = nlohmann::json::array();
    for (const LossBreakdown& it : trace.iterations) {
        doc.push_back({{"total", it.total},
                       {"L_l", it.length},
                       {"L_T", it.traversability},
                       {"L_sigma", it.variance},
                       {"L_o", it.obstacle},
                       {"L_c", it.curvature}});
    }
    return doc.dump(indent);
}

}  // namespace gpplan::bco
