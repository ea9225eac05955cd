#pragma once

#include <string>
#include <vector>

#include "gpplan/bezier.hpp"
#include "gpplan/common.hpp"
#include "gpplan/errors.hpp"
#include "gpplan/gpr.hpp"

namespace gpplan::bco {

struct BcoConfig {
    double f_T = 10.0;
    double f_sigma = 200.0;
    double f_o = 1000.0;
    double f_c = 100.0;
    double safety_radius = 0.1;     // R
    double min_turn_radius = 0.25;  // r0, curvature threshold is 1/r0
    double lr = 0.05;               // Adam initial learning rate
    double res = 0.1;               // integration sampling resolution
    double cpr = 0.5;               // control-point placement resolution
    int max_iter = 500;
    double early_stop_tol = 1e-4;
    int patience = 10;
};

/// Unweighted loss terms plus the weighted total:
///   total = length + f_T*traversability + f_sigma*variance
///         + f_o*obstacle + f_c*curvature
struct LossBreakdown {
    double total = 0.0;
    double length = 0.0;         // path length / ||g - s||
    double traversability = 0.0; // integral of (1 - T)
    double variance = 0.0;       // integral of sigma^2
    double obstacle = 0.0;       // integral of max(0, R - d)
    double curvature = 0.0;      // integral of max(0, kappa - 1/r0)
};

/// Per-term gradients with respect to the control points. Entries for the
/// frozen endpoints P0 and P(m-1) are exactly zero. `total` carries the
/// loss-weighted sum.
struct LossGradient {
    std::vector<Vec2> total;
    std::vector<Vec2> length;
    std::vector<Vec2> traversability;
    std::vector<Vec2> variance;
    std::vector<Vec2> obstacle;
    std::vector<Vec2> curvature;
};

enum class StopReason { converged, max_iterations };

struct OptimisationTrace {
    std::vector<LossBreakdown> iterations;
    bezier::ControlPolygon final_polygon;
    int iterations_run = 0;
    StopReason stop_reason = StopReason::max_iterations;
};

/// max(2, ceil(||g-s||/cpr) + 1) control points evenly spaced on [s, g].
bezier::ControlPolygon init_priorless(const Vec2& start, const Vec2& goal, double cpr = 0.5);

/// Resamples a prior polyline by arc length at `cpr` spacing; the resampled
/// points become the control points, endpoints preserved exactly.
bezier::ControlPolygon init_from_prior(const PointList& path, double cpr = 0.5);

/// Trapezoidal integration of the loss terms over sample_path(P, cfg.res).
LossBreakdown loss(const gp::GprModel& model, const bezier::ControlPolygon& p,
                   const BcoConfig& cfg);
/// Same, at a caller-fixed interval count (the discretisation the gradient
/// differentiates).
LossBreakdown loss(const gp::GprModel& model, const bezier::ControlPolygon& p,
                   const BcoConfig& cfg, int intervals);

/// Exact analytic gradient of the discretised loss at the interval count the
/// current curve length implies.
LossGradient loss_gradient(const gp::GprModel& model, const bezier::ControlPolygon& p,
                           const BcoConfig& cfg);
LossGradient loss_gradient(const gp::GprModel& model, const bezier::ControlPolygon& p,
                           const BcoConfig& cfg, int intervals);

/// Adam descent on the free control points, resampling the integration knots
/// from the current length each iteration and early-stopping once the loss
/// change stays below early_stop_tol for `patience` consecutive iterations.
OptimisationTrace optimise(const gp::GprModel& model, const bezier::ControlPolygon& p0,
                           const BcoConfig& cfg);

/// JSON array of {total, L_l, L_T, L_sigma, L_o, L_c} per iteration.
std::string trace_to_json_string(const OptimisationTrace& trace, int indent = -1);

}  // namespace gpplan::bco
