#pragma once

#include <vector>

#include "gpplan/common.hpp"
#include "gpplan/errors.hpp"

namespace gpplan::bezier {

/// Ordered Bézier control points P0..P(m-1), m >= 2. The curve has degree
/// m-1 (standard Bernstein basis).
struct ControlPolygon {
    PointList points;

    std::size_t size() const { return points.size(); }
    int degree() const { return static_cast<int>(points.size()) - 1; }
};

ControlPolygon make_polygon(PointList points);

struct CurveSample {
    double t = 0.0;
    Vec2 position{0.0, 0.0};
    Vec2 d1{0.0, 0.0};  // dB/dt
    Vec2 d2{0.0, 0.0};  // d²B/dt²
    double curvature = 0.0;
};

/// Bernstein basis values b_{i,degree}(t) for i = 0..degree, computed with
/// the triangular recurrence (no binomial coefficients, stable for high
/// degrees).
std::vector<double> bernstein_basis(int degree, double t);

Vec2 evaluate(const ControlPolygon& p, double t);

/// First and second parametric derivatives. d2 is (0,0) for m = 2.
void derivatives(const ControlPolygon& p, double t, Vec2& d1, Vec2& d2);

/// Unsigned planar curvature |x'y'' - y'x''| / (x'^2 + y'^2)^(3/2).
/// Returns 0 and sets *degenerate when the speed is below 1e-9.
double curvature(const ControlPolygon& p, double t, bool* degenerate = nullptr);
double curvature_from_derivatives(const Vec2& d1, const Vec2& d2, bool* degenerate = nullptr);

/// Polyline arc-length estimate with a fixed 256-segment subdivision.
double arc_length(const ControlPolygon& p);

/// Interval count for sampling the curve at roughly `res` metres of spacing:
/// max(8, ceil(length / res)).
int interval_count(const ControlPolygon& p, double res);

/// Samples the curve at interval_count(p, res) + 1 uniformly spaced t-knots,
/// t = 0 and t = 1 included.
std::vector<CurveSample> sample_path(const ControlPolygon& p, double res);

}  // namespace gpplan::bezier
