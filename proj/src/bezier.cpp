#include "gpplan/bezier.hpp"

#include <cmath>

namespace gpplan::bezier {

namespace {

void check_parameter(double t) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw ParameterOutOfRangeError("curve parameter t must lie in [0,1]");
    }
}

/// Weighted sum of `points[offset..offset+degree]` differences is avoided;
/// this evaluates sum_i basis_i * src_i for an arbitrary point span.
Vec2 basis_combination(const std::vector<Vec2>& src, int degree, double t) {
    const std::vector<double> basis = bernstein_basis(degree, t);
    Vec2 acc{0.0, 0.0};
    for (int i = 0; i <= degree; ++i) acc += basis[static_cast<std::size_t>(i)] * src[static_cast<std::size_t>(i)];
    return acc;
}

}  // namespace

ControlPolygon make_polygon(PointList points) {
    if (points.size() < 2) {
        throw ParameterOutOfRangeError("a control polygon needs at least 2 points");
    }
    for (const auto& p : points) {
        if (!p.allFinite()) throw ParameterOutOfRangeError("control point is not finite");
    }
    return ControlPolygon{std::move(points)};
}

std::vector<double> bernstein_basis(int degree, double t) {
    std::vector<double> basis(static_cast<std::size_t>(degree) + 1, 0.0);
    basis[0] = 1.0;
    const double u = 1.0 - t;
    for (int d = 1; d <= degree; ++d) {
        basis[static_cast<std::size_t>(d)] = t * basis[static_cast<std::size_t>(d - 1)];
        for (int i = d - 1; i > 0; --i) {
            basis[static_cast<std::size_t>(i)] =
                u * basis[static_cast<std::size_t>(i)] + t * basis[static_cast<std::size_t>(i - 1)];
        }
        basis[0] *= u;
    }
    return basis;
}

Vec2 evaluate(const ControlPolygon& p, double t) {
    check_parameter(t);
    return basis_combination(p.points, p.degree(), t);
}

void derivatives(const ControlPolygon& p, double t, Vec2& d1, Vec2& d2) {
    check_parameter(t);
    const int n = p.degree();
    std::vector<Vec2> diff1(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        diff1[static_cast<std::size_t>(i)] =
            p.points[static_cast<std::size_t>(i + 1)] - p.points[static_cast<std::size_t>(i)];
    }
    d1 = static_cast<double>(n) * basis_combination(diff1, n - 1, t);

    d2 = Vec2::Zero();
    if (n >= 2) {
        std::vector<Vec2> diff2(static_cast<std::size_t>(n - 1));
        for (int i = 0; i + 1 < n; ++i) {
            diff2[static_cast<std::size_t>(i)] =
                diff1[static_cast<std::size_t>(i + 1)] - diff1[static_cast<std::size_t>(i)];
        }
        d2 = static_cast<double>(n) * static_cast<double>(n - 1) *
             basis_combination(diff2, n - 2, t);
    }
}

double curvature_from_derivatives(const Vec2& d1, const Vec2& d2, bool* degenerate) {
    const double speed2 = d1.squaredNorm();
    if (speed2 < 1e-18) {  // |d1| < 1e-9
        if (degenerate) *degenerate = true;
        return 0.0;
    }
    if (degenerate) *degenerate = false;
    const double cross = d1.x() * d2.y() - d1.y() * d2.x();
    return std::abs(cross) / (speed2 * std::sqrt(speed2));
}

double curvature(const ControlPolygon& p, double t, bool* degenerate) {
    Vec2 d1, d2;
    derivatives(p, t, d1, d2);
    return curvature_from_derivatives(d1, d2, degenerate);
}

double arc_length(const ControlPolygon& p) {
    constexpr int kSegments = 256;
    double length = 0.0;
    Vec2 prev = p.points.front();
    for (int i = 1; i <= kSegments; ++i) {
        const Vec2 cur = evaluate(p, static_cast<double>(i) / kSegments);
        length += (cur - prev).norm();
        prev = cur;
    }
    return length;
}

int interval_count(const ControlPolygon& p, double res) {
    if (!(res > 0.0)) throw ParameterOutOfRangeError("sampling resolution must be positive");
    const double length = arc_length(p);
    return std::max(8, static_cast<int>(std::ceil(length / res)));
}

std::vector<CurveSample> sample_path(const ControlPolygon& p, double res) {
    const int intervals = interval_count(p, res);
    std::vector<CurveSample> samples(static_cast<std::size_t>(intervals) + 1);
    for (int k = 0; k <= intervals; ++k) {
        CurveSample& s = samples[static_cast<std::size_t>(k)];
        s.t = static_cast<double>(k) / intervals;
        s.position = evaluate(p, s.t);
        derivatives(p, s.t, s.d1, s.d2);
        s.curvature = curvature_from_derivatives(s.d1, s.d2);
    }
    return samples;
}

}  // namespace gpplan::bezier
