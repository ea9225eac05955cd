#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gpplan/bezier.hpp"
#include "oracles.hpp"

using namespace gpplan;
using bezier::ControlPolygon;
using bezier::make_polygon;

namespace {

/// Convex hull (monotone chain), then point-in-hull by half-plane checks.
std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
        return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
    });
    auto cross = [](const Vec2& o, const Vec2& a, const Vec2& b) {
        return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
    };
    std::vector<Vec2> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k > 1 ? k - 1 : k);
    return hull;
}

bool inside_hull(const std::vector<Vec2>& hull, const Vec2& p, double tol) {
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const Vec2& a = hull[i];
        const Vec2& b = hull[(i + 1) % hull.size()];
        const double cross = (b.x() - a.x()) * (p.y() - a.y()) - (b.y() - a.y()) * (p.x() - a.x());
        if (cross < -tol) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("evaluate: partition of unity and simple closed forms") {
    const ControlPolygon constant = make_polygon({Vec2(2, 3), Vec2(2, 3), Vec2(2, 3), Vec2(2, 3)});
    for (double t : {0.0, 0.2, 0.5, 0.77, 1.0}) {
        CHECK((bezier::evaluate(constant, t) - Vec2(2, 3)).norm() == doctest::Approx(0.0));
    }

    const ControlPolygon line = make_polygon({Vec2(0, 0), Vec2(1, 0)});
    CHECK((bezier::evaluate(line, 0.5) - Vec2(0.5, 0.0)).norm() == doctest::Approx(0.0));

    const ControlPolygon quad = make_polygon({Vec2(0, 0), Vec2(1, 2), Vec2(2, 0)});
    CHECK((bezier::evaluate(quad, 0.5) - Vec2(1.0, 1.0)).norm() == doctest::Approx(0.0));
}

TEST_CASE("evaluate: rejects parameters outside the unit interval") {
    const ControlPolygon line = make_polygon({Vec2(0, 0), Vec2(1, 0)});
    CHECK_THROWS_AS(bezier::evaluate(line, -0.01), ParameterOutOfRangeError);
    CHECK_THROWS_AS(bezier::evaluate(line, 1.01), ParameterOutOfRangeError);
    CHECK_THROWS_AS(make_polygon({Vec2(0, 0)}), ParameterOutOfRangeError);
}

TEST_CASE("evaluate: endpoint interpolation is exact") {
    Rng rng(7);
    for (int c = 0; c < 20; ++c) {
        const auto poly = oracles::random_polygon(rng, 3 + static_cast<int>(rng.uniform_int(7)));
        CHECK(bezier::evaluate(poly, 0.0) == poly.points.front());
        CHECK(bezier::evaluate(poly, 1.0) == poly.points.back());
    }
}

TEST_CASE("evaluate: de Casteljau equivalence") {
    Rng rng(13);
    for (int c = 0; c < 100; ++c) {
        const int m = 2 + static_cast<int>(rng.uniform_int(9));  // up to 10 points
        const auto poly = oracles::random_polygon(rng, m);
        const double t = rng.uniform();
        const Vec2 got = bezier::evaluate(poly, t);
        const Vec2 want = oracles::de_casteljau(poly.points, t);
        CHECK((got - want).norm() < 1e-12);
    }
}

TEST_CASE("evaluate: convex hull property") {
    Rng rng(19);
    for (int c = 0; c < 100; ++c) {
        const auto poly = oracles::random_polygon(rng, 3 + static_cast<int>(rng.uniform_int(6)));
        const auto hull = convex_hull(poly.points);
        if (hull.size() < 3) continue;  // collinear control points
        for (int k = 0; k <= 20; ++k) {
            const Vec2 p = bezier::evaluate(poly, k / 20.0);
            CHECK(inside_hull(hull, p, 1e-9));
        }
    }
}

TEST_CASE("derivatives: affine and constant cases") {
    const ControlPolygon diag =
        make_polygon({Vec2(0, 0), Vec2(1, 1), Vec2(2, 2), Vec2(3, 3)});
    for (double t : {0.0, 0.3, 0.9}) {
        Vec2 d1, d2;
        bezier::derivatives(diag, t, d1, d2);
        CHECK(d2.norm() == doctest::Approx(0.0).epsilon(1e-12));
    }

    const ControlPolygon line = make_polygon({Vec2(0, 0), Vec2(1, 0)});
    for (double t : {0.0, 0.5, 1.0}) {
        Vec2 d1, d2;
        bezier::derivatives(line, t, d1, d2);
        CHECK((d1 - Vec2(1, 0)).norm() == doctest::Approx(0.0));
        CHECK(d2.norm() == doctest::Approx(0.0));
    }
}

TEST_CASE("derivatives: finite-difference agreement") {
    Rng rng(29);
    for (int c = 0; c < 20; ++c) {
        const auto poly = oracles::random_polygon(rng, 6);
        const double t = rng.uniform(0.02, 0.98);
        Vec2 d1, d2;
        bezier::derivatives(poly, t, d1, d2);

        const double h1 = 1e-6;
        const Vec2 fd1 =
            (bezier::evaluate(poly, t + h1) - bezier::evaluate(poly, t - h1)) / (2.0 * h1);
        CHECK((d1 - fd1).norm() / std::max(1.0, d1.norm()) < 1e-6);

        const double h2 = 1e-4;
        const Vec2 fd2 = (bezier::evaluate(poly, t + h2) - 2.0 * bezier::evaluate(poly, t) +
                          bezier::evaluate(poly, t - h2)) /
                         (h2 * h2);
        CHECK((d2 - fd2).norm() / std::max(1.0, d2.norm()) < 1e-6);
    }
}

TEST_CASE("curvature: straight line, circumradius oracle, scaling law") {
    const ControlPolygon line = make_polygon({Vec2(0, 0), Vec2(2, 1), Vec2(4, 2)});
    CHECK(bezier::curvature(line, 0.5) == doctest::Approx(0.0).epsilon(1e-12));

    const ControlPolygon quad = make_polygon({Vec2(0, 0), Vec2(1, 0), Vec2(1, 1)});
    for (double t : {0.2, 0.5, 0.8}) {
        const double got = bezier::curvature(quad, t);
        const double want = oracles::circumradius_curvature(quad, t, 1e-4);
        CHECK(oracles::rel_err(got, want) < 0.01);
    }

    Rng rng(37);
    const auto poly = oracles::random_polygon(rng, 5);
    PointList doubled;
    for (const auto& p : poly.points) doubled.push_back(2.0 * p);
    const auto scaled = make_polygon(doubled);
    for (double t : {0.1, 0.5, 0.9}) {
        CHECK(bezier::curvature(scaled, t) ==
              doctest::Approx(0.5 * bezier::curvature(poly, t)).epsilon(1e-9));
    }
}

TEST_CASE("curvature: degenerate speed flag") {
    // cusp at t=0.5: the curve retraces itself and d1 vanishes
    const ControlPolygon cusp = make_polygon({Vec2(0, 0), Vec2(1, 0), Vec2(0, 0)});
    bool degenerate = false;
    const double k = bezier::curvature(cusp, 0.5, &degenerate);
    CHECK(k == 0.0);
    CHECK(degenerate);
}

TEST_CASE("sample_path: knot counts and endpoint inclusion") {
    const ControlPolygon metre = make_polygon({Vec2(0, 0), Vec2(1, 0)});
    const auto samples = bezier::sample_path(metre, 0.1);
    CHECK(bezier::interval_count(metre, 0.1) == 10);
    CHECK(samples.size() == 11);

    const auto floor_samples = bezier::sample_path(metre, 10.0);
    CHECK(bezier::interval_count(metre, 10.0) == 8);
    CHECK(floor_samples.size() == 9);

    Rng rng(43);
    const auto poly = oracles::random_polygon(rng, 5);
    const auto curve_samples = bezier::sample_path(poly, 0.1);
    CHECK(curve_samples.front().position == bezier::evaluate(poly, 0.0));
    CHECK(curve_samples.back().position == bezier::evaluate(poly, 1.0));
    for (std::size_t i = 1; i < curve_samples.size(); ++i) {
        CHECK(curve_samples[i].t > curve_samples[i - 1].t);
    }
}
