#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gpplan/grid_planner.hpp"
#include "oracles.hpp"

using namespace gpplan;
using grid::AstarConfig;
using grid::DiscreteGrid;

namespace {

DiscreteGrid uniform_grid(int nx, int ny, double res, double t = 1.0, double var = 0.0) {
    DiscreteGrid g;
    g.res = res;
    g.nx = nx;
    g.ny = ny;
    const std::size_t count = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
    g.mean_T.assign(count, t);
    g.mean_d.assign(count, 1.0);
    g.variance.assign(count, var);
    g.blocked.assign(count, 0);
    return g;
}

DiscreteGrid random_grid(Rng& rng, int side, double blocked_fraction) {
    DiscreteGrid g = uniform_grid(side, side, 1.0);
    for (std::size_t i = 0; i < g.mean_T.size(); ++i) {
        g.mean_T[i] = rng.uniform(-0.1, 1.2);  // exercises the clamp
        g.variance[i] = rng.uniform(0.0, 0.004);
        g.blocked[i] = rng.uniform() < blocked_fraction ? 1 : 0;
    }
    return g;
}

double traversability_deficit(const DiscreteGrid& g, const grid::GridPath& path) {
    // accumulated (1 - T) over entered nodes, matching the edge-cost terms
    double sum = 0.0;
    for (std::size_t i = 1; i < path.waypoints.size(); ++i) {
        const Vec2& w = path.waypoints[i];
        const int ix = static_cast<int>(std::lround((w.x() - g.origin.x()) / g.res));
        const int iy = static_cast<int>(std::lround((w.y() - g.origin.y()) / g.res));
        sum += 1.0 - std::clamp(g.mean_T[static_cast<std::size_t>(g.index(ix, iy))], 1e-3, 1.0);
    }
    return sum;
}

}  // namespace

TEST_CASE("build_grid: lattice arithmetic and GP attributes") {
    // training points on lattice coordinates so node attributes are exact
    gp::TrainingSet training({Vec2(1.0, 2.0), Vec2(4.0, 5.0), Vec2(8.0, 3.0), Vec2(6.0, 8.0)},
                             {0.9, 0.4, 0.6, 0.8}, {1.5, 0.05, 2.0, 0.7});
    const auto model = gp::train(training, gp::KernelParams(1.0, 0.5, 0.0));

    const auto g = grid::build_grid(model, Rect{0, 0, 10, 10}, 0.1, 0.1);
    CHECK(g.nx == 101);
    CHECK(g.ny == 101);

    for (std::size_t i = 0; i < training.size(); ++i) {
        const Vec2& p = training.points()[i];
        const int ix = static_cast<int>(std::lround(p.x() / 0.1));
        const int iy = static_cast<int>(std::lround(p.y() / 0.1));
        const std::size_t idx = static_cast<std::size_t>(g.index(ix, iy));
        CHECK(std::abs(g.mean_T[idx] - training.traversability()[i]) < 1e-6);
        CHECK(std::abs(g.mean_d[idx] - training.obstacle_distance()[i]) < 1e-6);
    }

    // blocked set equals a direct infer loop
    for (int iy = 0; iy < g.ny; iy += 7) {
        for (int ix = 0; ix < g.nx; ix += 7) {
            const auto post = model.infer(g.position(ix, iy));
            CHECK((post.mean_d <= 0.1) ==
                  static_cast<bool>(g.blocked[static_cast<std::size_t>(g.index(ix, iy))]));
        }
    }
}

TEST_CASE("astar: degenerate costs give the metric straight line") {
    const auto g = uniform_grid(101, 101, 0.1);
    const auto path = grid::astar(g, Vec2(1.0, 1.0), Vec2(1.0, 8.0), {10.0, 200.0, 1.0});
    CHECK(path.cost == doctest::Approx(7.0).epsilon(1e-9));
    CHECK(std::abs(path.cost - 7.0) < 0.1 + 1e-9);  // within one res
    for (const Vec2& w : path.waypoints) CHECK(w.x() == doctest::Approx(1.0));
    CHECK(path.waypoints.front() == Vec2(1.0, 1.0));
    CHECK(path.waypoints.back() == Vec2(1.0, 8.0));
}

TEST_CASE("astar: cost equals Dijkstra on 50 random grids") {
    Rng rng(101);
    int solved = 0;
    for (int c = 0; c < 50; ++c) {
        const auto g = random_grid(rng, 20, 0.2);
        auto draw_unblocked = [&] {
            for (;;) {
                const int idx = static_cast<int>(rng.uniform_int(400));
                if (!g.blocked[static_cast<std::size_t>(idx)]) return idx;
            }
        };
        const int start = draw_unblocked();
        const int goal = draw_unblocked();
        const Vec2 s = g.position(start % 20, start / 20);
        const Vec2 t = g.position(goal % 20, goal / 20);
        double astar_cost;
        try {
            astar_cost = grid::astar(g, s, t, {10.0, 200.0, 1.0}).cost;
        } catch (const NoPathError&) {
            CHECK(std::isinf(oracles::dijkstra_cost(g, start, goal, 10.0, 200.0)));
            continue;
        }
        const double dijkstra = oracles::dijkstra_cost(g, start, goal, 10.0, 200.0);
        CHECK(astar_cost == dijkstra);  // bitwise: same relaxation arithmetic
        ++solved;
    }
    CHECK(solved >= 35);
}

TEST_CASE("astar: returned path avoids blocked nodes") {
    Rng rng(202);
    for (int c = 0; c < 10; ++c) {
        const auto g = random_grid(rng, 20, 0.25);
        const int start = static_cast<int>(rng.uniform_int(400));
        const int goal = static_cast<int>(rng.uniform_int(400));
        if (g.blocked[static_cast<std::size_t>(start)] ||
            g.blocked[static_cast<std::size_t>(goal)]) {
            continue;
        }
        try {
            const auto path = grid::astar(g, g.position(start % 20, start / 20),
                                          g.position(goal % 20, goal / 20), {10, 200, 1.0});
            for (std::size_t i = 0; i < path.waypoints.size(); ++i) {
                const int ix = static_cast<int>(std::lround(path.waypoints[i].x()));
                const int iy = static_cast<int>(std::lround(path.waypoints[i].y()));
                CHECK(!g.blocked[static_cast<std::size_t>(g.index(ix, iy))]);
                if (i > 0) {
                    // consecutive waypoints are lattice neighbours
                    CHECK((path.waypoints[i] - path.waypoints[i - 1]).lpNorm<Eigen::Infinity>() <=
                          g.res + 1e-12);
                }
            }
        } catch (const NoPathError&) {
        }
    }
}

TEST_CASE("astar: raising f_T never increases the traversability deficit") {
    // exchange argument on optimal paths: for f2 > f1 the accumulated (1-T)
    // along the optimum at f2 is <= the one at f1
    Rng rng(303);
    int checked = 0;
    for (int c = 0; c < 20; ++c) {
        const auto g = random_grid(rng, 20, 0.15);
        const int start = static_cast<int>(rng.uniform_int(400));
        const int goal = static_cast<int>(rng.uniform_int(400));
        if (g.blocked[static_cast<std::size_t>(start)] ||
            g.blocked[static_cast<std::size_t>(goal)]) {
            continue;
        }
        const Vec2 s = g.position(start % 20, start / 20);
        const Vec2 t = g.position(goal % 20, goal / 20);
        try {
            double previous = std::numeric_limits<double>::infinity();
            for (double f_T : {0.0, 10.0, 100.0}) {
                const auto path = grid::astar(g, s, t, {f_T, 200.0, 1.0});
                const double deficit = traversability_deficit(g, path);
                if (std::isfinite(previous)) CHECK(deficit <= previous + 1e-9);
                previous = deficit;
                ++checked;
            }
        } catch (const NoPathError&) {
        }
    }
    CHECK(checked >= 30);
}

TEST_CASE("astar: snapping and blocked endpoints") {
    auto g = uniform_grid(101, 101, 0.1);
    // off-lattice start snaps to the nearest unblocked node
    const auto path = grid::astar(g, Vec2(1.04, 1.04), Vec2(2.0, 1.0), {10, 200, 1.0});
    CHECK(path.waypoints.front() == Vec2(1.0, 1.0));

    // wall off a corner: everything within 3*res of the start is blocked
    for (int iy = 0; iy <= 8; ++iy) {
        for (int ix = 0; ix <= 8; ++ix) {
            g.blocked[static_cast<std::size_t>(g.index(ix, iy))] = 1;
        }
    }
    CHECK_THROWS_AS(grid::astar(g, Vec2(0.2, 0.2), Vec2(5.0, 5.0), {10, 200, 1.0}),
                    StartOrGoalBlockedError);

    // vertical wall splits the map
    auto walled = uniform_grid(101, 101, 0.1);
    for (int iy = 0; iy < 101; ++iy) {
        walled.blocked[static_cast<std::size_t>(walled.index(50, iy))] = 1;
    }
    CHECK_THROWS_AS(grid::astar(walled, Vec2(1.0, 5.0), Vec2(9.0, 5.0), {10, 200, 1.0}),
                    NoPathError);
}

TEST_CASE("astar: weighted heuristic stays feasible") {
    Rng rng(404);
    const auto g = random_grid(rng, 20, 0.15);
    const Vec2 s = g.position(1, 1);
    const Vec2 t = g.position(18, 17);
    const double optimal = grid::astar(g, s, t, {10, 200, 1.0}).cost;
    const double weighted = grid::astar(g, s, t, {10, 200, 1.5}).cost;
    CHECK(weighted >= optimal - 1e-12);
    CHECK(weighted <= 1.5 * optimal + 1e-12);
    CHECK_THROWS_AS(grid::astar(g, s, t, {10, 200, 0.5}), ParameterOutOfRangeError);
}
