#pragma once

#include <vector>

#include "gpplan/common.hpp"
#include "gpplan/errors.hpp"
#include "gpplan/gpr.hpp"

namespace gpplan::grid {

/// Fixed-resolution lattice whose node attributes come from GP inference.
/// A node is blocked iff its inferred obstacle distance is at or below the
/// safety radius. Immutable after construction; concurrent astar calls on
/// one grid are safe.
struct DiscreteGrid {
    double res = 0.1;
    double safety_radius = 0.1;
    Vec2 origin{0.0, 0.0};
    int nx = 0;
    int ny = 0;
    std::vector<double> mean_T;
    std::vector<double> mean_d;
    std::vector<double> variance;
    std::vector<std::uint8_t> blocked;

    int index(int ix, int iy) const { return iy * nx + ix; }
    Vec2 position(int ix, int iy) const {
        return origin + Vec2(static_cast<double>(ix) * res, static_cast<double>(iy) * res);
    }
    bool in_range(int ix, int iy) const { return ix >= 0 && ix < nx && iy >= 0 && iy < ny; }
};

DiscreteGrid build_grid(const gp::GprModel& model, const Rect& bounds, double res = 0.1,
                        double safety_radius = 0.1);

struct AstarConfig {
    double f_T = 10.0;
    double f_sigma = 200.0;
    double heuristic_weight = 1.0;  // w = 1 is optimal; the benchmark preset uses 1.5
};

struct GridPath {
    PointList waypoints;
    double cost = 0.0;
};

/// Weighted A* over the 8-connected lattice. The transition cost into node n
/// is ||p-n|| + f_T*(1 - T(n)) + f_sigma*sigma^2(n) with T clamped into
/// [1e-3, 1]. Start and goal snap to the nearest unblocked node within
/// 3*res. Ties in the open set break on lowest f, then g, then node index.
GridPath astar(const DiscreteGrid& grid, const Vec2& start, const Vec2& goal,
               const AstarConfig& config = {});

}  // namespace gpplan::grid
