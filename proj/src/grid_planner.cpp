#include "gpplan/grid_planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace gpplan::grid {

namespace {

double clamp_traversability(double t) { return std::clamp(t, 1e-3, 1.0); }

int axis_count(double extent, double res) {
    return static_cast<int>(std::ceil(extent / res - 1e-9)) + 1;
}

/// Nearest unblocked node within 3*res of p; ties break on node index.
int snap(const DiscreteGrid& g, const Vec2& p, const char* label) {
    const double max_dist = 3.0 * g.res + 1e-12;
    const int cx = static_cast<int>(std::floor((p.x() - g.origin.x()) / g.res));
    const int cy = static_cast<int>(std::floor((p.y() - g.origin.y()) / g.res));
    int best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int iy = cy - 3; iy <= cy + 4; ++iy) {
        for (int ix = cx - 3; ix <= cx + 4; ++ix) {
            if (!g.in_range(ix, iy)) continue;
            const int idx = g.index(ix, iy);
            if (g.blocked[static_cast<std::size_t>(idx)]) continue;
            const double dist = (g.position(ix, iy) - p).norm();
            if (dist > max_dist) continue;
            if (dist < best_dist || (dist == best_dist && idx < best)) {
                best = idx;
                best_dist = dist;
            }
        }
    }
    if (best < 0) {
        throw StartOrGoalBlockedError(std::string(label) +
                                      " has no unblocked grid node within 3*res");
    }
    return best;
}

struct OpenEntry {
    double f;
    double g;
    int idx;
};

struct OpenOrder {
    bool operator()(const OpenEntry& a, const OpenEntry& b) const {
        if (a.f != b.f) return a.f > b.f;
        if (a.g != b.g) return a.g > b.g;
        return a.idx > b.idx;
    }
};

}  // namespace

DiscreteGrid build_grid(const gp::GprModel& model, const Rect& bounds, double res,
                        double safety_radius) {
    if (!(res > 0.0)) throw ParameterOutOfRangeError("grid resolution must be positive");
    DiscreteGrid g;
    g.res = res;
    g.safety_radius = safety_radius;
    g.origin = Vec2(bounds.x, bounds.y);
    g.nx = axis_count(bounds.w, res);
    g.ny = axis_count(bounds.h, res);

    PointList nodes;
    nodes.reserve(static_cast<std::size_t>(g.nx) * static_cast<std::size_t>(g.ny));
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) nodes.push_back(g.position(ix, iy));
    }
    const auto posteriors = model.infer_batch(nodes, /*with_gradients=*/false);

    const std::size_t count = posteriors.size();
    g.mean_T.resize(count);
    g.mean_d.resize(count);
    g.variance.resize(count);
    g.blocked.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        g.mean_T[i] = posteriors[i].mean_T;
        g.mean_d[i] = posteriors[i].mean_d;
        g.variance[i] = posteriors[i].variance;
        g.blocked[i] = posteriors[i].mean_d <= safety_radius ? 1 : 0;
    }
    return g;
}

GridPath astar(const DiscreteGrid& grid, const Vec2& start, const Vec2& goal,
               const AstarConfig& config) {
    if (config.heuristic_weight < 1.0) {
        throw ParameterOutOfRangeError("heuristic weight must be >= 1");
    }
    const int start_idx = snap(grid, start, "start");
    const int goal_idx = snap(grid, goal, "goal");
    const Vec2 goal_pos = grid.position(goal_idx % grid.nx, goal_idx / grid.nx);

    const std::size_t node_count = grid.mean_T.size();
    std::vector<double> g_cost(node_count, std::numeric_limits<double>::infinity());
    std::vector<int> parent(node_count, -1);
    std::vector<std::uint8_t> closed(node_count, 0);

    std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenOrder> open;
    g_cost[static_cast<std::size_t>(start_idx)] = 0.0;
    open.push({config.heuristic_weight *
                   (grid.position(start_idx % grid.nx, start_idx / grid.nx) - goal_pos).norm(),
               0.0, start_idx});

    static constexpr int kDx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
    static constexpr int kDy[8] = {0, 0, 1, -1, 1, -1, 1, -1};
    const double straight = grid.res;
    const double diagonal = grid.res * std::sqrt(2.0);

    while (!open.empty()) {
        const OpenEntry top = open.top();
        open.pop();
        const int idx = top.idx;
        if (closed[static_cast<std::size_t>(idx)]) continue;
        if (top.g > g_cost[static_cast<std::size_t>(idx)]) continue;
        closed[static_cast<std::size_t>(idx)] = 1;

        if (idx == goal_idx) {
            GridPath path;
            path.cost = g_cost[static_cast<std::size_t>(idx)];
            for (int at = idx; at >= 0; at = parent[static_cast<std::size_t>(at)]) {
                path.waypoints.push_back(grid.position(at % grid.nx, at / grid.nx));
            }
            std::reverse(path.waypoints.begin(), path.waypoints.end());
            return path;
        }

        const int ix = idx % grid.nx;
        const int iy = idx / grid.nx;
        for (int k = 0; k < 8; ++k) {
            const int jx = ix + kDx[k];
            const int jy = iy + kDy[k];
            if (!grid.in_range(jx, jy)) continue;
            const int jdx = grid.index(jx, jy);
            const std::size_t j = static_cast<std::size_t>(jdx);
            if (grid.blocked[j] || closed[j]) continue;
            const double edge = (k < 4 ? straight : diagonal) +
                                config.f_T * (1.0 - clamp_traversability(grid.mean_T[j])) +
                                config.f_sigma * grid.variance[j];
            const double tentative = g_cost[static_cast<std::size_t>(idx)] + edge;
            if (tentative < g_cost[j]) {
                g_cost[j] = tentative;
                parent[j] = idx;
                const double h = (grid.position(jx, jy) - goal_pos).norm();
                open.push({tentative + config.heuristic_weight * h, tentative, jdx});
            }
        }
    }
    throw NoPathError("A* frontier exhausted without reaching the goal");
}

}  // namespace gpplan::grid
