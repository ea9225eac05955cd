#pragma once

#include <cstdint>
#include <vector>

#include "gpplan/common.hpp"
#include "gpplan/errors.hpp"
#include "gpplan/gpr.hpp"
#include "gpplan/rng.hpp"

namespace gpplan::trrt {

struct TrrtConfig {
    double step = 0.5;  // maximum edge length
    double goal_bias = 0.1;
    int max_iterations = 20000;
    double temperature_init = 0.0;  // <= 0 resolves to 1e-2 * f_sigma
    double temp_rate = 2.0;         // alpha > 1
    int n_fail_max = 20;
    double f_T = 10.0;
    double f_sigma = 200.0;
    double safety_radius = 0.1;
    double collision_check_res = 0.05;

    double resolved_temperature() const {
        return temperature_init > 0.0 ? temperature_init : 1e-2 * f_sigma;
    }
};

/// Cost of a candidate node: distance-to-goal plus the traversability and
/// variance penalties, T clamped into [1e-3, 1].
double node_cost(const gp::GprModel& model, const Vec2& n, const Vec2& goal, double f_T,
                 double f_sigma);

struct TransitionState {
    double temperature = 0.0;
    int n_fail = 0;
};

/// Stochastic transition acceptance with adaptive temperature: downhill moves
/// always pass; uphill moves pass with probability exp(-dc/T) and cool the
/// temperature, while repeated rejections reheat it.
bool transition_test(double cost_parent, double cost_child, TransitionState& state,
                     const TrrtConfig& config, Rng& rng);

struct Tree {
    struct Node {
        Vec2 position{0.0, 0.0};
        int parent = -1;
        double cost = 0.0;
    };
    std::vector<Node> nodes;
};

/// Grows a transition-based RRT from start until the goal connects. Returns
/// the waypoint list start..goal; every edge is at most `step` long and
/// collision-checked at collision_check_res against the GP distance field.
/// Deterministic per seed. Pass `tree_out` to capture the full tree.
PointList plan(const gp::GprModel& model, const Vec2& start, const Vec2& goal,
               const Rect& bounds, const TrrtConfig& config, std::uint64_t rng_seed,
               Tree* tree_out = nullptr);

}  // namespace gpplan::trrt
