#include "gpplan/trrt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gpplan::trrt {

namespace {

bool edge_collision_free(const gp::GprModel& model, const Vec2& a, const Vec2& b,
                         const TrrtConfig& cfg) {
    const double length = (b - a).norm();
    const int checks = std::max(1, static_cast<int>(std::ceil(length / cfg.collision_check_res)));
    for (int i = 0; i <= checks; ++i) {
        const Vec2 p = a + (static_cast<double>(i) / checks) * (b - a);
        if (model.mean_distance(p) <= cfg.safety_radius) return false;
    }
    return true;
}

int nearest_node(const Tree& tree, const Vec2& q) {
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(tree.nodes.size()); ++i) {
        const double d = (tree.nodes[static_cast<std::size_t>(i)].position - q).squaredNorm();
        if (d < best_dist) {
            best_dist = d;
            best = i;
        }
    }
    return best;
}

PointList extract_path(const Tree& tree, int leaf) {
    PointList path;
    for (int at = leaf; at >= 0; at = tree.nodes[static_cast<std::size_t>(at)].parent) {
        path.push_back(tree.nodes[static_cast<std::size_t>(at)].position);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace

double node_cost(const gp::GprModel& model, const Vec2& n, const Vec2& goal, double f_T,
                 double f_sigma) {
    const gp::Posterior post = model.infer(n);
    const double t = std::clamp(post.mean_T, 1e-3, 1.0);
    return (n - goal).norm() + f_T * (1.0 - t) + f_sigma * post.variance;
}

bool transition_test(double cost_parent, double cost_child, TransitionState& state,
                     const TrrtConfig& config, Rng& rng) {
    if (cost_child <= cost_parent) return true;
    const double p = std::exp(-(cost_child - cost_parent) / state.temperature);
    if (rng.uniform() < p) {
        state.temperature /= config.temp_rate;
        return true;
    }
    if (++state.n_fail > config.n_fail_max) {
        state.temperature *= config.temp_rate;
        state.n_fail = 0;
    }
    return false;
}

PointList plan(const gp::GprModel& model, const Vec2& start, const Vec2& goal,
               const Rect& bounds, const TrrtConfig& config, std::uint64_t rng_seed,
               Tree* tree_out) {
    if (model.mean_distance(start) <= config.safety_radius ||
        model.mean_distance(goal) <= config.safety_radius) {
        throw StartOrGoalBlockedError("start or goal lies within the safety radius");
    }

    Rng rng(rng_seed);
    Tree tree;
    tree.nodes.push_back({start, -1, node_cost(model, start, goal, config.f_T, config.f_sigma)});
    TransitionState state{config.resolved_temperature(), 0};

    auto try_goal_connect = [&](int from) -> bool {
        const Vec2& p = tree.nodes[static_cast<std::size_t>(from)].position;
        if ((p - goal).norm() > config.step) return false;
        if (!edge_collision_free(model, p, goal, config)) return false;
        tree.nodes.push_back(
            {goal, from, node_cost(model, goal, goal, config.f_T, config.f_sigma)});
        return true;
    };

    if (try_goal_connect(0)) {
        if (tree_out) *tree_out = tree;
        return extract_path(tree, static_cast<int>(tree.nodes.size()) - 1);
    }

    for (int iter = 0; iter < config.max_iterations; ++iter) {
        Vec2 sample;
        if (rng.uniform() < config.goal_bias) {
            sample = goal;
        } else {
            sample = Vec2(rng.uniform(bounds.x, bounds.x + bounds.w),
                          rng.uniform(bounds.y, bounds.y + bounds.h));
            if (model.mean_distance(sample) <= config.safety_radius) continue;
        }

        const int near = nearest_node(tree, sample);
        const Vec2& near_pos = tree.nodes[static_cast<std::size_t>(near)].position;
        const Vec2 offset = sample - near_pos;
        const double dist = offset.norm();
        if (dist < 1e-12) continue;
        const Vec2 candidate = near_pos + (std::min(config.step, dist) / dist) * offset;

        if (model.mean_distance(candidate) <= config.safety_radius) continue;
        if (!edge_collision_free(model, near_pos, candidate, config)) continue;

        const double cost = node_cost(model, candidate, goal, config.f_T, config.f_sigma);
        if (!transition_test(tree.nodes[static_cast<std::size_t>(near)].cost, cost, state, config,
                             rng)) {
            continue;
        }

        tree.nodes.push_back({candidate, near, cost});
        if (try_goal_connect(static_cast<int>(tree.nodes.size()) - 1)) {
            if (tree_out) *tree_out = tree;
            return extract_path(tree, static_cast<int>(tree.nodes.size()) - 1);
        }
    }
    if (tree_out) *tree_out = tree;
    throw MaxIterationsError("T-RRT reached max_iterations without connecting the goal");
}

}  // namespace gpplan::trrt
