#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gpplan/common.hpp"
#include "gpplan/errors.hpp"
#include "gpplan/gpr.hpp"
#include "gpplan/grid_planner.hpp"

namespace gpplan::env {

/// Ground-truth synthetic world: a 10 m x 10 m square of 1 m² traversability
/// tiles plus axis-aligned rectangular obstacles covering at least the drawn
/// occupancy threshold.
struct EnvironmentMap {
    std::uint64_t seed = 0;
    double side = 10.0;
    std::vector<double> tiles;  // row-major, tiles[ty * 10 + tx], values in (0,1]
    std::vector<Rect> obstacles;
    double occupancy_threshold = 0.25;

    Rect bounds() const { return Rect{0.0, 0.0, side, side}; }
    int tiles_per_side() const { return static_cast<int>(std::lround(side)); }

    /// Tile value containing p (edge coordinates clamp to the last tile).
    double traversability_at(const Vec2& p) const;
};

/// Procedurally generates a map: uniform tiles, occupancy threshold uniform
/// in [0.25, 0.5], then rectangles of uniform random size in [0.5, 2.5] m
/// until a 1e5-sample Monte-Carlo estimate of the covered fraction reaches
/// the threshold. Deterministic per seed.
EnvironmentMap generate_map(std::uint64_t seed);

/// Exact Euclidean distance from p to the nearest obstacle rectangle, 0 on or
/// inside an obstacle. The map boundary is not an obstacle; with no obstacles
/// at all the map diagonal is returned. Throws OutOfBounds for p outside the
/// map square.
double point_distance(const EnvironmentMap& map, const Vec2& p);

/// Uniform rejection sampling of n training points over the free space, each
/// carrying its tile traversability and exact obstacle distance.
gp::TrainingSet sample_training_set(const EnvironmentMap& map, std::size_t n,
                                    std::uint64_t rng_seed);

struct AblationResult {
    gp::TrainingSet training;
    std::vector<Disc> discs;
};

/// Removes every training point inside any of `disc_count` random discs of
/// the given radius; redraws the discs until at least 50 points survive.
AblationResult ablate(const gp::TrainingSet& training, std::uint64_t rng_seed,
                      int disc_count, double radius, const Rect& bounds);

struct PairSelectionOptions {
    double safety_radius = 0.1;
    double min_separation = 1.0;
    int budget_factor = 10;  // gives up after budget_factor * n failed candidates
    grid::AstarConfig astar;
};

/// Draws start-goal pairs uniformly over the map, keeping those whose
/// GP-inferred obstacle distance clears the safety radius at both endpoints
/// and for which A* finds a path on the given grid. Deterministic per seed.
std::vector<std::pair<Vec2, Vec2>> select_pairs(const EnvironmentMap& map,
                                                const gp::GprModel& model,
                                                const grid::DiscreteGrid& grid, std::size_t n,
                                                std::uint64_t rng_seed,
                                                const PairSelectionOptions& options = {});

std::string map_to_json_string(const EnvironmentMap& map, int indent = -1);
EnvironmentMap map_from_json_string(const std::string& text);

}  // namespace gpplan::env
