#include "gpplan/envgen.hpp"

#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>

#include "gpplan/rng.hpp"

namespace gpplan::env {

namespace {

constexpr int kMonteCarloSamples = 100000;
constexpr double kMinRectSide = 0.5;
constexpr double kMaxRectSide = 2.5;

double raw_distance(const EnvironmentMap& map, const Vec2& p) {
    if (map.obstacles.empty()) return map.side * std::sqrt(2.0);
    double best = std::numeric_limits<double>::infinity();
    for (const Rect& r : map.obstacles) best = std::min(best, rect_distance(r, p));
    return best;
}

}  // namespace

double EnvironmentMap::traversability_at(const Vec2& p) const {
    const int n = tiles_per_side();
    const int tx = std::clamp(static_cast<int>(std::floor(p.x())), 0, n - 1);
    const int ty = std::clamp(static_cast<int>(std::floor(p.y())), 0, n - 1);
    return tiles[static_cast<std::size_t>(ty * n + tx)];
}

EnvironmentMap generate_map(std::uint64_t seed) {
    EnvironmentMap map;
    map.seed = seed;
    map.side = 10.0;

    Rng rng(seed);
    const int n = map.tiles_per_side();
    map.tiles.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (auto& tile : map.tiles) tile = rng.uniform_open_closed();

    map.occupancy_threshold = rng.uniform(0.25, 0.5);

    // Fixed Monte-Carlo sample set for the occupancy stopping rule, drawn
    // once so the estimate grows monotonically as rectangles are added.
    std::vector<Vec2> probes(kMonteCarloSamples);
    for (auto& p : probes) p = Vec2(rng.uniform(0.0, map.side), rng.uniform(0.0, map.side));
    std::vector<std::uint8_t> covered(probes.size(), 0);
    std::size_t covered_count = 0;

    while (static_cast<double>(covered_count) / static_cast<double>(probes.size()) <
           map.occupancy_threshold) {
        Rect r;
        r.w = rng.uniform(kMinRectSide, kMaxRectSide);
        r.h = rng.uniform(kMinRectSide, kMaxRectSide);
        r.x = rng.uniform(0.0, map.side - r.w);
        r.y = rng.uniform(0.0, map.side - r.h);
        map.obstacles.push_back(r);
        for (std::size_t i = 0; i < probes.size(); ++i) {
            if (!covered[i] && r.contains(probes[i])) {
                covered[i] = 1;
                ++covered_count;
            }
        }
    }
    return map;
}

double point_distance(const EnvironmentMap& map, const Vec2& p) {
    if (!(p.x() >= 0.0 && p.x() <= map.side && p.y() >= 0.0 && p.y() <= map.side)) {
        throw OutOfBoundsError("query point outside the map square");
    }
    return raw_distance(map, p);
}

gp::TrainingSet sample_training_set(const EnvironmentMap& map, std::size_t n,
                                    std::uint64_t rng_seed) {
    constexpr std::size_t kMaxRejections = 1000000;
    Rng rng(rng_seed);
    PointList points;
    std::vector<double> traversability;
    std::vector<double> distance;
    points.reserve(n);
    std::size_t rejections = 0;
    while (points.size() < n) {
        const Vec2 p(rng.uniform(0.0, map.side), rng.uniform(0.0, map.side));
        const double d = raw_distance(map, p);
        if (d > 0.0) {
            points.push_back(p);
            traversability.push_back(map.traversability_at(p));
            distance.push_back(d);
        } else if (++rejections >= kMaxRejections) {
            throw FreeSpaceTooSmallError("rejection sampling exceeded 1e6 rejected draws");
        }
    }
    return gp::TrainingSet(std::move(points), std::move(traversability), std::move(distance));
}

AblationResult ablate(const gp::TrainingSet& training, std::uint64_t rng_seed, int disc_count,
                      double radius, const Rect& bounds) {
    if (training.size() == 0) throw ParameterOutOfRangeError("cannot ablate an empty set");
    if (disc_count <= 0 || radius <= 0.0) {
        return AblationResult{training, {}};
    }

    constexpr std::size_t kMinSurvivors = 50;
    constexpr int kMaxAttempts = 1000;
    Rng rng(rng_seed);
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        std::vector<Disc> discs(static_cast<std::size_t>(disc_count));
        for (auto& d : discs) {
            d.center = Vec2(rng.uniform(bounds.x, bounds.x + bounds.w),
                            rng.uniform(bounds.y, bounds.y + bounds.h));
            d.radius = radius;
        }
        PointList points;
        std::vector<double> traversability;
        std::vector<double> distance;
        for (std::size_t i = 0; i < training.size(); ++i) {
            const Vec2& p = training.points()[i];
            bool inside = false;
            for (const auto& d : discs) {
                if ((p - d.center).norm() <= d.radius) {
                    inside = true;
                    break;
                }
            }
            if (!inside) {
                points.push_back(p);
                traversability.push_back(training.traversability()[i]);
                distance.push_back(training.obstacle_distance()[i]);
            }
        }
        if (points.size() >= kMinSurvivors) {
            return AblationResult{
                gp::TrainingSet(std::move(points), std::move(traversability), std::move(distance)),
                std::move(discs)};
        }
    }
    throw Error("ablation could not retain 50 points after redrawing discs");
}

std::vector<std::pair<Vec2, Vec2>> select_pairs(const EnvironmentMap& map,
                                                const gp::GprModel& model,
                                                const grid::DiscreteGrid& grid, std::size_t n,
                                                std::uint64_t rng_seed,
                                                const PairSelectionOptions& options) {
    Rng rng(rng_seed);
    std::vector<std::pair<Vec2, Vec2>> pairs;
    pairs.reserve(n);
    const std::size_t budget = static_cast<std::size_t>(options.budget_factor) * n;
    std::size_t failures = 0;
    while (pairs.size() < n) {
        const Vec2 s(rng.uniform(0.0, map.side), rng.uniform(0.0, map.side));
        const Vec2 g(rng.uniform(0.0, map.side), rng.uniform(0.0, map.side));
        bool ok = (s - g).norm() >= options.min_separation &&
                  model.mean_distance(s) > options.safety_radius &&
                  model.mean_distance(g) > options.safety_radius;
        if (ok) {
            try {
                (void)grid::astar(grid, s, g, options.astar);
            } catch (const Error&) {
                ok = false;
            }
        }
        if (ok) {
            pairs.emplace_back(s, g);
        } else if (++failures > budget) {
            throw PairBudgetExhaustedError("pair selection exceeded the candidate budget");
        }
    }
    return pairs;
}

std::string map_to_json_string(const EnvironmentMap& map, int indent) {
    nlohmann::json doc;
    doc["seed"] = map.seed;
    doc["side"] = map.side;
    doc["tiles"] = map.tiles;
    auto& obstacles = doc["obstacles"];
    obstacles = nlohmann::json::array();
    for (const Rect& r : map.obstacles) {
        obstacles.push_back({{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}});
    }
    doc["occupancy_threshold"] = map.occupancy_threshold;
    return doc.dump(indent);
}

EnvironmentMap map_from_json_string(const std::string& text) {
    const nlohmann::json doc = nlohmann::json::parse(text);
    EnvironmentMap map;
    map.seed = doc.at("seed").get<std::uint64_t>();
    map.side = doc.at("side").get<double>();
    map.tiles = doc.at("tiles").get<std::vector<double>>();
    for (const auto& o : doc.at("obstacles")) {
        map.obstacles.push_back(Rect{o.at("x").get<double>(), o.at("y").get<double>(),
                                     o.at("w").get<double>(), o.at("h").get<double>()});
    }
    map.occupancy_threshold = doc.at("occupancy_threshold").get<double>();
    return map;
}

}  // namespace gpplan::env
