#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gpplan/bco.hpp"
#include "gpplan/bezier.hpp"
#include "gpplan/common.hpp"
#include "gpplan/envgen.hpp"
#include "gpplan/gpr.hpp"
#include "gpplan/grid_planner.hpp"
#include "gpplan/trrt.hpp"

namespace gpplan::bench {

enum class Method { astar, trrt, bco_none, bco_astar, bco_trrt };

const char* method_name(Method m);
std::vector<Method> all_methods();

struct PathEvalConfig {
    double res = 0.1;
    double safety_radius = 0.1;
    double min_turn_radius = 0.25;
};

struct PathMetrics {
    double length_m = 0.0;
    double mean_traversability = 0.0;
    double mean_variance = 0.0;
    bool curvature_violated = false;
    bool collided = false;
};

/// Metrics of a segment path: arc-length-uniform samples at `res` spacing,
/// GP means averaged over the samples, collision whenever a sample's
/// inferred obstacle distance drops to the safety radius. A polyline is
/// curvature-violating as soon as any vertex turns by more than 1e-6 rad.
PathMetrics evaluate_path(const gp::GprModel& model, const PointList& waypoints,
                          const PathEvalConfig& cfg);

/// Same metrics for a Bézier curve; curvature violation checks the analytic
/// curvature at the arc-length samples against 1/min_turn_radius.
PathMetrics evaluate_path(const gp::GprModel& model, const bezier::ControlPolygon& curve,
                          const PathEvalConfig& cfg);

struct BenchmarkRecord {
    std::uint64_t map_seed = 0;
    int pair_index = 0;
    Method method = Method::astar;
    double compute_time_s = 0.0;
    std::optional<PathMetrics> metrics;
    std::optional<double> final_loss;    // BCO methods only
    std::optional<int> iterations;       // BCO methods only
    std::string status = "ok";
    std::vector<bco::LossBreakdown> trace;  // BCO methods only, in-memory
};

struct SuiteConfig {
    int n_maps = 10;
    int pairs_per_map = 20;
    std::uint64_t master_seed = 1;
    int jobs = 0;  // 0 resolves to hardware concurrency
    std::string out_dir = "bench_out";
    bool write_traces = true;

    int training_points = 500;
    int ablate_discs = 3;
    double ablate_radius = 1.5;
    double pair_min_separation = 1.0;

    double safety_radius = 0.1;
    double f_T = 10.0;
    double f_sigma = 200.0;

    double astar_res = 0.1;
    double astar_weight = 1.5;

    trrt::TrrtConfig trrt;
    bco::BcoConfig bco;
    gp::FitOptions fit;

    /// Copies the shared parameters (R, f_T, f_sigma) into the planner
    /// sub-configurations.
    void sync_shared();
};

/// Parses the suite configuration JSON. Unknown keys are rejected; the
/// "shared" section (R, f_T, f_sigma) propagates into the planner sections
/// before their own overrides apply.
SuiteConfig suite_config_from_json(const std::string& text);
std::string suite_config_to_json(const SuiteConfig& cfg, int indent = 2);

struct SuiteResult {
    std::vector<BenchmarkRecord> records;
};

/// Runs the full benchmark: per map generate/sample/ablate/fit/train, select
/// start-goal pairs, then all five methods per pair. Failures are captured
/// per record in `status`; the suite itself never aborts. Writes
/// records.csv, summary.json and traces/*.json under cfg.out_dir.
SuiteResult run_suite(const SuiteConfig& cfg);

std::string records_to_csv(const std::vector<BenchmarkRecord>& records);
std::vector<BenchmarkRecord> records_from_csv(const std::string& text);
std::string summary_to_json(const SuiteConfig& cfg, const std::vector<BenchmarkRecord>& records,
                            int indent = 2);

}  // namespace gpplan::bench
