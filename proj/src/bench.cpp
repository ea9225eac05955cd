#include "gpplan/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>

#include "gpplan/rng.hpp"

namespace gpplan::bench {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Arc-length resampling of a polyline at fixed spacing, endpoints included.
PointList resample_polyline(const PointList& points, double spacing) {
    PointList out;
    if (points.empty()) return out;
    out.push_back(points.front());
    if (points.size() == 1) return out;

    std::vector<double> cumulative(points.size(), 0.0);
    for (std::size_t i = 1; i < points.size(); ++i) {
        cumulative[i] = cumulative[i - 1] + (points[i] - points[i - 1]).norm();
    }
    const double length = cumulative.back();
    if (length <= 0.0) return out;

    std::size_t segment = 0;
    for (double s = spacing; s < length; s += spacing) {
        while (segment + 2 < points.size() && cumulative[segment + 1] < s) ++segment;
        const double seg_len = cumulative[segment + 1] - cumulative[segment];
        const double frac = seg_len > 0.0 ? (s - cumulative[segment]) / seg_len : 0.0;
        out.push_back(points[segment] + frac * (points[segment + 1] - points[segment]));
    }
    out.push_back(points.back());
    return out;
}

double polyline_length(const PointList& points) {
    double length = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) length += (points[i] - points[i - 1]).norm();
    return length;
}

PathMetrics metrics_from_samples(const gp::GprModel& model, const PointList& samples,
                                 double length, double safety_radius, bool curvature_violated) {
    const auto posteriors = model.infer_batch(samples, /*with_gradients=*/false);
    PathMetrics metrics;
    metrics.length_m = length;
    metrics.curvature_violated = curvature_violated;
    double sum_T = 0.0;
    double sum_var = 0.0;
    for (const auto& p : posteriors) {
        sum_T += std::clamp(p.mean_T, 1e-3, 1.0);
        sum_var += p.variance;
        if (p.mean_d <= safety_radius) metrics.collided = true;
    }
    metrics.mean_traversability = sum_T / static_cast<double>(posteriors.size());
    metrics.mean_variance = sum_var / static_cast<double>(posteriors.size());
    return metrics;
}

struct MethodOutcome {
    BenchmarkRecord record;
    PointList waypoints;  // for downstream priors
};

}  // namespace

void SuiteConfig::sync_shared() {
    trrt.f_T = f_T;
    trrt.f_sigma = f_sigma;
    trrt.safety_radius = safety_radius;
    bco.f_T = f_T;
    bco.f_sigma = f_sigma;
    bco.safety_radius = safety_radius;
}

const char* method_name(Method m) {
    switch (m) {
        case Method::astar: return "astar";
        case Method::trrt: return "trrt";
        case Method::bco_none: return "bco_none";
        case Method::bco_astar: return "bco_astar";
        case Method::bco_trrt: return "bco_trrt";
    }
    return "unknown";
}

std::vector<Method> all_methods() {
    return {Method::astar, Method::trrt, Method::bco_none, Method::bco_astar, Method::bco_trrt};
}

PathMetrics evaluate_path(const gp::GprModel& model, const PointList& waypoints,
                          const PathEvalConfig& cfg) {
    if (waypoints.empty()) throw EmptyPathError("cannot evaluate an empty path");

    // Vertex turning angle above 1e-6 rad marks the segment chain as
    // curvature-violating (segment joints have no finite curvature).
    bool violated = false;
    PointList deduped;
    for (const auto& p : waypoints) {
        if (deduped.empty() || (p - deduped.back()).norm() > 1e-12) deduped.push_back(p);
    }
    for (std::size_t i = 1; i + 1 < deduped.size(); ++i) {
        const Vec2 u = deduped[i] - deduped[i - 1];
        const Vec2 v = deduped[i + 1] - deduped[i];
        const double cross = std::abs(u.x() * v.y() - u.y() * v.x());
        const double angle = std::atan2(cross, u.dot(v));
        if (angle > 1e-6) {
            violated = true;
            break;
        }
    }

    const PointList samples = resample_polyline(deduped, cfg.res);
    return metrics_from_samples(model, samples, polyline_length(deduped), cfg.safety_radius,
                                violated);
}

PathMetrics evaluate_path(const gp::GprModel& model, const bezier::ControlPolygon& curve,
                          const PathEvalConfig& cfg) {
    // Dense parameter table for arc-length bookkeeping.
    const int dense = std::max(1024, 4 * bezier::interval_count(curve, cfg.res));
    PointList dense_points(static_cast<std::size_t>(dense) + 1);
    for (int j = 0; j <= dense; ++j) {
        dense_points[static_cast<std::size_t>(j)] =
            bezier::evaluate(curve, static_cast<double>(j) / dense);
    }
    std::vector<double> cumulative(dense_points.size(), 0.0);
    for (std::size_t j = 1; j < dense_points.size(); ++j) {
        cumulative[j] = cumulative[j - 1] + (dense_points[j] - dense_points[j - 1]).norm();
    }
    const double length = cumulative.back();

    // Arc-length-uniform parameters at cfg.res spacing.
    std::vector<double> ts;
    ts.push_back(0.0);
    std::size_t segment = 0;
    for (double s = cfg.res; s < length; s += cfg.res) {
        while (segment + 2 < dense_points.size() && cumulative[segment + 1] < s) ++segment;
        const double seg_len = cumulative[segment + 1] - cumulative[segment];
        const double frac = seg_len > 0.0 ? (s - cumulative[segment]) / seg_len : 0.0;
        ts.push_back((static_cast<double>(segment) + frac) / dense);
    }
    ts.push_back(1.0);

    bool violated = false;
    PointList samples(ts.size());
    const double kappa_max = 1.0 / cfg.min_turn_radius;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        samples[i] = bezier::evaluate(curve, ts[i]);
        if (bezier::curvature(curve, ts[i]) > kappa_max) violated = true;
    }
    return metrics_from_samples(model, samples, length, cfg.safety_radius, violated);
}

namespace {

struct PreparedMap {
    env::EnvironmentMap map;
    std::optional<gp::GprModel> model;
    grid::DiscreteGrid grid;
    std::vector<std::pair<Vec2, Vec2>> pairs;
    std::string error;  // empty on success
};

gp::KernelParams moment_init(const std::vector<double>& y) {
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    double var = 0.0;
    for (double v : y) var += (v - mean) * (v - mean);
    var /= static_cast<double>(y.size());
    const double output_scale = std::max(var, 1e-3);
    const double noise = std::max(0.1 * std::sqrt(output_scale), 1e-3);
    return gp::KernelParams(1.0, output_scale, noise);
}

PreparedMap prepare_map(const SuiteConfig& cfg, int map_index) {
    PreparedMap prep;
    prep.map = env::generate_map(cfg.master_seed + static_cast<std::uint64_t>(map_index));
    try {
        const auto raw = env::sample_training_set(
            prep.map, static_cast<std::size_t>(cfg.training_points),
            derive_seed(cfg.master_seed, 101, static_cast<std::uint64_t>(map_index)));
        auto ablated = env::ablate(
            raw, derive_seed(cfg.master_seed, 102, static_cast<std::uint64_t>(map_index)),
            cfg.ablate_discs, cfg.ablate_radius, prep.map.bounds());

        const auto params_T = gp::fit_hyperparameters(
            ablated.training, moment_init(ablated.training.traversability()),
            gp::Output::traversability, cfg.fit);
        const auto params_d = gp::fit_hyperparameters(
            ablated.training, moment_init(ablated.training.obstacle_distance()),
            gp::Output::distance, cfg.fit);
        prep.model.emplace(ablated.training, params_T, params_d);

        prep.grid = grid::build_grid(*prep.model, prep.map.bounds(), cfg.astar_res,
                                     cfg.safety_radius);

        env::PairSelectionOptions pair_opts;
        pair_opts.safety_radius = cfg.safety_radius;
        pair_opts.min_separation = cfg.pair_min_separation;
        pair_opts.astar = {cfg.f_T, cfg.f_sigma, cfg.astar_weight};
        prep.pairs = env::select_pairs(
            prep.map, *prep.model, prep.grid, static_cast<std::size_t>(cfg.pairs_per_map),
            derive_seed(cfg.master_seed, 103, static_cast<std::uint64_t>(map_index)), pair_opts);
    } catch (const std::exception& e) {
        prep.error = e.what();
    }
    return prep;
}

void run_tasks(int jobs, std::size_t task_count, const std::function<void(std::size_t)>& task) {
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= task_count) return;
            task(i);
        }
    };
    std::vector<std::thread> threads;
    const int n = std::max(1, jobs);
    threads.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
}

std::string failure_tag(const std::exception& e) {
    if (dynamic_cast<const NoPathError*>(&e)) return "no_path";
    if (dynamic_cast<const StartOrGoalBlockedError*>(&e)) return "start_or_goal_blocked";
    if (dynamic_cast<const MaxIterationsError*>(&e)) return "max_iterations";
    if (dynamic_cast<const DegenerateEndpointsError*>(&e)) return "degenerate_endpoints";
    return "error";
}

/// All five methods for one start-goal pair. Priors are computed once and
/// reused by the seeded BCO variants; their measured times are added to the
/// seeded records.
std::vector<BenchmarkRecord> run_pair(const SuiteConfig& cfg, const PreparedMap& prep,
                                      int map_index, int pair_index) {
    const gp::GprModel& model = *prep.model;
    const auto [start, goal] = prep.pairs[static_cast<std::size_t>(pair_index)];
    const PathEvalConfig eval_cfg{cfg.bco.res, cfg.safety_radius, cfg.bco.min_turn_radius};

    std::vector<BenchmarkRecord> records;
    auto base_record = [&](Method method) {
        BenchmarkRecord r;
        r.map_seed = prep.map.seed;
        r.pair_index = pair_index;
        r.method = method;
        return r;
    };

    // A* prior.
    BenchmarkRecord astar_rec = base_record(Method::astar);
    PointList astar_path;
    {
        const auto t0 = Clock::now();
        try {
            grid::GridPath path = grid::astar(prep.grid, start, goal,
                                              {cfg.f_T, cfg.f_sigma, cfg.astar_weight});
            astar_rec.compute_time_s = seconds_since(t0);
            astar_path = std::move(path.waypoints);
            astar_rec.metrics = evaluate_path(model, astar_path, eval_cfg);
        } catch (const std::exception& e) {
            astar_rec.compute_time_s = seconds_since(t0);
            astar_rec.status = failure_tag(e);
        }
    }

    // T-RRT prior.
    BenchmarkRecord trrt_rec = base_record(Method::trrt);
    PointList trrt_path;
    {
        trrt::TrrtConfig trrt_cfg = cfg.trrt;
        const auto t0 = Clock::now();
        try {
            trrt_path = trrt::plan(model, start, goal, prep.map.bounds(), trrt_cfg,
                                   derive_seed(cfg.master_seed, 104,
                                               static_cast<std::uint64_t>(map_index),
                                               static_cast<std::uint64_t>(pair_index)));
            trrt_rec.compute_time_s = seconds_since(t0);
            trrt_rec.metrics = evaluate_path(model, trrt_path, eval_cfg);
        } catch (const std::exception& e) {
            trrt_rec.compute_time_s = seconds_since(t0);
            trrt_rec.status = failure_tag(e);
        }
    }

    auto run_bco = [&](Method method, const PointList& prior, double prior_time_s,
                       bool prior_ok) {
        BenchmarkRecord rec = base_record(method);
        if (method != Method::bco_none && !prior_ok) {
            rec.status = "no_prior";
            return rec;
        }
        const auto t0 = Clock::now();
        try {
            bezier::ControlPolygon p0 =
                method == Method::bco_none
                    ? bco::init_priorless(start, goal, cfg.bco.cpr)
                    : bco::init_from_prior(prior, cfg.bco.cpr);
            bco::OptimisationTrace trace = bco::optimise(model, p0, cfg.bco);
            rec.compute_time_s = prior_time_s + seconds_since(t0);
            rec.metrics = evaluate_path(model, trace.final_polygon, eval_cfg);
            rec.final_loss = trace.iterations.back().total;
            rec.iterations = trace.iterations_run;
            rec.trace = std::move(trace.iterations);
        } catch (const std::exception& e) {
            rec.compute_time_s = prior_time_s + seconds_since(t0);
            rec.status = failure_tag(e);
        }
        return rec;
    };

    records.push_back(astar_rec);
    records.push_back(trrt_rec);
    records.push_back(run_bco(Method::bco_none, {}, 0.0, true));
    records.push_back(run_bco(Method::bco_astar, astar_path, astar_rec.compute_time_s,
                              astar_rec.status == "ok"));
    records.push_back(run_bco(Method::bco_trrt, trrt_path, trrt_rec.compute_time_s,
                              trrt_rec.status == "ok"));
    return records;
}

}  // namespace

SuiteResult run_suite(const SuiteConfig& cfg) {
    if (cfg.n_maps < 1 || cfg.pairs_per_map < 1) {
        throw ParameterOutOfRangeError("suite needs n_maps >= 1 and pairs_per_map >= 1");
    }
    const int jobs = cfg.jobs > 0 ? cfg.jobs
                                  : std::max(1u, std::thread::hardware_concurrency());

    // Stage 1: per-map preparation.
    std::vector<PreparedMap> prepared(static_cast<std::size_t>(cfg.n_maps));
    run_tasks(jobs, prepared.size(), [&](std::size_t i) {
        prepared[i] = prepare_map(cfg, static_cast<int>(i));
    });

    // Stage 2: one task per (map, pair), five records each.
    const std::size_t pair_tasks =
        static_cast<std::size_t>(cfg.n_maps) * static_cast<std::size_t>(cfg.pairs_per_map);
    std::vector<std::vector<BenchmarkRecord>> slots(pair_tasks);
    run_tasks(jobs, pair_tasks, [&](std::size_t task) {
        const int map_index = static_cast<int>(task) / cfg.pairs_per_map;
        const int pair_index = static_cast<int>(task) % cfg.pairs_per_map;
        const PreparedMap& prep = prepared[static_cast<std::size_t>(map_index)];
        if (!prep.error.empty() || !prep.model) {
            std::vector<BenchmarkRecord> failed;
            for (Method m : all_methods()) {
                BenchmarkRecord r;
                r.map_seed = prep.map.seed;
                r.pair_index = pair_index;
                r.method = m;
                r.status = "map_prep_failed";
                failed.push_back(std::move(r));
            }
            slots[task] = std::move(failed);
            return;
        }
        slots[task] = run_pair(cfg, prep, map_index, pair_index);
    });

    SuiteResult result;
    result.records.reserve(pair_tasks * 5);
    for (auto& slot : slots) {
        for (auto& rec : slot) result.records.push_back(std::move(rec));
    }

    if (!cfg.out_dir.empty()) {
        fs::create_directories(cfg.out_dir);
        {
            std::ofstream csv(fs::path(cfg.out_dir) / "records.csv");
            csv << records_to_csv(result.records);
        }
        {
            std::ofstream summary(fs::path(cfg.out_dir) / "summary.json");
            summary << summary_to_json(cfg, result.records) << "\n";
        }
        if (cfg.write_traces) {
            fs::create_directories(fs::path(cfg.out_dir) / "traces");
            for (const auto& rec : result.records) {
                if (rec.trace.empty()) continue;
                std::ostringstream name;
                name << "map" << rec.map_seed << "_pair" << rec.pair_index << "_"
                     << method_name(rec.method) << ".json";
                std::ofstream out(fs::path(cfg.out_dir) / "traces" / name.str());
                nlohmann::json doc = nlohmann::json::array();
                for (const auto& it : rec.trace) {
                    doc.push_back({{"total", it.total},
                                   {"L_l", it.length},
                                   {"L_T", it.traversability},
                                   {"L_sigma", it.variance},
                                   {"L_o", it.obstacle},
                                   {"L_c", it.curvature}});
                }
                out << doc.dump() << "\n";
            }
        }
    }
    return result;
}

std::string records_to_csv(const std::vector<BenchmarkRecord>& records) {
    std::ostringstream csv;
    csv << "map_seed,pair_index,method,compute_time_s,length_m,mean_traversability,"
           "mean_variance,curvature_violated,collided,final_loss,iterations,status\n";
    for (const auto& r : records) {
        csv << r.map_seed << "," << r.pair_index << "," << method_name(r.method) << ","
            << fmt_double(r.compute_time_s) << ",";
        if (r.metrics) {
            csv << fmt_double(r.metrics->length_m) << ","
                << fmt_double(r.metrics->mean_traversability) << ","
                << fmt_double(r.metrics->mean_variance) << ","
                << (r.metrics->curvature_violated ? "true" : "false") << ","
                << (r.metrics->collided ? "true" : "false") << ",";
        } else {
            csv << ",,,,,";
        }
        if (r.final_loss) csv << fmt_double(*r.final_loss);
        csv << ",";
        if (r.iterations) csv << *r.iterations;
        csv << "," << r.status << "\n";
    }
    return csv.str();
}

std::vector<BenchmarkRecord> records_from_csv(const std::string& text) {
    std::vector<BenchmarkRecord> records;
    std::istringstream in(text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (header) {
            header = false;
            continue;
        }
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        while (cells.size() < 12) cells.emplace_back();

        BenchmarkRecord r;
        r.map_seed = std::stoull(cells[0]);
        r.pair_index = std::stoi(cells[1]);
        for (Method m : all_methods()) {
            if (cells[2] == method_name(m)) r.method = m;
        }
        r.compute_time_s = std::stod(cells[3]);
        if (!cells[4].empty()) {
            PathMetrics metrics;
            metrics.length_m = std::stod(cells[4]);
            metrics.mean_traversability = std::stod(cells[5]);
            metrics.mean_variance = std::stod(cells[6]);
            metrics.curvature_violated = cells[7] == "true";
            metrics.collided = cells[8] == "true";
            r.metrics = metrics;
        }
        if (!cells[9].empty()) r.final_loss = std::stod(cells[9]);
        if (!cells[10].empty()) r.iterations = std::stoi(cells[10]);
        r.status = cells[11];
        records.push_back(std::move(r));
    }
    return records;
}

namespace {

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return std::nan("");
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

double median_of(std::vector<double> v) {
    if (v.empty()) return std::nan("");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void put_stat(nlohmann::json& j, const std::string& key, double value) {
    if (std::isnan(value)) {
        j[key] = nullptr;
    } else {
        j[key] = value;
    }
}

}  // namespace

std::string summary_to_json(const SuiteConfig& cfg, const std::vector<BenchmarkRecord>& records,
                            int indent) {
    nlohmann::json doc;
    doc["n_maps"] = cfg.n_maps;
    doc["pairs_per_map"] = cfg.pairs_per_map;
    doc["master_seed"] = cfg.master_seed;
    doc["record_count"] = records.size();

    // Prior compute times keyed by (map_seed, pair_index) for the
    // optimisation-only statistics of the seeded BCO methods.
    auto prior_time = [&](const BenchmarkRecord& rec) -> std::optional<double> {
        Method prior_method;
        if (rec.method == Method::bco_astar) {
            prior_method = Method::astar;
        } else if (rec.method == Method::bco_trrt) {
            prior_method = Method::trrt;
        } else {
            return 0.0;
        }
        for (const auto& other : records) {
            if (other.map_seed == rec.map_seed && other.pair_index == rec.pair_index &&
                other.method == prior_method && other.status == "ok") {
                return other.compute_time_s;
            }
        }
        return std::nullopt;
    };

    nlohmann::json methods;
    for (Method m : all_methods()) {
        std::size_t total = 0, ok = 0, collisions = 0, violations = 0;
        std::vector<double> times, lengths, traversabilities, variances, losses, iterations;
        std::vector<double> opt_times;
        for (const auto& r : records) {
            if (r.method != m) continue;
            ++total;
            if (r.status != "ok" || !r.metrics) continue;
            ++ok;
            if (r.metrics->collided) ++collisions;
            if (r.metrics->curvature_violated) ++violations;
            times.push_back(r.compute_time_s);
            lengths.push_back(r.metrics->length_m);
            traversabilities.push_back(r.metrics->mean_traversability);
            variances.push_back(r.metrics->mean_variance);
            if (r.final_loss) losses.push_back(*r.final_loss);
            if (r.iterations) iterations.push_back(static_cast<double>(*r.iterations));
            if (m == Method::bco_none || m == Method::bco_astar || m == Method::bco_trrt) {
                if (auto prior = prior_time(r)) opt_times.push_back(r.compute_time_s - *prior);
            }
        }
        nlohmann::json j;
        j["records"] = total;
        j["ok"] = ok;
        j["failures"] = total - ok;
        j["collisions"] = collisions;
        j["curvature_violations"] = violations;
        put_stat(j, "mean_compute_time_s", mean_of(times));
        put_stat(j, "mean_length_m", mean_of(lengths));
        put_stat(j, "mean_traversability", mean_of(traversabilities));
        put_stat(j, "mean_variance", mean_of(variances));
        put_stat(j, "median_length_m", median_of(lengths));
        std::vector<double> one_minus;
        one_minus.reserve(traversabilities.size());
        for (double t : traversabilities) one_minus.push_back(1.0 - t);
        put_stat(j, "median_one_minus_traversability", median_of(one_minus));
        put_stat(j, "median_variance", median_of(variances));
        if (!losses.empty()) put_stat(j, "mean_final_loss", mean_of(losses));
        if (!iterations.empty()) {
            put_stat(j, "median_iterations", median_of(iterations));
            put_stat(j, "max_iterations", *std::max_element(iterations.begin(), iterations.end()));
        }
        if (!opt_times.empty()) put_stat(j, "mean_opt_time_s", mean_of(opt_times));
        methods[method_name(m)] = j;
    }
    doc["methods"] = methods;
    return doc.dump(indent);
}

SuiteConfig suite_config_from_json(const std::string& text) {
    const nlohmann::json doc = nlohmann::json::parse(text);
    SuiteConfig cfg;

    static const std::vector<std::string> kTopKeys = {
        "n_maps", "pairs_per_map", "master_seed", "jobs",  "out_dir", "write_traces",
        "envgen", "shared",        "astar",       "trrt", "bco",     "fit"};
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (std::find(kTopKeys.begin(), kTopKeys.end(), it.key()) == kTopKeys.end()) {
            throw ParameterOutOfRangeError("unknown config key: " + it.key());
        }
    }

    auto get = [](const nlohmann::json& j, const char* key, auto fallback) {
        using T = decltype(fallback);
        return j.contains(key) ? j.at(key).get<T>() : fallback;
    };

    cfg.n_maps = get(doc, "n_maps", cfg.n_maps);
    cfg.pairs_per_map = get(doc, "pairs_per_map", cfg.pairs_per_map);
    cfg.master_seed = get(doc, "master_seed", cfg.master_seed);
    cfg.jobs = get(doc, "jobs", cfg.jobs);
    cfg.out_dir = get(doc, "out_dir", cfg.out_dir);
    cfg.write_traces = get(doc, "write_traces", cfg.write_traces);

    if (doc.contains("envgen")) {
        const auto& e = doc.at("envgen");
        cfg.training_points = get(e, "training_points", cfg.training_points);
        cfg.ablate_discs = get(e, "ablate_discs", cfg.ablate_discs);
        cfg.ablate_radius = get(e, "ablate_radius", cfg.ablate_radius);
        cfg.pair_min_separation = get(e, "pair_min_separation", cfg.pair_min_separation);
    }
    if (doc.contains("shared")) {
        const auto& s = doc.at("shared");
        cfg.safety_radius = get(s, "R", cfg.safety_radius);
        cfg.f_T = get(s, "f_T", cfg.f_T);
        cfg.f_sigma = get(s, "f_sigma", cfg.f_sigma);
    }
    cfg.sync_shared();
    if (doc.contains("astar")) {
        const auto& a = doc.at("astar");
        cfg.astar_res = get(a, "res", cfg.astar_res);
        cfg.astar_weight = get(a, "heuristic_weight", cfg.astar_weight);
    }
    if (doc.contains("trrt")) {
        const auto& t = doc.at("trrt");
        cfg.trrt.step = get(t, "step", cfg.trrt.step);
        cfg.trrt.goal_bias = get(t, "goal_bias", cfg.trrt.goal_bias);
        cfg.trrt.max_iterations = get(t, "max_iterations", cfg.trrt.max_iterations);
        cfg.trrt.temperature_init = get(t, "temperature_init", cfg.trrt.temperature_init);
        cfg.trrt.temp_rate = get(t, "temp_rate", cfg.trrt.temp_rate);
        cfg.trrt.n_fail_max = get(t, "n_fail_max", cfg.trrt.n_fail_max);
        cfg.trrt.collision_check_res = get(t, "collision_check_res", cfg.trrt.collision_check_res);
    }
    if (doc.contains("bco")) {
        const auto& b = doc.at("bco");
        cfg.bco.res = get(b, "res", cfg.bco.res);
        cfg.bco.min_turn_radius = get(b, "r0", cfg.bco.min_turn_radius);
        cfg.bco.lr = get(b, "lr", cfg.bco.lr);
        cfg.bco.f_o = get(b, "f_o", cfg.bco.f_o);
        cfg.bco.f_c = get(b, "f_c", cfg.bco.f_c);
        cfg.bco.cpr = get(b, "cpr", cfg.bco.cpr);
        cfg.bco.max_iter = get(b, "max_iter", cfg.bco.max_iter);
        cfg.bco.early_stop_tol = get(b, "early_stop_tol", cfg.bco.early_stop_tol);
        cfg.bco.patience = get(b, "patience", cfg.bco.patience);
    }
    if (doc.contains("fit")) {
        const auto& f = doc.at("fit");
        cfg.fit.max_iterations = get(f, "max_iterations", cfg.fit.max_iterations);
        cfg.fit.initial_step = get(f, "initial_step", cfg.fit.initial_step);
        cfg.fit.tol = get(f, "tol", cfg.fit.tol);
        cfg.fit.fit_noise = get(f, "fit_noise", cfg.fit.fit_noise);
    }
    return cfg;
}

std::string suite_config_to_json(const SuiteConfig& cfg, int indent) {
    nlohmann::json doc;
    doc["n_maps"] = cfg.n_maps;
    doc["pairs_per_map"] = cfg.pairs_per_map;
    doc["master_seed"] = cfg.master_seed;
    doc["jobs"] = cfg.jobs;
    doc["out_dir"] = cfg.out_dir;
    doc["write_traces"] = cfg.write_traces;
    doc["envgen"] = {{"training_points", cfg.training_points},
                     {"ablate_discs", cfg.ablate_discs},
                     {"ablate_radius", cfg.ablate_radius},
                     {"pair_min_separation", cfg.pair_min_separation}};
    doc["shared"] = {{"R", cfg.safety_radius}, {"f_T", cfg.f_T}, {"f_sigma", cfg.f_sigma}};
    doc["astar"] = {{"res", cfg.astar_res}, {"heuristic_weight", cfg.astar_weight}};
    doc["trrt"] = {{"step", cfg.trrt.step},
                   {"goal_bias", cfg.trrt.goal_bias},
                   {"max_iterations", cfg.trrt.max_iterations},
                   {"temperature_init", cfg.trrt.temperature_init},
                   {"temp_rate", cfg.trrt.temp_rate},
                   {"n_fail_max", cfg.trrt.n_fail_max},
                   {"collision_check_res", cfg.trrt.collision_check_res}};
    doc["bco"] = {{"res", cfg.bco.res},
                  {"r0", cfg.bco.min_turn_radius},
                  {"lr", cfg.bco.lr},
                  {"f_o", cfg.bco.f_o},
                  {"f_c", cfg.bco.f_c},
                  {"cpr", cfg.bco.cpr},
                  {"max_iter", cfg.bco.max_iter},
                  {"early_stop_tol", cfg.bco.early_stop_tol},
                  {"patience", cfg.bco.patience}};
    doc["fit"] = {{"max_iterations", cfg.fit.max_iterations},
                  {"initial_step", cfg.fit.initial_step},
                  {"tol", cfg.fit.tol},
                  {"fit_noise", cfg.fit.fit_noise}};
    return doc.dump(indent);
}

}  // namespace gpplan::bench
