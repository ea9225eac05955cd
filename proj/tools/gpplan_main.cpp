#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "gpplan/bench.hpp"
#include "gpplan/render.hpp"
#include "gpplan/rng.hpp"

namespace fs = std::filesystem;
using namespace gpplan;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

Vec2 parse_point(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw CLI::ValidationError("expected X,Y");
    return Vec2(std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1)));
}

struct PlanOutput {
    PointList waypoints;
    std::optional<bezier::ControlPolygon> polygon;
    std::optional<bco::OptimisationTrace> trace;
    bench::PathMetrics metrics;
    double compute_time_s = 0.0;
};

int cmd_gen_maps(int n_maps, std::uint64_t seed, const std::string& out_dir) {
    fs::create_directories(out_dir);
    for (int i = 0; i < n_maps; ++i) {
        const auto map = env::generate_map(seed + static_cast<std::uint64_t>(i));
        std::ostringstream name;
        name << "map_" << map.seed << ".json";
        write_file((fs::path(out_dir) / name.str()).string(), env::map_to_json_string(map, 2));
        std::cout << "wrote " << (fs::path(out_dir) / name.str()).string() << "\n";
    }
    return 0;
}

int cmd_train(const std::string& map_file, int points, int ablate_discs, double ablate_radius,
              std::uint64_t seed, const std::string& out_file) {
    const auto map = env::map_from_json_string(read_file(map_file));
    const auto raw = env::sample_training_set(map, static_cast<std::size_t>(points),
                                              derive_seed(seed, 101));
    const auto ablated =
        env::ablate(raw, derive_seed(seed, 102), ablate_discs, ablate_radius, map.bounds());

    auto moment_init = [](const std::vector<double>& y) {
        double mean = 0.0;
        for (double v : y) mean += v;
        mean /= static_cast<double>(y.size());
        double var = 0.0;
        for (double v : y) var += (v - mean) * (v - mean);
        var /= static_cast<double>(y.size());
        const double output_scale = std::max(var, 1e-3);
        return gp::KernelParams(1.0, output_scale, std::max(0.1 * std::sqrt(output_scale), 1e-3));
    };
    const auto params_T =
        gp::fit_hyperparameters(ablated.training, moment_init(ablated.training.traversability()),
                                gp::Output::traversability);
    const auto params_d =
        gp::fit_hyperparameters(ablated.training, moment_init(ablated.training.obstacle_distance()),
                                gp::Output::distance);
    const gp::GprModel model(ablated.training, params_T, params_d);
    write_file(out_file, model.to_json_string(2));
    std::cout << "trained on " << ablated.training.size() << " points, wrote " << out_file << "\n";
    return 0;
}

PlanOutput run_method(const gp::GprModel& model, const std::string& method, const Vec2& start,
                      const Vec2& goal, const bench::SuiteConfig& cfg, std::uint64_t seed) {
    const Rect bounds{0.0, 0.0, 10.0, 10.0};
    const bench::PathEvalConfig eval_cfg{cfg.bco.res, cfg.safety_radius,
                                         cfg.bco.min_turn_radius};
    PlanOutput out;
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    auto run_grid_prior = [&]() {
        const auto grid = grid::build_grid(model, bounds, cfg.astar_res, cfg.safety_radius);
        return grid::astar(grid, start, goal, {cfg.f_T, cfg.f_sigma, cfg.astar_weight});
    };
    auto run_trrt_prior = [&]() {
        return trrt::plan(model, start, goal, bounds, cfg.trrt, seed);
    };
    auto run_bco = [&](const std::optional<PointList>& prior) {
        const auto p0 = prior ? bco::init_from_prior(*prior, cfg.bco.cpr)
                              : bco::init_priorless(start, goal, cfg.bco.cpr);
        auto trace = bco::optimise(model, p0, cfg.bco);
        out.polygon = trace.final_polygon;
        out.metrics = bench::evaluate_path(model, trace.final_polygon, eval_cfg);
        for (const auto& s : bezier::sample_path(trace.final_polygon, cfg.bco.res)) {
            out.waypoints.push_back(s.position);
        }
        out.trace = std::move(trace);
    };

    if (method == "astar") {
        out.waypoints = run_grid_prior().waypoints;
        out.metrics = bench::evaluate_path(model, out.waypoints, eval_cfg);
    } else if (method == "trrt") {
        out.waypoints = run_trrt_prior();
        out.metrics = bench::evaluate_path(model, out.waypoints, eval_cfg);
    } else if (method == "bco-none") {
        run_bco(std::nullopt);
    } else if (method == "bco-astar") {
        run_bco(run_grid_prior().waypoints);
    } else if (method == "bco-trrt") {
        run_bco(run_trrt_prior());
    } else {
        throw CLI::ValidationError("unknown method " + method);
    }
    out.compute_time_s = elapsed();
    return out;
}

int cmd_plan(const std::string& model_file, const std::string& method, const std::string& start_s,
             const std::string& goal_s, const std::string& config_file,
             const std::string& out_file, const std::string& svg_file, std::uint64_t seed) {
    const auto model = gp::GprModel::from_json_string(read_file(model_file));
    bench::SuiteConfig cfg;
    if (!config_file.empty()) cfg = bench::suite_config_from_json(read_file(config_file));
    const Vec2 start = parse_point(start_s);
    const Vec2 goal = parse_point(goal_s);

    const PlanOutput result = run_method(model, method, start, goal, cfg, seed);

    nlohmann::json doc;
    doc["method"] = method;
    doc["start"] = {start.x(), start.y()};
    doc["goal"] = {goal.x(), goal.y()};
    auto& waypoints = doc["waypoints"];
    waypoints = nlohmann::json::array();
    for (const auto& w : result.waypoints) waypoints.push_back({w.x(), w.y()});
    if (result.polygon) {
        auto& control = doc["control_points"];
        control = nlohmann::json::array();
        for (const auto& p : result.polygon->points) control.push_back({p.x(), p.y()});
    }
    if (result.trace) {
        doc["trace"] = nlohmann::json::parse(bco::trace_to_json_string(*result.trace));
        doc["iterations"] = result.trace->iterations_run;
        doc["final_loss"] = result.trace->iterations.back().total;
    }
    doc["metrics"] = {{"length_m", result.metrics.length_m},
                      {"mean_traversability", result.metrics.mean_traversability},
                      {"mean_variance", result.metrics.mean_variance},
                      {"curvature_violated", result.metrics.curvature_violated},
                      {"collided", result.metrics.collided}};
    doc["compute_time_s"] = result.compute_time_s;
    write_file(out_file, doc.dump(2) + "\n");
    std::cout << "wrote " << out_file << "\n";

    if (!svg_file.empty()) {
        env::EnvironmentMap frame;  // model-only rendering frame
        frame.side = 10.0;
        frame.tiles.assign(100, 1.0);
        std::vector<bench::RenderPath> paths;
        paths.push_back({method, "#e41a1c", result.waypoints});
        write_file(svg_file,
                   bench::render_svg(frame, model, paths, 0.05, cfg.safety_radius));
        std::cout << "wrote " << svg_file << "\n";
    }
    return 0;
}

int cmd_bench(const std::string& config_file, const std::string& out_dir, int jobs) {
    bench::SuiteConfig cfg;
    if (!config_file.empty()) cfg = bench::suite_config_from_json(read_file(config_file));
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (jobs > 0) cfg.jobs = jobs;

    const auto result = bench::run_suite(cfg);
    std::size_t failures = 0;
    for (const auto& r : result.records) {
        if (r.status != "ok") ++failures;
    }
    std::cout << "suite finished: " << result.records.size() << " records, " << failures
              << " failures; outputs in " << cfg.out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GP-map path planning toolkit: informative A*, T-RRT and "
                 "Bezier curve optimisation over a Gaussian-process terrain model"};
    app.require_subcommand(1);

    // gen-maps
    auto* gen = app.add_subcommand("gen-maps", "Generate procedural environment maps");
    int n_maps = 1;
    std::uint64_t gen_seed = 1;
    std::string gen_out = "maps";
    gen->add_option("--maps", n_maps, "Number of maps");
    gen->add_option("--seed", gen_seed, "Seed of the first map");
    gen->add_option("--out", gen_out, "Output directory")->required();

    // train
    auto* train_cmd = app.add_subcommand("train", "Sample a map and fit a GP model");
    std::string train_map, train_out;
    int train_points = 500, train_discs = 3;
    double train_radius = 1.5;
    std::uint64_t train_seed = 1;
    train_cmd->add_option("--map", train_map, "Map JSON file")->required();
    train_cmd->add_option("--points", train_points, "Training points to sample");
    train_cmd->add_option("--ablate-discs", train_discs, "Number of ablation discs");
    train_cmd->add_option("--ablate-radius", train_radius, "Ablation disc radius (m)");
    train_cmd->add_option("--seed", train_seed, "Sampling seed");
    train_cmd->add_option("--out", train_out, "Output model JSON file")->required();

    // plan
    auto* plan_cmd = app.add_subcommand("plan", "Plan a single path");
    std::string plan_model, plan_method, plan_start, plan_goal, plan_config, plan_out, plan_svg;
    std::uint64_t plan_seed = 1;
    plan_cmd->add_option("--model", plan_model, "Model JSON file")->required();
    plan_cmd->add_option("--method", plan_method, "astar|trrt|bco-none|bco-astar|bco-trrt")
        ->required();
    plan_cmd->add_option("--start", plan_start, "Start X,Y")->required();
    plan_cmd->add_option("--goal", plan_goal, "Goal X,Y")->required();
    plan_cmd->add_option("--config", plan_config, "Suite config JSON (optional)");
    plan_cmd->add_option("--out", plan_out, "Output path JSON")->required();
    plan_cmd->add_option("--svg", plan_svg, "Optional SVG rendering");
    plan_cmd->add_option("--seed", plan_seed, "Planner seed (trrt)");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Run the comparative benchmark suite");
    std::string bench_config, bench_out;
    int bench_jobs = 0;
    bench_cmd->add_option("--config", bench_config, "Suite config JSON");
    bench_cmd->add_option("--out", bench_out, "Output directory");
    bench_cmd->add_option("--jobs", bench_jobs, "Worker threads");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_gen_maps(n_maps, gen_seed, gen_out);
        if (train_cmd->parsed()) {
            return cmd_train(train_map, train_points, train_discs, train_radius, train_seed,
                             train_out);
        }
        if (plan_cmd->parsed()) {
            return cmd_plan(plan_model, plan_method, plan_start, plan_goal, plan_config, plan_out,
                            plan_svg, plan_seed);
        }
        if (bench_cmd->parsed()) return cmd_bench(bench_config, bench_out, bench_jobs);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
