#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gpplan/trrt.hpp"
#include "oracles.hpp"

using namespace gpplan;
using trrt::TransitionState;
using trrt::TrrtConfig;

namespace {

/// Obstacle-free world: T = 1 everywhere, obstacle distance ~5 m, trained on
/// a covering grid so the posterior stays flat inside the bounds.
gp::GprModel covering_model(double distance_target) {
    PointList pts;
    std::vector<double> trav, dist;
    for (int iy = 0; iy <= 10; ++iy) {
        for (int ix = 0; ix <= 10; ++ix) {
            pts.emplace_back(static_cast<double>(ix), static_cast<double>(iy));
            trav.push_back(1.0);
            dist.push_back(distance_target);
        }
    }
    return gp::train(gp::TrainingSet(pts, trav, dist), gp::KernelParams(2.0, 1.0, 0.01));
}

/// Obstacle-free world: T = 1 everywhere, obstacle distance ~5 m, trained on
/// a covering grid so the posterior stays flat inside the bounds.
gp::GprModel uniform_free_model() { return covering_model(5.0); }

/// Obstacle distance below the safety radius everywhere.
gp::GprModel fully_blocked_model() { return covering_model(0.05); }

}  // namespace

TEST_CASE("node_cost: vanishing terms and degenerate weights") {
    const auto model = uniform_free_model();
    const Vec2 g(5.0, 5.0);
    // at the goal every term vanishes up to the residual GP variance: the
    // distance term is exactly zero and T >= 1 clamps to a zero deficit
    CHECK(trrt::node_cost(model, g, g, 10.0, 0.0) == 0.0);
    CHECK(trrt::node_cost(model, g, g, 10.0, 200.0) ==
          doctest::Approx(200.0 * model.infer(g).variance));
    CHECK(trrt::node_cost(model, g, g, 10.0, 200.0) < 0.02);
    Rng rng(5);
    for (int i = 0; i < 10; ++i) {
        const Vec2 n(rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0));
        CHECK(trrt::node_cost(model, n, g, 0.0, 0.0) == doctest::Approx((n - g).norm()));
    }
}

TEST_CASE("node_cost: composition oracle") {
    Rng rng(7);
    const auto model = oracles::random_model(rng, 30);
    for (int i = 0; i < 20; ++i) {
        const Vec2 n(rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0));
        const Vec2 g(rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0));
        const auto post = model.infer(n);
        const double expected = (n - g).norm() +
                                10.0 * (1.0 - std::clamp(post.mean_T, 1e-3, 1.0)) +
                                200.0 * post.variance;
        CHECK(std::abs(trrt::node_cost(model, n, g, 10.0, 200.0) - expected) < 1e-12);
    }
}

TEST_CASE("transition_test: downhill always accepted") {
    TrrtConfig cfg;
    Rng rng(11);
    for (int i = 0; i < 100; ++i) {
        TransitionState state{1e-9, 0};  // even a frozen temperature
        CHECK(trrt::transition_test(5.0, 5.0 - rng.uniform(), state, cfg, rng));
        CHECK(trrt::transition_test(5.0, 5.0, state, cfg, rng));
    }
}

TEST_CASE("transition_test: uphill acceptance rate is exp(-1) at dc = T") {
    TrrtConfig cfg;
    Rng rng(13);
    int accepted = 0;
    const int trials = 10000;
    for (int i = 0; i < trials; ++i) {
        TransitionState state{2.0, 0};  // fresh state, probability stays exp(-1)
        if (trrt::transition_test(1.0, 3.0, state, cfg, rng)) ++accepted;
    }
    const double rate = static_cast<double>(accepted) / trials;
    CHECK(std::abs(rate - std::exp(-1.0)) < 0.02);
}

TEST_CASE("transition_test: infinite-temperature limit accepts everything") {
    TrrtConfig cfg;
    Rng rng(17);
    int accepted = 0;
    for (int i = 0; i < 1000; ++i) {
        TransitionState state{1e18, 0};
        if (trrt::transition_test(0.0, 1.0, state, cfg, rng)) ++accepted;
    }
    CHECK(accepted == 1000);
}

TEST_CASE("transition_test: temperature adaptation") {
    TrrtConfig cfg;  // temp_rate 2, n_fail_max 20
    Rng rng(19);

    TransitionState state{8.0, 0};
    // hopeless uphill moves: first n_fail_max rejections keep T, the next one reheats
    for (int i = 0; i < cfg.n_fail_max; ++i) {
        CHECK(!trrt::transition_test(0.0, 1e6, state, cfg, rng));
        CHECK(state.temperature == 8.0);
    }
    CHECK(!trrt::transition_test(0.0, 1e6, state, cfg, rng));
    CHECK(state.temperature == 16.0);
    CHECK(state.n_fail == 0);

    // a tiny uphill step is accepted and cools the temperature
    TransitionState warm{16.0, 0};
    CHECK(trrt::transition_test(0.0, 1e-12, warm, cfg, rng));
    CHECK(warm.temperature == 8.0);
}

TEST_CASE("plan: succeeds over 20 seeds on an obstacle-free map") {
    const auto model = uniform_free_model();
    const Rect bounds{0, 0, 10, 10};
    TrrtConfig cfg;
    const Vec2 s(1.0, 1.0), g(9.0, 9.0);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto path = trrt::plan(model, s, g, bounds, cfg, seed);
        REQUIRE(path.size() >= 2);
        CHECK(path.front() == s);
        CHECK(path.back() == g);
        for (std::size_t i = 1; i < path.size(); ++i) {
            const Vec2 a = path[i - 1];
            const Vec2 b = path[i];
            CHECK((b - a).norm() <= cfg.step + 1e-9);
            // collision contract along the edge
            const int checks = 10;
            for (int k = 0; k <= checks; ++k) {
                const Vec2 p = a + (static_cast<double>(k) / checks) * (b - a);
                CHECK(model.mean_distance(p) > cfg.safety_radius);
            }
        }
    }
}

TEST_CASE("plan: deterministic per seed, including the grown tree") {
    const auto model = uniform_free_model();
    const Rect bounds{0, 0, 10, 10};
    TrrtConfig cfg;
    trrt::Tree tree_a, tree_b;
    const auto a = trrt::plan(model, Vec2(1, 2), Vec2(8, 7), bounds, cfg, 99, &tree_a);
    const auto b = trrt::plan(model, Vec2(1, 2), Vec2(8, 7), bounds, cfg, 99, &tree_b);
    CHECK(a == b);
    REQUIRE(tree_a.nodes.size() == tree_b.nodes.size());
    for (std::size_t i = 0; i < tree_a.nodes.size(); ++i) {
        CHECK(tree_a.nodes[i].position == tree_b.nodes[i].position);
        CHECK(tree_a.nodes[i].parent == tree_b.nodes[i].parent);
        // tree edges respect the step bound; parents precede children
        CHECK(tree_a.nodes[i].parent < static_cast<int>(i));
        if (tree_a.nodes[i].parent >= 0) {
            const Vec2 parent =
                tree_a.nodes[static_cast<std::size_t>(tree_a.nodes[i].parent)].position;
            CHECK((tree_a.nodes[i].position - parent).norm() <= cfg.step + 1e-9);
        }
    }
}

TEST_CASE("plan: blocked endpoints and exhaustion") {
    const Rect bounds{0, 0, 10, 10};
    TrrtConfig cfg;
    CHECK_THROWS_AS(
        trrt::plan(fully_blocked_model(), Vec2(1, 1), Vec2(9, 9), bounds, cfg, 1),
        StartOrGoalBlockedError);

    // unreachable goal within a tiny iteration budget: the free model but a
    // goal bias of zero and one iteration cannot connect 8 m
    const auto model = uniform_free_model();
    TrrtConfig tiny = cfg;
    tiny.max_iterations = 1;
    tiny.goal_bias = 0.0;
    CHECK_THROWS_AS(trrt::plan(model, Vec2(1, 1), Vec2(9, 9), bounds, tiny, 1),
                    MaxIterationsError);
}
