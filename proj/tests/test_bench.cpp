#include <doctest.h>

#include "support.hpp"

using namespace hiercls;
using namespace hiercls::testing;

namespace {

RunMetrics curve(HeadKind method, const std::vector<double>& val_acc, std::uint64_t interval = 100) {
    RunMetrics r{method, PredictionMode::Mlnp, 0, {}};
    for (std::size_t i = 0; i < val_acc.size(); ++i) {
        const double a = val_acc[i];
        r.checkpoints.push_back({(i + 1) * interval, a, 1.0 - a, a, 1.0 - a});
    }
    return r;
}

std::vector<double> random_curve(std::mt19937_64& rng, std::size_t n, bool monotone) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    if (monotone) std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

TEST_CASE("speedup of a curve against itself") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        const auto acc = random_curve(rng, 1 + rng() % 20, true);
        const auto rep = compute_speedup(curve(HeadKind::Hierarchical, acc), curve(HeadKind::Baseline, acc));
        for (const auto& row : rep.rows) {
            // duplicated accuracies match at their first occurrence
            REQUIRE(row.ratio.has_value());
            REQUIRE(*row.ratio <= 1.0);
            if (std::count(acc.begin(), acc.end(), row.accuracy) == 1) REQUIRE(*row.ratio == 1.0);
        }
        REQUIRE(rep.initial_speedup == 1.0);
    }
    const auto rep = compute_speedup(curve(HeadKind::Hierarchical, {0.1, 0.2, 0.3}), curve(HeadKind::Baseline, {0.1, 0.2, 0.3}));
    CHECK(rep.overall_speedup == 1.0);
}

TEST_CASE("matching rule") {
    // hierarchy reaches 0.289 at step 100, baseline needs until step 200
    const auto hier = curve(HeadKind::Hierarchical, {0.289, 0.35, 0.40, 0.42});
    const auto base = curve(HeadKind::Baseline, {0.20, 0.30, 0.33, 0.36});
    const auto rep = compute_speedup(hier, base);
    REQUIRE(rep.rows.size() == 4);
    CHECK(rep.rows[0].baseline_step == 200u);
    CHECK(rep.rows[0].ratio == 2.0);
    CHECK(rep.rows[1].baseline_step == 400u);
    CHECK(rep.rows[1].ratio == 2.0);
    CHECK_FALSE(rep.rows[2].baseline_step.has_value());
    CHECK_FALSE(rep.rows[2].ratio.has_value());
    CHECK(rep.initial_speedup == 2.0);
    // baseline ends at 0.36 after 400 steps, hierarchy first reaches it at step 300
    CHECK(rep.overall_speedup == 400.0 / 300.0);
    CHECK(rep.baseline_final_accuracy == 0.36);
    CHECK(rep.hierarchical_final_accuracy == 0.42);
}

TEST_CASE("hierarchy strictly above baseline") {
    const auto base = curve(HeadKind::Baseline, {0.1, 0.2, 0.3, 0.4, 0.5});
    const auto hier = curve(HeadKind::Hierarchical, {0.25, 0.35, 0.45, 0.55, 0.6});
    const auto rep = compute_speedup(hier, base);
    REQUIRE(rep.overall_speedup.has_value());
    CHECK(*rep.overall_speedup > 1.0);
}

TEST_CASE("undefined speedups") {
    const auto base = curve(HeadKind::Baseline, {0.1, 0.2});
    const auto hier = curve(HeadKind::Hierarchical, {0.5, 0.6});
    CHECK_FALSE(compute_speedup(hier, base).initial_speedup.has_value());
    const auto low = curve(HeadKind::Hierarchical, {0.05, 0.15});
    CHECK_FALSE(compute_speedup(low, base).overall_speedup.has_value());
}

TEST_CASE("grid mismatch") {
    CHECK_THROWS_AS(compute_speedup(curve(HeadKind::Hierarchical, {0.1, 0.2}), curve(HeadKind::Baseline, {0.1})),
                    GridMismatch);
    CHECK_THROWS_AS(compute_speedup(curve(HeadKind::Hierarchical, {0.1}, 100), curve(HeadKind::Baseline, {0.1}, 50)),
                    GridMismatch);
    auto no_val = curve(HeadKind::Baseline, {0.1});
    no_val.checkpoints[0].val_accuracy.reset();
    CHECK_THROWS_AS(compute_speedup(curve(HeadKind::Hierarchical, {0.1}), no_val), GridMismatch);
}

TEST_CASE("raising the hierarchical curve never lowers a defined ratio") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 0.2);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng() % 15;
        const auto base = curve(HeadKind::Baseline, random_curve(rng, n, trial % 2 == 0));
        auto low = random_curve(rng, n, false);
        auto high = low;
        for (auto& v : high) v = std::min(1.0, v + u(rng));
        const auto a = compute_speedup(curve(HeadKind::Hierarchical, low), base);
        const auto b = compute_speedup(curve(HeadKind::Hierarchical, high), base);
        for (std::size_t i = 0; i < n; ++i) {
            if (a.rows[i].ratio && b.rows[i].ratio) REQUIRE(*b.rows[i].ratio >= *a.rows[i].ratio);
        }
    }
}

TEST_CASE("metrics csv round trips") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<RunMetrics> runs;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        for (HeadKind head : {HeadKind::Baseline, HeadKind::Hierarchical}) {
            RunMetrics r{head, PredictionMode::Mlnp, seed, {}};
            for (std::uint64_t s = 1; s <= 7; ++s) {
                Checkpoint c{s * 13, u(rng), u(rng) * 3.0, std::nullopt, std::nullopt};
                if (seed != 1) {
                    c.val_accuracy = u(rng);
                    c.val_loss = 1.0 / 3.0 + u(rng);
                }
                r.checkpoints.push_back(c);
            }
            runs.push_back(r);
        }
    }
    const auto text = metrics_csv(runs);
    CHECK(text.rfind("method,seed,step,split,accuracy,loss\n", 0) == 0);
    CHECK(parse_metrics_csv(text) == runs);
    CHECK_THROWS_AS(parse_metrics_csv("bogus\n"), ParseError);
}

TEST_CASE("average runs") {
    const auto a = curve(HeadKind::Baseline, {0.2, 0.4});
    const auto b = curve(HeadKind::Baseline, {0.4, 0.8});
    const auto m = average_runs({a, b});
    CHECK(*m.checkpoints[0].val_accuracy == doctest::Approx(0.3));
    CHECK(*m.checkpoints[1].val_accuracy == doctest::Approx(0.6));
    CHECK_THROWS_AS(average_runs({a, curve(HeadKind::Baseline, {0.1})}), GridMismatch);
    CHECK_THROWS_AS(average_runs({}), GridMismatch);
}

TEST_CASE("bench config parsing") {
    const auto cfg = parse_bench_config(
        "# comment\n[data]\ndepth = 4\nbranching=2\nsigma_obs = 0.5  # trailing\n"
        "[train]\noptimizer = \"sgd\"\nlearning_rate = 0.05\nmode = \"anp\"\nsteps = 10\n");
    CHECK(cfg.synth.depth == 4);
    CHECK(cfg.synth.branching == 2);
    CHECK(cfg.synth.sigma_obs == 0.5);
    CHECK(cfg.train.optimizer == OptimizerKind::Sgd);
    CHECK(cfg.train.learning_rate == 0.05);
    CHECK(cfg.train.mode == PredictionMode::Anp);
    CHECK(cfg.train.steps == 10);
    CHECK(cfg.synth.dim == SynthConfig{}.dim);
    CHECK_THROWS_AS(parse_bench_config("nope = 1\n"), InvalidConfig);
    CHECK_THROWS_AS(parse_bench_config("depth = -1\n"), InvalidConfig);
    CHECK_THROWS_AS(parse_bench_config("depth\n"), ParseError);
}

TEST_CASE("tiny comparison run") {
    BenchConfig cfg;
    cfg.synth.depth = 2;
    cfg.synth.branching = 2;
    cfg.synth.samples_per_leaf = 20;
    cfg.synth.dim = 4;
    cfg.train.steps = 60;
    cfg.train.eval_interval = 20;
    cfg.train.batch_size = 8;
    const auto r = run_comparison(cfg, {5});
    REQUIRE(r.runs.size() == 2);
    CHECK(r.runs[0].method == HeadKind::Baseline);
    CHECK(r.runs[1].method == HeadKind::Hierarchical);
    CHECK(r.runs[0].checkpoints.size() == 3);
    CHECK(r.per_seed.size() == 1);
    CHECK(r.report.rows.size() == 3);
    CHECK(r.modes[0].anp_accuracy <= r.modes[0].mlnp_accuracy);
    CHECK(format_report(cfg, r).find("Speedup") != std::string::npos);
    CHECK(report_csv(r).rfind("dataset,accuracy_baseline,accuracy_hierarchy,overall_speedup,initial_speedup\n", 0) == 0);
    CHECK_THROWS_AS(run_comparison(cfg, {}), InvalidConfig);

    const auto again = run_comparison(cfg, {5});
    CHECK(metrics_csv(again.runs) == metrics_csv(r.runs));
}
