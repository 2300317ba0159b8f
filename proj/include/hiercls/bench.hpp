#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hiercls/data.hpp"
#include "hiercls/metrics.hpp"
#include "hiercls/train.hpp"

namespace hiercls {

struct SpeedupRow {
    std::uint64_t step = 0;                     // hierarchical checkpoint
    double accuracy = 0.0;                      // hierarchical validation accuracy there
    std::optional<std::uint64_t> baseline_step; // first baseline step reaching it
    std::optional<double> ratio;                // baseline_step / step
};

/// Step-count speedup of the hierarchical head over the baseline, matched on
/// the shared validation checkpoint grid without interpolation.
struct SpeedupReport {
    double baseline_final_accuracy = 0.0;
    double hierarchical_final_accuracy = 0.0;
    /// Baseline's total steps over the first hierarchical step that reaches
    /// the baseline's final accuracy.
    std::optional<double> overall_speedup;
    /// Ratio at the first hierarchical checkpoint.
    std::optional<double> initial_speedup;
    std::vector<SpeedupRow> rows;
};

/// Throws GridMismatch when the step grids differ or a run lacks
/// validation accuracy.
SpeedupReport compute_speedup(const RunMetrics& hier, const RunMetrics& base);

struct BenchConfig {
    SynthConfig synth;
    TrainConfig train;
    double val_fraction = 0.5;
};

struct ModeComparison {
    std::uint64_t seed = 0;
    double mlnp_accuracy = 0.0;  // final hierarchical model, validation split
    double anp_accuracy = 0.0;
};

struct ComparisonResult {
    std::vector<RunMetrics> runs;  // baseline then hierarchical, per seed
    RunMetrics baseline_mean;
    RunMetrics hierarchical_mean;
    SpeedupReport report;                  // on the seed-averaged curves
    std::vector<SpeedupReport> per_seed;   // one per seed, same order as `seeds`
    std::vector<ModeComparison> modes;
};

/// Generates one synthetic dataset, splits it stratified, standardizes with
/// training statistics and trains both heads with every seed on identical
/// data and architecture. Throws InvalidConfig on an empty seed list.
ComparisonResult run_comparison(const BenchConfig& cfg, const std::vector<std::uint64_t>& seeds);

/// Human-readable summary and per-checkpoint table.
std::string format_report(const BenchConfig& cfg, const ComparisonResult& r);
/// dataset,accuracy_baseline,accuracy_hierarchy,overall_speedup,initial_speedup
/// (empty field when a speedup is undefined).
std::string report_csv(const ComparisonResult& r);
/// step,accuracy,baseline_step,speedup for the seed-averaged curves.
std::string speedup_table_csv(const SpeedupReport& r);

/// `key = value` lines, `#` comments, optional double quotes around values
/// (a subset of TOML). Unknown keys throw InvalidConfig.
BenchConfig parse_bench_config(const std::string& text, BenchConfig base = {});
BenchConfig load_bench_config(const std::string& path, BenchConfig base = {});

}  // namespace hiercls
