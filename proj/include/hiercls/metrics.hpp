#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hiercls/inference.hpp"
#include "hiercls/model.hpp"

namespace hiercls {

struct Checkpoint {
    std::uint64_t step = 0;
    double train_accuracy = 0.0;
    double train_loss = 0.0;
    std::optional<double> val_accuracy;
    std::optional<double> val_loss;

    friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

/// Accuracy-over-steps curve of one training run.
struct RunMetrics {
    HeadKind method = HeadKind::Hierarchical;
    PredictionMode mode = PredictionMode::Mlnp;
    std::uint64_t seed = 0;
    std::vector<Checkpoint> checkpoints;  // strictly increasing steps

    friend bool operator==(const RunMetrics&, const RunMetrics&) = default;
};

/// CSV header: method,seed,step,split,accuracy,loss. One row per checkpoint
/// and split; numbers are written in shortest round-trip form.
void write_metrics_header(std::ostream& out);
void write_metrics_rows(std::ostream& out, const RunMetrics& run);
std::string metrics_csv(const std::vector<RunMetrics>& runs);
/// Groups rows by (method, seed) in first-appearance order. The prediction
/// mode is not part of the file and comes back as `mode`.
std::vector<RunMetrics> parse_metrics_csv(const std::string& text, PredictionMode mode = PredictionMode::Mlnp);

/// Pointwise mean over runs that share one checkpoint grid. Throws GridMismatch.
RunMetrics average_runs(const std::vector<RunMetrics>& runs);

}  // namespace hiercls
