#pragma once

#include <cstdint>
#include <optional>

#include "hiercls/classifier.hpp"
#include "hiercls/data.hpp"
#include "hiercls/metrics.hpp"

namespace hiercls {

struct TrainConfig {
    std::size_t hidden = 0;  // 0 trains a linear model
    OptimizerKind optimizer = OptimizerKind::Adam;
    double learning_rate = 0.001;
    std::size_t batch_size = 64;
    std::uint64_t steps = 2000;
    std::uint64_t eval_interval = 100;
    PredictionMode mode = PredictionMode::Mlnp;  // used for accuracy of hierarchical heads
};

/// Throws InvalidConfig.
void validate(const TrainConfig& cfg);

struct TrainResult {
    TrainedModel model;
    RunMetrics metrics;
};

/// Minibatch training on standardized data. Per-sample losses are averaged
/// over the batch; batches walk a seeded permutation of the training set
/// that is redrawn whenever it runs out. Checkpoints are taken every
/// eval_interval steps and after the last step. Bitwise deterministic for a
/// given seed. Throws EmptyDataset, LabelNotInHierarchy, InvalidConfig.
TrainResult train_epochs(const TrainConfig& cfg, const Dataset& train, const std::optional<Dataset>& val,
                         const Hierarchy& h, HeadKind head, std::uint64_t seed);

/// Batch-mean loss and its parameter gradient for the samples in `rows`.
/// Exposed for gradient checking.
struct BatchObjective {
    double loss = 0.0;
    Gradients gradients;
};
BatchObjective batch_objective(const Hierarchy& h, HeadKind head, const ModelParams& p, const Dataset& ds,
                               std::span<const std::size_t> rows);

}  // namespace hiercls
