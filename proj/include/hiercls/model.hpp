#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace hiercls {

/// Hierarchical heads emit one conditional score per hierarchy node; the
/// baseline head emits one score per labeled class.
enum class HeadKind { Hierarchical, Baseline };

HeadKind parse_head_kind(std::string_view text);
std::string_view to_string(HeadKind head);

/// hidden == 0 is a linear model, otherwise one tanh hidden layer.
struct Architecture {
    std::size_t input_dim = 0;
    std::size_t hidden = 0;
    std::size_t output_dim = 0;

    friend bool operator==(const Architecture&, const Architecture&) = default;
};

struct Layer {
    Eigen::MatrixXd weight;  // out x in
    Eigen::VectorXd bias;
};

/// Parameters of a sigmoid-output MLP. Layer gradients and optimizer
/// moments share this shape.
struct ModelParams {
    Architecture arch;
    std::vector<Layer> layers;

    std::size_t parameter_count() const;
};

using Gradients = std::vector<Layer>;

/// Glorot-uniform weights, zero biases. Deterministic given seed.
ModelParams init_params(const Architecture& arch, std::uint64_t seed);
ModelParams zero_params(const Architecture& arch);
/// Throws ShapeMismatch.
void check_shapes(const ModelParams& p);

/// Intermediate values of a batched forward pass, one sample per column.
struct ForwardPass {
    Eigen::MatrixXd input;   // d x n
    Eigen::MatrixXd hidden;  // H x n, empty for linear models
    Eigen::MatrixXd output;  // k x n, clamped sigmoid outputs
    Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> clamped;  // k x n
};

ForwardPass forward_batch(const ModelParams& p, const Eigen::MatrixXd& inputs);
/// Clamped sigmoid outputs for one sample. Throws ShapeMismatch.
std::vector<double> forward(const ModelParams& p, std::span<const double> x);

/// Parameter gradients summed over the batch columns of grad_out.
/// Clamped output components pass no gradient. Throws ShapeMismatch.
Gradients backward_batch(const ModelParams& p, const ForwardPass& fp, const Eigen::MatrixXd& grad_out);
Gradients backward(const ModelParams& p, std::span<const double> x, std::span<const double> grad_out);

enum class OptimizerKind { Sgd, Adam };

OptimizerKind parse_optimizer_kind(std::string_view text);
std::string_view to_string(OptimizerKind kind);

struct OptimizerState {
    OptimizerKind kind = OptimizerKind::Adam;
    double learning_rate = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::uint64_t step = 0;
    Gradients first_moment;   // Adam only
    Gradients second_moment;  // Adam only
};

OptimizerState make_optimizer(OptimizerKind kind, double learning_rate, const ModelParams& p);
/// SGD: p -= lr g. Adam: bias-corrected moment update. Throws ShapeMismatch.
void step(OptimizerState& opt, ModelParams& p, const Gradients& g);

}  // namespace hiercls
