#include "hiercls/model.hpp"

#include <cmath>
#include <random>
#include <string>

#include "hiercls/error.hpp"
#include "hiercls/loss.hpp"

namespace hiercls {

HeadKind parse_head_kind(std::string_view text) {
    if (text == "hierarchical") return HeadKind::Hierarchical;
    if (text == "baseline") return HeadKind::Baseline;
    throw InvalidConfig("unknown head '" + std::string(text) + "' (expected hierarchical or baseline)");
}

std::string_view to_string(HeadKind head) { return head == HeadKind::Hierarchical ? "hierarchical" : "baseline"; }

OptimizerKind parse_optimizer_kind(std::string_view text) {
    if (text == "adam") return OptimizerKind::Adam;
    if (text == "sgd") return OptimizerKind::Sgd;
    throw InvalidConfig("unknown optimizer '" + std::string(text) + "' (expected adam or sgd)");
}

std::string_view to_string(OptimizerKind kind) { return kind == OptimizerKind::Adam ? "adam" : "sgd"; }

std::size_t ModelParams::parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
    return n;
}

namespace {

std::vector<std::pair<std::size_t, std::size_t>> layer_shapes(const Architecture& a) {
    if (a.hidden == 0) return {{a.output_dim, a.input_dim}};
    return {{a.hidden, a.input_dim}, {a.output_dim, a.hidden}};
}

void check_architecture(const Architecture& a) {
    if (a.input_dim == 0 || a.output_dim == 0) throw ShapeMismatch("input and output widths must be positive");
}

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

void check_same_shape(const ModelParams& p, const Gradients& g, const char* what) {
    bool ok = g.size() == p.layers.size();
    for (std::size_t i = 0; ok && i < g.size(); ++i) {
        ok = g[i].weight.rows() == p.layers[i].weight.rows() && g[i].weight.cols() == p.layers[i].weight.cols() &&
             g[i].bias.size() == p.layers[i].bias.size();
    }
    if (!ok) throw ShapeMismatch(std::string(what) + " shape does not match model parameters");
}

Gradients zeros_like(const ModelParams& p) {
    Gradients g;
    for (const auto& l : p.layers) {
        g.push_back({Eigen::MatrixXd::Zero(l.weight.rows(), l.weight.cols()), Eigen::VectorXd::Zero(l.bias.size())});
    }
    return g;
}

}  // namespace

ModelParams zero_params(const Architecture& arch) {
    check_architecture(arch);
    ModelParams p{arch, {}};
    for (auto [out, in] : layer_shapes(arch)) {
        const auto rows = static_cast<Eigen::Index>(out);
        p.layers.push_back({Eigen::MatrixXd::Zero(rows, static_cast<Eigen::Index>(in)), Eigen::VectorXd::Zero(rows)});
    }
    return p;
}

ModelParams init_params(const Architecture& arch, std::uint64_t seed) {
    ModelParams p = zero_params(arch);
    std::mt19937_64 rng(seed);
    for (auto& l : p.layers) {
        const double limit = std::sqrt(6.0 / static_cast<double>(l.weight.rows() + l.weight.cols()));
        std::uniform_real_distribution<double> uniform(-limit, limit);
        // Column-major fill order is part of the seeded contract.
        for (Eigen::Index j = 0; j < l.weight.cols(); ++j)
            for (Eigen::Index i = 0; i < l.weight.rows(); ++i) l.weight(i, j) = uniform(rng);
    }
    return p;
}

void check_shapes(const ModelParams& p) {
    const auto shapes = layer_shapes(p.arch);
    if (shapes.size() != p.layers.size()) throw ShapeMismatch("layer count does not match architecture");
    for (std::size_t i = 0; i < shapes.size(); ++i) {
        const auto& l = p.layers[i];
        if (static_cast<std::size_t>(l.weight.rows()) != shapes[i].first ||
            static_cast<std::size_t>(l.weight.cols()) != shapes[i].second ||
            static_cast<std::size_t>(l.bias.size()) != shapes[i].first)
            throw ShapeMismatch("layer " + std::to_string(i) + " shape does not match architecture");
    }
}

ForwardPass forward_batch(const ModelParams& p, const Eigen::MatrixXd& inputs) {
    if (static_cast<std::size_t>(inputs.rows()) != p.arch.input_dim)
        throw ShapeMismatch("input has " + std::to_string(inputs.rows()) + " features, model expects " +
                            std::to_string(p.arch.input_dim));
    ForwardPass fp;
    fp.input = inputs;
    const Eigen::MatrixXd* last = &fp.input;
    std::size_t li = 0;
    if (p.arch.hidden > 0) {
        const auto& l = p.layers[li++];
        fp.hidden = ((l.weight * inputs).colwise() + l.bias).array().tanh().matrix();
        last = &fp.hidden;
    }
    const auto& out = p.layers[li];
    Eigen::MatrixXd z = (out.weight * *last).colwise() + out.bias;
    fp.output.resize(z.rows(), z.cols());
    fp.clamped.resize(z.rows(), z.cols());
    for (Eigen::Index j = 0; j < z.cols(); ++j) {
        for (Eigen::Index i = 0; i < z.rows(); ++i) {
            double s = sigmoid(z(i, j));
            bool c = false;
            if (s < kOutputEps) {
                s = kOutputEps;
                c = true;
            } else if (s > 1.0 - kOutputEps) {
                s = 1.0 - kOutputEps;
                c = true;
            }
            fp.output(i, j) = s;
            fp.clamped(i, j) = c;
        }
    }
    return fp;
}

std::vector<double> forward(const ModelParams& p, std::span<const double> x) {
    const Eigen::Map<const Eigen::VectorXd> col(x.data(), static_cast<Eigen::Index>(x.size()));
    const auto fp = forward_batch(p, col);
    return {fp.output.data(), fp.output.data() + fp.output.size()};
}

Gradients backward_batch(const ModelParams& p, const ForwardPass& fp, const Eigen::MatrixXd& grad_out) {
    if (grad_out.rows() != fp.output.rows() || grad_out.cols() != fp.output.cols())
        throw ShapeMismatch("output gradient is " + std::to_string(grad_out.rows()) + "x" +
                            std::to_string(grad_out.cols()) + ", outputs are " + std::to_string(fp.output.rows()) +
                            "x" + std::to_string(fp.output.cols()));
    // d/dz of sigmoid, zero where the output was clamped.
    Eigen::MatrixXd dz = grad_out.array() * fp.output.array() * (1.0 - fp.output.array());
    dz = fp.clamped.select(Eigen::MatrixXd::Zero(dz.rows(), dz.cols()), dz);

    Gradients g(p.layers.size());
    if (p.arch.hidden == 0) {
        g[0].weight = dz * fp.input.transpose();
        g[0].bias = dz.rowwise().sum();
        return g;
    }
    g[1].weight = dz * fp.hidden.transpose();
    g[1].bias = dz.rowwise().sum();
    const Eigen::MatrixXd dh = (p.layers[1].weight.transpose() * dz).array() * (1.0 - fp.hidden.array().square());
    g[0].weight = dh * fp.input.transpose();
    g[0].bias = dh.rowwise().sum();
    return g;
}

Gradients backward(const ModelParams& p, std::span<const double> x, std::span<const double> grad_out) {
    if (grad_out.size() != p.arch.output_dim)
        throw ShapeMismatch("output gradient has " + std::to_string(grad_out.size()) + " entries, model has " +
                            std::to_string(p.arch.output_dim) + " outputs");
    const Eigen::Map<const Eigen::VectorXd> col(x.data(), static_cast<Eigen::Index>(x.size()));
    const Eigen::Map<const Eigen::VectorXd> go(grad_out.data(), static_cast<Eigen::Index>(grad_out.size()));
    return backward_batch(p, forward_batch(p, col), go);
}

OptimizerState make_optimizer(OptimizerKind kind, double learning_rate, const ModelParams& p) {
    if (!(learning_rate > 0.0)) throw InvalidConfig("learning rate must be positive");
    OptimizerState opt;
    opt.kind = kind;
    opt.learning_rate = learning_rate;
    if (kind == OptimizerKind::Adam) {
        opt.first_moment = zeros_like(p);
        opt.second_moment = zeros_like(p);
    }
    return opt;
}

void step(OptimizerState& opt, ModelParams& p, const Gradients& g) {
    check_same_shape(p, g, "gradient");
    ++opt.step;
    if (opt.kind == OptimizerKind::Sgd) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            p.layers[i].weight -= opt.learning_rate * g[i].weight;
            p.layers[i].bias -= opt.learning_rate * g[i].bias;
        }
        return;
    }
    check_same_shape(p, opt.first_moment, "first moment");
    check_same_shape(p, opt.second_moment, "second moment");
    const double t = static_cast<double>(opt.step);
    const double c1 = 1.0 - std::pow(opt.beta1, t);
    const double c2 = 1.0 - std::pow(opt.beta2, t);
    auto update = [&](auto& param, auto& m, auto& v, const auto& grad) {
        m = opt.beta1 * m + (1.0 - opt.beta1) * grad;
        v = opt.beta2 * v + (1.0 - opt.beta2) * grad.cwiseProduct(grad);
        param.array() -= opt.learning_rate * (m.array() / c1) / ((v.array() / c2).sqrt() + opt.epsilon);
    };
    for (std::size_t i = 0; i < g.size(); ++i) {
        update(p.layers[i].weight, opt.first_moment[i].weight, opt.second_moment[i].weight, g[i].weight);
        update(p.layers[i].bias, opt.first_moment[i].bias, opt.second_moment[i].bias, g[i].bias);
    }
}

}  // namespace hiercls
