#include "hiercls/train.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "hiercls/encoding.hpp"
#include "hiercls/error.hpp"
#include "hiercls/loss.hpp"

namespace hiercls {

void validate(const TrainConfig& cfg) {
    if (cfg.batch_size == 0) throw InvalidConfig("batch_size must be positive");
    if (cfg.steps == 0) throw InvalidConfig("steps must be positive");
    if (cfg.eval_interval == 0) throw InvalidConfig("eval_interval must be positive");
    if (!(cfg.learning_rate > 0.0)) throw InvalidConfig("learning_rate must be positive");
}

namespace {

// Label lookups shared by every step of one run.
class Objective {
public:
    Objective(const Hierarchy& h, HeadKind head) : head_(head), table_(h), slot_(h.size(), 0) {
        for (std::size_t c = 0; c < h.labeled().size(); ++c) slot_[h.labeled()[c].index] = c;
    }

    BatchObjective evaluate(const ModelParams& p, const Dataset& ds, std::span<const std::size_t> rows) const {
        Eigen::MatrixXd inputs(ds.features.cols(), static_cast<Eigen::Index>(rows.size()));
        for (std::size_t j = 0; j < rows.size(); ++j)
            inputs.col(static_cast<Eigen::Index>(j)) = ds.features.row(static_cast<Eigen::Index>(rows[j])).transpose();
        const auto fp = forward_batch(p, inputs);

        const double scale = 1.0 / static_cast<double>(rows.size());
        Eigen::MatrixXd grad_out(fp.output.rows(), fp.output.cols());
        double loss = 0.0;
        for (std::size_t j = 0; j < rows.size(); ++j) {
            const auto col = fp.output.col(static_cast<Eigen::Index>(j));
            const std::span<const double> out{col.data(), static_cast<std::size_t>(col.size())};
            const NodeId y = ds.labels[rows[j]];
            const LossValue lv = head_ == HeadKind::Hierarchical
                                     ? hierarchical_loss(table_.encoding(y), table_.mask(y), out)
                                     : onehot_loss(slot_[y.index], out);
            loss += lv.value;
            for (std::size_t k = 0; k < lv.gradient.size(); ++k)
                grad_out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = scale * lv.gradient[k];
        }
        return {loss * scale, backward_batch(p, fp, grad_out)};
    }

private:
    HeadKind head_;
    EncodingTable table_;
    std::vector<std::size_t> slot_;
};

void check_labels(const Hierarchy& h, const Dataset& ds) {
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const NodeId y = ds.labels[i];
        if (y.index >= h.size() || !h.is_labeled(y))
            throw LabelNotInHierarchy(i + 1, y.index < h.size() ? h.name(y) : std::to_string(y.index));
    }
}

}  // namespace

BatchObjective batch_objective(const Hierarchy& h, HeadKind head, const ModelParams& p, const Dataset& ds,
                               std::span<const std::size_t> rows) {
    if (rows.empty()) throw EmptyDataset();
    check_labels(h, ds);
    return Objective(h, head).evaluate(p, ds, rows);
}

TrainResult train_epochs(const TrainConfig& cfg, const Dataset& train, const std::optional<Dataset>& val,
                         const Hierarchy& h, HeadKind head, std::uint64_t seed) {
    validate(cfg);
    if (train.size() == 0) throw EmptyDataset();
    if (val && val->size() == 0) throw EmptyDataset();
    check_labels(h, train);
    if (val) {
        check_labels(h, *val);
        if (val->dim() != train.dim()) throw ShapeMismatch("training and validation feature dimensions differ");
    }

    const Architecture arch{train.dim(), cfg.hidden, head_width(h, head)};
    TrainResult result;
    result.model.head = head;
    result.model.params = init_params(arch, seed);
    result.model.standardization = train.standardization;
    result.metrics = {head, cfg.mode, seed, {}};

    OptimizerState opt = make_optimizer(cfg.optimizer, cfg.learning_rate, result.model.params);
    const Objective objective(h, head);

    std::mt19937_64 shuffle_rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::size_t cursor = order.size();
    std::vector<std::size_t> batch(std::min(cfg.batch_size, train.size()));

    for (std::uint64_t t = 1; t <= cfg.steps; ++t) {
        for (auto& row : batch) {
            if (cursor == order.size()) {
                std::shuffle(order.begin(), order.end(), shuffle_rng);
                cursor = 0;
            }
            row = order[cursor++];
        }
        const auto obj = objective.evaluate(result.model.params, train, batch);
        step(opt, result.model.params, obj.gradients);

        if (t % cfg.eval_interval == 0 || t == cfg.steps) {
            const auto tr = evaluate(h, result.model, train, cfg.mode);
            Checkpoint cp{t, tr.accuracy, tr.loss, std::nullopt, std::nullopt};
            if (val) {
                const auto ev = evaluate(h, result.model, *val, cfg.mode);
                cp.val_accuracy = ev.accuracy;
                cp.val_loss = ev.loss;
            }
            result.metrics.checkpoints.push_back(cp);
        }
    }
    return result;
}

}  // namespace hiercls
