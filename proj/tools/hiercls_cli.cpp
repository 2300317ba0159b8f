// hiercls: command line driver for the hierarchical classification library.
//
// Exit codes: 0 success, 1 usage error, 2 data or validation error.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hiercls/hiercls.hpp"
#include "hiercls/numfmt.hpp"

namespace fs = std::filesystem;
using namespace hiercls;

namespace {

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
}

// Emits to a file when a path is given, otherwise to stdout.
void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        write_text(path, text);
    }
}

std::string vector_csv(const Hierarchy& h, const std::vector<std::uint8_t>& values) {
    std::string out = "name,value\n";
    for (std::size_t i = 0; i < h.size(); ++i) out += h.name(NodeId{i}) + "," + std::to_string(values[i]) + "\n";
    return out;
}

// Training flags that override config file values when given.
struct TrainOverrides {
    std::optional<std::uint64_t> steps;
    std::optional<std::uint64_t> eval_interval;
    std::optional<std::size_t> batch_size;
    std::optional<std::size_t> hidden;
    std::optional<double> learning_rate;
    std::optional<std::string> optimizer;
    std::optional<std::string> mode;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--steps", steps, "Optimization steps");
        cmd->add_option("--eval-interval", eval_interval, "Steps between checkpoints");
        cmd->add_option("--batch-size", batch_size, "Minibatch size");
        cmd->add_option("--hidden", hidden, "Hidden layer width (0 = linear)");
        cmd->add_option("--lr", learning_rate, "Learning rate");
        cmd->add_option("--optimizer", optimizer, "adam or sgd")->check(CLI::IsMember({"adam", "sgd"}));
        cmd->add_option("--mode", mode, "Prediction mode for accuracy: mlnp or anp")->check(CLI::IsMember({"mlnp", "anp"}));
    }

    void apply(TrainConfig& t) const {
        if (steps) t.steps = *steps;
        if (eval_interval) t.eval_interval = *eval_interval;
        if (batch_size) t.batch_size = *batch_size;
        if (hidden) t.hidden = *hidden;
        if (learning_rate) t.learning_rate = *learning_rate;
        if (optimizer) t.optimizer = parse_optimizer_kind(*optimizer);
        if (mode) t.mode = parse_prediction_mode(*mode);
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hierarchical classification over class DAGs"};
    app.require_subcommand(1, 1);

    std::string hierarchy_path, label, out_path, config_path, data_path, val_path, model_path, metrics_path;
    std::string mode_name = "mlnp", head_name = "hierarchical";
    std::uint64_t seed = 0;
    std::size_t seed_count = 1;
    TrainOverrides overrides;

    auto* validate_cmd = app.add_subcommand("validate", "Check a hierarchy file and print its shape");
    validate_cmd->add_option("--hierarchy", hierarchy_path, "Hierarchy TSV file")->required();

    auto* closure_cmd = app.add_subcommand("closure", "Print the transitive closure as descendant<TAB>ancestor");
    closure_cmd->add_option("--hierarchy", hierarchy_path, "Hierarchy TSV file")->required();
    closure_cmd->add_option("--out", out_path, "Output file (default stdout)");

    auto* encode_cmd = app.add_subcommand("encode", "Print the hierarchical encoding of a label as CSV");
    auto* mask_cmd = app.add_subcommand("mask", "Print the loss mask of a label as CSV");
    for (auto* cmd : {encode_cmd, mask_cmd}) {
        cmd->add_option("--hierarchy", hierarchy_path, "Hierarchy TSV file")->required();
        cmd->add_option("--label", label, "Node name")->required();
        cmd->add_option("--out", out_path, "Output file (default stdout)");
    }

    SynthConfig synth_flags;
    double val_fraction = 0.5;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic hierarchy and train/val datasets");
    gen_cmd->add_option("--config", config_path, "Config file (key = value)");
    gen_cmd->add_option("--depth", synth_flags.depth, "Tree depth");
    gen_cmd->add_option("--branching", synth_flags.branching, "Children per inner node");
    gen_cmd->add_option("--samples-per-leaf", synth_flags.samples_per_leaf, "Samples per leaf class");
    gen_cmd->add_option("--dim", synth_flags.dim, "Feature dimension");
    gen_cmd->add_option("--sigma0", synth_flags.sigma0, "Displacement scale below the root");
    gen_cmd->add_option("--sigma-obs", synth_flags.sigma_obs, "Observation noise");
    gen_cmd->add_option("--val-fraction", val_fraction, "Validation fraction per class");
    gen_cmd->add_option("--seed", seed, "Data seed");
    gen_cmd->add_option("--out", out_path, "Output directory")->required();

    auto* train_cmd = app.add_subcommand("train", "Train a model and write it with its metrics");
    train_cmd->add_option("--hierarchy", hierarchy_path, "Hierarchy TSV file")->required();
    train_cmd->add_option("--data", data_path, "Training CSV")->required();
    train_cmd->add_option("--val", val_path, "Validation CSV");
    train_cmd->add_option("--head", head_name, "hierarchical or baseline")
        ->check(CLI::IsMember({"hierarchical", "baseline"}));
    train_cmd->add_option("--config", config_path, "Config file (key = value)");
    train_cmd->add_option("--seed", seed, "Initialization and shuffling seed");
    train_cmd->add_option("--out", model_path, "Model file to write")->required();
    train_cmd->add_option("--metrics", metrics_path, "Metrics CSV to write");
    overrides.add_to(train_cmd);

    auto* predict_cmd = app.add_subcommand("predict", "Predict one class per sample");
    auto* eval_cmd = app.add_subcommand("eval", "Report accuracy and loss on a labeled dataset");
    for (auto* cmd : {predict_cmd, eval_cmd}) {
        cmd->add_option("--model", model_path, "Model file")->required();
        cmd->add_option("--data", data_path, "Dataset CSV")->required();
        cmd->add_option("--mode", mode_name, "mlnp or anp")->check(CLI::IsMember({"mlnp", "anp"}));
    }
    predict_cmd->add_option("--out", out_path, "Output CSV (default stdout)");

    auto* bench_cmd = app.add_subcommand("bench", "Compare the hierarchical head against the one-hot baseline");
    bench_cmd->add_option("--config", config_path, "Config file (key = value)");
    bench_cmd->add_option("--seeds", seed_count, "Number of seeds")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--seed", seed, "First seed; runs use seed, seed+1, ...");
    bench_cmd->add_option("--out", out_path, "Output directory")->required();
    overrides.add_to(bench_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kUsageError;
    }

    try {
        if (*validate_cmd) {
            const auto h = load_hierarchy(hierarchy_path);
            std::cout << "nodes " << h.size() << "\nedges " << h.edge_count() << "\nroots " << h.roots().size()
                      << "\nleaves " << h.leaves().size() << "\nlabeled " << h.labeled().size() << "\n";
        } else if (*closure_cmd) {
            const auto h = load_hierarchy(hierarchy_path);
            std::string text;
            for (std::size_t d = 0; d < h.size(); ++d)
                for (std::size_t a = 0; a < h.size(); ++a)
                    if (h.is_ancestor(NodeId{d}, NodeId{a})) text += h.name(NodeId{d}) + '\t' + h.name(NodeId{a}) + '\n';
            emit(out_path, text);
        } else if (*encode_cmd) {
            const auto h = load_hierarchy(hierarchy_path);
            emit(out_path, vector_csv(h, encode_label(h, h.id(label)).values));
        } else if (*mask_cmd) {
            const auto h = load_hierarchy(hierarchy_path);
            emit(out_path, vector_csv(h, loss_mask(h, h.id(label)).values));
        } else if (*gen_cmd) {
            BenchConfig cfg;
            if (!config_path.empty()) cfg = load_bench_config(config_path);
            // Flags given explicitly win over the config file.
            auto given = [&](const char* flag) { return gen_cmd->count(flag) > 0; };
            if (given("--depth")) cfg.synth.depth = synth_flags.depth;
            if (given("--branching")) cfg.synth.branching = synth_flags.branching;
            if (given("--samples-per-leaf")) cfg.synth.samples_per_leaf = synth_flags.samples_per_leaf;
            if (given("--dim")) cfg.synth.dim = synth_flags.dim;
            if (given("--sigma0")) cfg.synth.sigma0 = synth_flags.sigma0;
            if (given("--sigma-obs")) cfg.synth.sigma_obs = synth_flags.sigma_obs;
            if (given("--val-fraction")) cfg.val_fraction = val_fraction;
            if (given("--seed")) cfg.synth.seed = seed;

            const auto synth = generate_synthetic(cfg.synth);
            const auto [train, val] = split_stratified(synth.dataset, cfg.val_fraction, cfg.synth.seed);
            fs::create_directories(out_path);
            save_hierarchy(synth.hierarchy, (fs::path(out_path) / "hierarchy.tsv").string());
            save_dataset((fs::path(out_path) / "train.csv").string(), train, synth.hierarchy);
            save_dataset((fs::path(out_path) / "val.csv").string(), val, synth.hierarchy);
            std::cerr << "wrote " << synth.hierarchy.size() << " nodes, " << train.size() << " train and "
                      << val.size() << " val samples to " << out_path << "\n";
        } else if (*train_cmd) {
            BenchConfig cfg;
            if (!config_path.empty()) cfg = load_bench_config(config_path);
            overrides.apply(cfg.train);
            const auto h = load_hierarchy(hierarchy_path);
            const Dataset train = standardize(load_dataset(data_path, h));
            std::optional<Dataset> val;
            if (!val_path.empty()) val = apply_standardization(load_dataset(val_path, h), train.standardization);
            const auto result = train_epochs(cfg.train, train, val, h, parse_head_kind(head_name), seed);
            save_model(model_path, h, result.model);
            if (!metrics_path.empty()) write_text(metrics_path, metrics_csv({result.metrics}));
            const auto& last = result.metrics.checkpoints.back();
            std::cerr << "step " << last.step << ": train accuracy " << last.train_accuracy;
            if (last.val_accuracy) std::cerr << ", val accuracy " << *last.val_accuracy;
            std::cerr << "\n";
        } else if (*predict_cmd) {
            const auto loaded = load_model(model_path);
            const Dataset ds = apply_standardization(load_dataset(data_path, loaded.hierarchy), loaded.model.standardization);
            const auto preds = classify_all(loaded.hierarchy, loaded.model, ds, parse_prediction_mode(mode_name));
            std::string text = "sample_id,predicted_name,score\n";
            for (std::size_t i = 0; i < preds.size(); ++i)
                text += std::to_string(i) + "," + loaded.hierarchy.name(preds[i].node) + "," + format_double(preds[i].score) + "\n";
            emit(out_path, text);
        } else if (*eval_cmd) {
            const auto loaded = load_model(model_path);
            const Dataset ds = apply_standardization(load_dataset(data_path, loaded.hierarchy), loaded.model.standardization);
            const auto ev = evaluate(loaded.hierarchy, loaded.model, ds, parse_prediction_mode(mode_name));
            std::cout << "samples " << ds.size() << "\naccuracy " << format_double(ev.accuracy) << "\nloss "
                      << format_double(ev.loss) << "\n";
        } else if (*bench_cmd) {
            BenchConfig cfg;
            if (!config_path.empty()) cfg = load_bench_config(config_path);
            overrides.apply(cfg.train);
            std::vector<std::uint64_t> seeds;
            for (std::size_t i = 0; i < seed_count; ++i) seeds.push_back(seed + i);

            const auto t0 = std::chrono::steady_clock::now();
            const auto result = run_comparison(cfg, seeds);
            const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t0;

            fs::create_directories(out_path);
            const fs::path dir(out_path);
            write_text((dir / "metrics.csv").string(), metrics_csv(result.runs));
            const std::string report = format_report(cfg, result);
            write_text((dir / "report.txt").string(), report);
            write_text((dir / "report.csv").string(), report_csv(result));
            write_text((dir / "speedup_table.csv").string(), speedup_table_csv(result.report));
            std::cout << report;
            std::cerr << "wall time " << elapsed.count() << " s\n";
        }
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDataError;
    }
    return 0;
}
