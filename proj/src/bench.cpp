#include "hiercls/bench.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "hiercls/error.hpp"
#include "hiercls/numfmt.hpp"

namespace hiercls {

SpeedupReport compute_speedup(const RunMetrics& hier, const RunMetrics& base) {
    const auto& hc = hier.checkpoints;
    const auto& bc = base.checkpoints;
    if (hc.empty() || hc.size() != bc.size()) throw GridMismatch("speedup needs two non-empty curves of equal length");
    for (std::size_t i = 0; i < hc.size(); ++i) {
        if (hc[i].step != bc[i].step) throw GridMismatch("checkpoint steps differ at index " + std::to_string(i));
        if (!hc[i].val_accuracy || !bc[i].val_accuracy) throw GridMismatch("speedup needs validation accuracy");
    }

    auto first_base_step = [&](double target) -> std::optional<std::uint64_t> {
        for (const auto& c : bc) {
            if (*c.val_accuracy >= target) return c.step;
        }
        return std::nullopt;
    };

    SpeedupReport r;
    r.baseline_final_accuracy = *bc.back().val_accuracy;
    r.hierarchical_final_accuracy = *hc.back().val_accuracy;
    for (const auto& c : hc) {
        SpeedupRow row{c.step, *c.val_accuracy, first_base_step(*c.val_accuracy), std::nullopt};
        if (row.baseline_step) row.ratio = static_cast<double>(*row.baseline_step) / static_cast<double>(c.step);
        r.rows.push_back(row);
    }
    r.initial_speedup = r.rows.front().ratio;
    for (const auto& c : hc) {
        if (*c.val_accuracy >= r.baseline_final_accuracy) {
            r.overall_speedup = static_cast<double>(bc.back().step) / static_cast<double>(c.step);
            break;
        }
    }
    return r;
}

ComparisonResult run_comparison(const BenchConfig& cfg, const std::vector<std::uint64_t>& seeds) {
    if (seeds.empty()) throw InvalidConfig("at least one seed is required");
    validate(cfg.train);
    const auto synth = generate_synthetic(cfg.synth);
    const Hierarchy& h = synth.hierarchy;
    auto [train_raw, val_raw] = split_stratified(synth.dataset, cfg.val_fraction, cfg.synth.seed);
    const Dataset train = standardize(std::move(train_raw));
    std::optional<Dataset> val;
    if (val_raw.size() > 0) val = apply_standardization(std::move(val_raw), train.standardization);
    if (!val) throw InvalidConfig("val_fraction leaves no validation samples");

    ComparisonResult r;
    std::vector<RunMetrics> base_runs, hier_runs;
    for (std::uint64_t seed : seeds) {
        auto base = train_epochs(cfg.train, train, val, h, HeadKind::Baseline, seed);
        auto hier = train_epochs(cfg.train, train, val, h, HeadKind::Hierarchical, seed);
        r.modes.push_back({seed, evaluate(h, hier.model, *val, PredictionMode::Mlnp).accuracy,
                           evaluate(h, hier.model, *val, PredictionMode::Anp).accuracy});
        r.per_seed.push_back(compute_speedup(hier.metrics, base.metrics));
        base_runs.push_back(base.metrics);
        hier_runs.push_back(hier.metrics);
        r.runs.push_back(std::move(base.metrics));
        r.runs.push_back(std::move(hier.metrics));
    }
    r.baseline_mean = average_runs(base_runs);
    r.hierarchical_mean = average_runs(hier_runs);
    r.report = compute_speedup(r.hierarchical_mean, r.baseline_mean);
    return r;
}

namespace {

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string opt_fixed(const std::optional<double>& v, int digits, const char* none) {
    return v ? fixed(*v, digits) : std::string(none);
}

}  // namespace

std::string format_report(const BenchConfig& cfg, const ComparisonResult& r) {
    std::ostringstream out;
    const auto& s = cfg.synth;
    out << "Synthetic hierarchy: depth " << s.depth << ", branching " << s.branching << ", " << s.samples_per_leaf
        << " samples/leaf, d = " << s.dim << "\n";
    out << "Training: " << to_string(cfg.train.optimizer) << " lr " << format_double(cfg.train.learning_rate)
        << ", batch " << cfg.train.batch_size << ", " << cfg.train.steps << " steps, eval every "
        << cfg.train.eval_interval << ", hidden " << cfg.train.hidden << ", mode " << to_string(cfg.train.mode)
        << ", seeds " << r.modes.size() << "\n\n";

    const auto& rep = r.report;
    out << "Accuracy (%)   baseline " << fixed(100.0 * rep.baseline_final_accuracy, 2) << "   w/hierarchy "
        << fixed(100.0 * rep.hierarchical_final_accuracy, 2) << "\n";
    out << "Speedup        overall " << opt_fixed(rep.overall_speedup, 2, "n/a") << "   initial "
        << opt_fixed(rep.initial_speedup, 2, "n/a") << "\n\n";

    out << "  step  w/hierarchy  baseline step  speedup\n";
    for (const auto& row : rep.rows) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%6llu  %10.2f%%  %13s  %7s\n", static_cast<unsigned long long>(row.step),
                      100.0 * row.accuracy,
                      row.baseline_step ? std::to_string(*row.baseline_step).c_str() : "never",
                      opt_fixed(row.ratio, 2, "n/a").c_str());
        out << buf;
    }

    out << "\nPer seed:\n";
    for (std::size_t i = 0; i < r.modes.size(); ++i) {
        const auto& ps = r.per_seed[i];
        out << "  seed " << r.modes[i].seed << ": baseline " << fixed(100.0 * ps.baseline_final_accuracy, 2)
            << "%, w/hierarchy " << fixed(100.0 * ps.hierarchical_final_accuracy, 2) << "% (ANP "
            << fixed(100.0 * r.modes[i].anp_accuracy, 2) << "%), overall " << opt_fixed(ps.overall_speedup, 2, "n/a")
            << ", initial " << opt_fixed(ps.initial_speedup, 2, "n/a") << "\n";
    }
    return out.str();
}

std::string report_csv(const ComparisonResult& r) {
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    std::ostringstream out;
    out << "dataset,accuracy_baseline,accuracy_hierarchy,overall_speedup,initial_speedup\n";
    out << "synthetic," << format_double(r.report.baseline_final_accuracy) << ','
        << format_double(r.report.hierarchical_final_accuracy) << ',' << opt(r.report.overall_speedup) << ','
        << opt(r.report.initial_speedup) << '\n';
    return out.str();
}

std::string speedup_table_csv(const SpeedupReport& r) {
    std::ostringstream out;
    out << "step,accuracy,baseline_step,speedup\n";
    for (const auto& row : r.rows) {
        out << row.step << ',' << format_double(row.accuracy) << ','
            << (row.baseline_step ? std::to_string(*row.baseline_step) : std::string()) << ','
            << (row.ratio ? format_double(*row.ratio) : std::string()) << '\n';
    }
    return out.str();
}

namespace {

std::string trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return std::string(s);
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
        throw InvalidConfig("config key '" + key + "' expects a non-negative integer, got '" + v + "'");
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    const auto d = parse_double(v);
    if (!d) throw InvalidConfig("config key '" + key + "' expects a number, got '" + v + "'");
    return *d;
}

}  // namespace

BenchConfig parse_bench_config(const std::string& text, BenchConfig cfg) {
    using Setter = std::function<void(const std::string&, const std::string&)>;
    auto size = [](std::size_t& field) -> Setter {
        return [&field](const std::string& k, const std::string& v) { field = static_cast<std::size_t>(to_u64(k, v)); };
    };
    auto u64 = [](std::uint64_t& field) -> Setter {
        return [&field](const std::string& k, const std::string& v) { field = to_u64(k, v); };
    };
    auto real = [](double& field) -> Setter {
        return [&field](const std::string& k, const std::string& v) { field = to_double(k, v); };
    };
    const std::map<std::string, Setter> setters = {
        {"depth", size(cfg.synth.depth)},
        {"branching", size(cfg.synth.branching)},
        {"samples_per_leaf", size(cfg.synth.samples_per_leaf)},
        {"dim", size(cfg.synth.dim)},
        {"sigma0", real(cfg.synth.sigma0)},
        {"level_decay", real(cfg.synth.level_decay)},
        {"sigma_obs", real(cfg.synth.sigma_obs)},
        {"data_seed", u64(cfg.synth.seed)},
        {"val_fraction", real(cfg.val_fraction)},
        {"hidden", size(cfg.train.hidden)},
        {"optimizer", [&](const std::string&, const std::string& v) { cfg.train.optimizer = parse_optimizer_kind(v); }},
        {"learning_rate", real(cfg.train.learning_rate)},
        {"batch_size", size(cfg.train.batch_size)},
        {"steps", u64(cfg.train.steps)},
        {"eval_interval", u64(cfg.train.eval_interval)},
        {"mode", [&](const std::string&, const std::string& v) { cfg.train.mode = parse_prediction_mode(v); }},
    };

    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') continue;  // TOML table headers carry no meaning here
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, "expected key = value");
        const std::string key = trim(std::string_view(t).substr(0, eq));
        std::string value = trim(std::string_view(t).substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        const auto it = setters.find(key);
        if (it == setters.end()) throw InvalidConfig("line " + std::to_string(line_no) + ": unknown config key '" + key + "'");
        it->second(key, value);
    }
    return cfg;
}

BenchConfig load_bench_config(const std::string& path, BenchConfig base) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_bench_config(buf.str(), std::move(base));
}

}  // namespace hiercls
