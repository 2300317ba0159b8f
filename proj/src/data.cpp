#include "hiercls/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "hiercls/error.hpp"
#include "hiercls/numfmt.hpp"

namespace hiercls {

void validate(const SynthConfig& cfg) {
    if (cfg.depth < 1) throw InvalidConfig("depth must be >= 1");
    if (cfg.branching < 2) throw InvalidConfig("branching must be >= 2");
    if (cfg.dim < 1) throw InvalidConfig("dim must be >= 1");
    if (cfg.samples_per_leaf < 1) throw InvalidConfig("samples_per_leaf must be >= 1");
    if (!(cfg.sigma0 > 0.0) || !(cfg.sigma_obs > 0.0) || !(cfg.level_decay > 0.0))
        throw InvalidConfig("sigma0, level_decay and sigma_obs must be positive");
    double nodes = 1.0, width = 1.0;
    for (std::size_t l = 0; l < cfg.depth; ++l) {
        width *= static_cast<double>(cfg.branching);
        nodes += width;
    }
    if (nodes > 1e6) throw InvalidConfig("synthetic hierarchy would exceed one million nodes");
}

namespace {

struct Tree {
    std::vector<std::string> names;
    std::vector<NamedEdge> edges;
    std::vector<std::size_t> parent;  // npos for the root
    std::vector<std::size_t> level;
    std::vector<std::string> leaves;
};

Tree complete_tree(std::size_t depth, std::size_t branching) {
    Tree t;
    t.names.push_back("root");
    t.parent.push_back(static_cast<std::size_t>(-1));
    t.level.push_back(0);
    std::size_t begin = 0;
    for (std::size_t l = 1; l <= depth; ++l) {
        const std::size_t end = t.names.size();
        for (std::size_t p = begin; p < end; ++p) {
            for (std::size_t b = 0; b < branching; ++b) {
                t.names.push_back(t.names[p] + "." + std::to_string(b));
                t.edges.emplace_back(t.names.back(), t.names[p]);
                t.parent.push_back(p);
                t.level.push_back(l);
                if (l == depth) t.leaves.push_back(t.names.back());
            }
        }
        begin = end;
    }
    return t;
}

// Node means, drawn parent-first from the seeded engine.
std::vector<Eigen::VectorXd> node_means(const Tree& t, const SynthConfig& cfg, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto d = static_cast<Eigen::Index>(cfg.dim);
    std::vector<Eigen::VectorXd> means(t.names.size());
    means[0] = Eigen::VectorXd::Zero(d);
    for (std::size_t i = 1; i < t.names.size(); ++i) {
        const double scale = cfg.sigma0 * std::pow(cfg.level_decay, static_cast<double>(t.level[i] - 1));
        means[i] = means[t.parent[i]];
        for (Eigen::Index k = 0; k < d; ++k) means[i][k] += scale * normal(rng);
    }
    return means;
}

}  // namespace

SyntheticData generate_synthetic(const SynthConfig& cfg) {
    validate(cfg);
    const Tree t = complete_tree(cfg.depth, cfg.branching);
    Hierarchy h = Hierarchy::build(t.names, t.edges, t.leaves);

    std::mt19937_64 rng(cfg.seed);
    const auto means = node_means(t, cfg, rng);
    std::normal_distribution<double> normal(0.0, 1.0);

    const auto labeled = h.labeled();
    Dataset ds;
    const auto n = static_cast<Eigen::Index>(labeled.size() * cfg.samples_per_leaf);
    ds.features.resize(n, static_cast<Eigen::Index>(cfg.dim));
    ds.labels.reserve(static_cast<std::size_t>(n));
    Eigen::Index row = 0;
    for (NodeId leaf : labeled) {
        const auto& mean = means[leaf.index];
        for (std::size_t i = 0; i < cfg.samples_per_leaf; ++i, ++row) {
            for (Eigen::Index k = 0; k < mean.size(); ++k) ds.features(row, k) = mean[k] + cfg.sigma_obs * normal(rng);
            ds.labels.push_back(leaf);
        }
    }
    return {std::move(h), std::move(ds)};
}

std::vector<Eigen::VectorXd> synthetic_leaf_means(const SynthConfig& cfg) {
    validate(cfg);
    const Tree t = complete_tree(cfg.depth, cfg.branching);
    std::mt19937_64 rng(cfg.seed);
    const auto means = node_means(t, cfg, rng);
    // Leaves are the last |C| nodes in breadth-first numbering.
    return {means.end() - static_cast<std::ptrdiff_t>(t.leaves.size()), means.end()};
}

Standardization fit_standardization(const Dataset& ds) {
    if (ds.size() == 0) throw EmptyDataset();
    const double n = static_cast<double>(ds.size());
    Standardization st;
    st.mean = ds.features.colwise().sum().transpose() / n;
    st.scale.resize(st.mean.size());
    for (Eigen::Index k = 0; k < st.mean.size(); ++k) {
        const double var = (ds.features.col(k).array() - st.mean[k]).square().sum() / n;
        const double sd = std::sqrt(var);
        st.scale[k] = sd < 1e-12 ? 1.0 : sd;
    }
    return st;
}

Dataset apply_standardization(Dataset ds, const Standardization& st) {
    if (static_cast<std::size_t>(st.mean.size()) != ds.dim() || st.scale.size() != st.mean.size())
        throw ShapeMismatch("standardization has " + std::to_string(st.mean.size()) + " features, dataset has " +
                            std::to_string(ds.dim()));
    for (Eigen::Index k = 0; k < st.mean.size(); ++k) {
        ds.features.col(k) = (ds.features.col(k).array() - st.mean[k]) / st.scale[k];
    }
    ds.standardization = st;
    return ds;
}

Dataset standardize(Dataset ds) {
    const auto st = fit_standardization(ds);
    return apply_standardization(std::move(ds), st);
}

namespace {

Dataset take_rows(const Dataset& ds, const std::vector<std::size_t>& rows) {
    Dataset out;
    out.features.resize(static_cast<Eigen::Index>(rows.size()), ds.features.cols());
    out.labels.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.features.row(static_cast<Eigen::Index>(i)) = ds.features.row(static_cast<Eigen::Index>(rows[i]));
        out.labels.push_back(ds.labels[rows[i]]);
    }
    out.standardization = ds.standardization;
    return out;
}

}  // namespace

std::pair<Dataset, Dataset> split_stratified(const Dataset& ds, double val_fraction, std::uint64_t seed) {
    if (!(val_fraction >= 0.0 && val_fraction <= 1.0)) throw InvalidConfig("val_fraction must be in [0, 1]");
    std::vector<NodeId> classes(ds.labels);
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> train_rows, val_rows;
    for (NodeId c : classes) {
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < ds.size(); ++i) {
            if (ds.labels[i] == c) rows.push_back(i);
        }
        std::shuffle(rows.begin(), rows.end(), rng);
        const auto n_val = static_cast<std::size_t>(std::llround(val_fraction * static_cast<double>(rows.size())));
        val_rows.insert(val_rows.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n_val));
        train_rows.insert(train_rows.end(), rows.begin() + static_cast<std::ptrdiff_t>(n_val), rows.end());
    }
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(val_rows.begin(), val_rows.end());
    return {take_rows(ds, train_rows), take_rows(ds, val_rows)};
}

void write_dataset(std::ostream& out, const Dataset& ds, const Hierarchy& h) {
    for (std::size_t k = 0; k < ds.dim(); ++k) out << 'f' << k << ',';
    out << "label\n";
    for (std::size_t i = 0; i < ds.size(); ++i) {
        for (std::size_t k = 0; k < ds.dim(); ++k)
            out << format_double(ds.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k))) << ',';
        out << h.name(ds.labels[i]) << '\n';
    }
}

void save_dataset(const std::string& path, const Dataset& ds, const Hierarchy& h) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write dataset file '" + path + "'");
    write_dataset(out, ds, h);
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> cols;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = line.find(',', pos);
        cols.push_back(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return cols;
}

}  // namespace

Dataset read_dataset(std::istream& in, const Hierarchy& h) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError(1, "missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_commas(line);
    if (header.size() < 2 || header.back() != "label") throw ParseError(1, "header must be f0,...,f{d-1},label");
    const std::size_t d = header.size() - 1;
    for (std::size_t k = 0; k < d; ++k) {
        if (header[k] != "f" + std::to_string(k)) throw ParseError(1, "unexpected header column '" + std::string(header[k]) + "'");
    }

    std::vector<double> values;
    std::vector<NodeId> labels;
    std::size_t row = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++row;
        const auto cols = split_commas(line);
        if (cols.size() != d + 1)
            throw DimensionMismatch(row, "expected " + std::to_string(d + 1) + " columns, got " + std::to_string(cols.size()));
        for (std::size_t k = 0; k < d; ++k) {
            const auto v = parse_double(cols[k]);
            if (!v || !std::isfinite(*v))
                throw ParseError(line_no, "invalid number '" + std::string(cols[k]) + "' in column f" + std::to_string(k));
            values.push_back(*v);
        }
        const std::string label(cols[d]);
        if (!h.contains(label) || !h.is_labeled(h.id(label))) throw LabelNotInHierarchy(row, label);
        labels.push_back(h.id(label));
    }

    Dataset ds;
    ds.features = Eigen::Map<const FeatureMatrix>(values.data(), static_cast<Eigen::Index>(labels.size()),
                                                  static_cast<Eigen::Index>(d));
    ds.labels = std::move(labels);
    return ds;
}

Dataset load_dataset(const std::string& path, const Hierarchy& h) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open dataset file '" + path + "'");
    return read_dataset(in, h);
}

}  // namespace hiercls
