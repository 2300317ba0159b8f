#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "hiercls/hierarchy.hpp"

namespace hiercls {

using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Per-feature affine map x -> (x - mean) / scale.
struct Standardization {
    Eigen::VectorXd mean;
    Eigen::VectorXd scale;

    bool empty() const noexcept { return mean.size() == 0; }
};

/// One sample per row of `features`; every label is a labeled class.
struct Dataset {
    FeatureMatrix features;
    std::vector<NodeId> labels;
    Standardization standardization;  // empty until standardize() ran

    std::size_t size() const noexcept { return labels.size(); }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(features.cols()); }
};

struct SynthConfig {
    std::size_t depth = 3;
    std::size_t branching = 3;
    std::size_t samples_per_leaf = 100;
    std::size_t dim = 32;
    double sigma0 = 1.0;     // displacement scale of the first level below the root
    double level_decay = 0.5;
    double sigma_obs = 1.0;  // observation noise around a leaf mean
    std::uint64_t seed = 0;
};

/// Throws InvalidConfig.
void validate(const SynthConfig& cfg);

struct SyntheticData {
    Hierarchy hierarchy;
    Dataset dataset;
};

/// Complete tree of the given depth and branching under one root named
/// "root"; node "root.1.0" is the first child of the second child of the
/// root. Nodes are numbered breadth first and the leaves form C. Class means
/// are a random walk down the tree: child mean = parent mean + N(0, s^2 I)
/// with s = sigma0 * level_decay^(level - 1). Samples are the leaf mean plus
/// N(0, sigma_obs^2 I), grouped by leaf.
SyntheticData generate_synthetic(const SynthConfig& cfg);

/// Leaf means of the tree generated for cfg, indexed like h.labeled().
std::vector<Eigen::VectorXd> synthetic_leaf_means(const SynthConfig& cfg);

/// Population (divide by n) statistics of `ds`. Features whose standard
/// deviation is below 1e-12 keep scale 1. Throws EmptyDataset.
Standardization fit_standardization(const Dataset& ds);
Dataset apply_standardization(Dataset ds, const Standardization& st);
/// fit + apply; the statistics are stored on the result.
Dataset standardize(Dataset ds);

/// Exact partition; within every class the first round(n * val_fraction)
/// samples of a seeded shuffle go to validation.
std::pair<Dataset, Dataset> split_stratified(const Dataset& ds, double val_fraction, std::uint64_t seed);

/// CSV with header f0,...,f{d-1},label. Labels are node names.
void write_dataset(std::ostream& out, const Dataset& ds, const Hierarchy& h);
void save_dataset(const std::string& path, const Dataset& ds, const Hierarchy& h);
/// Throws ParseError, LabelNotInHierarchy, DimensionMismatch (rows are 1-based
/// data rows, header excluded).
Dataset read_dataset(std::istream& in, const Hierarchy& h);
Dataset load_dataset(const std::string& path, const Hierarchy& h);

}  // namespace hiercls
