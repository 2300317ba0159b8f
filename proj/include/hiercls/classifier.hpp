#pragma once

#include <span>
#include <string>
#include <vector>

#include "hiercls/data.hpp"
#include "hiercls/hierarchy.hpp"
#include "hiercls/inference.hpp"
#include "hiercls/model.hpp"

namespace hiercls {

/// A trained estimator together with the input standardization it was
/// trained under. Baseline outputs follow the order of Hierarchy::labeled().
struct TrainedModel {
    HeadKind head = HeadKind::Hierarchical;
    ModelParams params;
    Standardization standardization;
};

/// Output width the head needs for h.
std::size_t head_width(const Hierarchy& h, HeadKind head);

/// Classifies standardized inputs. Hierarchical heads go through marginals
/// and prediction scores in the given mode; baseline heads take the argmax
/// over C and ignore the mode.
Prediction classify(const Hierarchy& h, const TrainedModel& m, std::span<const double> x, PredictionMode mode);
std::vector<Prediction> classify_all(const Hierarchy& h, const TrainedModel& m, const Dataset& ds, PredictionMode mode);

struct Evaluation {
    double accuracy = 0.0;  // fraction of samples classified correctly
    double loss = 0.0;      // mean per-sample training objective of the head
};

/// Throws EmptyDataset.
Evaluation evaluate(const Hierarchy& h, const TrainedModel& m, const Dataset& ds, PredictionMode mode);

/// JSON container: format tag, version, FNV-1a checksum of the payload,
/// and a payload holding the hierarchy, head, architecture, standardization
/// and parameters. Throws ChecksumMismatch or Error on malformed files.
std::string serialize_model(const Hierarchy& h, const TrainedModel& m);
struct LoadedModel {
    Hierarchy hierarchy;
    TrainedModel model;
};
LoadedModel deserialize_model(const std::string& text);
void save_model(const std::string& path, const Hierarchy& h, const TrainedModel& m);
LoadedModel load_model(const std::string& path);

}  // namespace hiercls
