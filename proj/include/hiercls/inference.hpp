#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "hiercls/hierarchy.hpp"

namespace hiercls {

/// Per-node estimates of P(node | input, at least one parent holds).
struct ConditionalScores {
    std::vector<double> values;
};

/// Per-node P(node | input) after recursive decomposition. Roots are 1.
struct MarginalScores {
    std::vector<double> values;
};

enum class PredictionMode {
    Mlnp,  // argmax over the labeled classes C
    Anp,   // argmax over every node of the hierarchy
};

PredictionMode parse_prediction_mode(std::string_view text);
std::string_view to_string(PredictionMode mode);

struct Prediction {
    NodeId node;
    double score = 0.0;
};

/// 1 - prod(1 - p_i): probability that at least one independent event holds.
double noisy_or(std::span<const double> probabilities);

/// One pass over topo_order. Roots get 1, every other node gets
/// cond[s] * noisy_or(marginals of its parents). cond[root] is ignored.
MarginalScores marginals(const Hierarchy& h, const ConditionalScores& cond);

/// marg[s] * prod over children c of (1 - cond[c]).
std::vector<double> prediction_scores(const Hierarchy& h, const ConditionalScores& cond, const MarginalScores& marg);

/// Argmax of precomputed prediction scores over C (MLNP) or S (ANP); ties go
/// to the smallest NodeId. Throws EmptyCandidateSet.
Prediction select_prediction(const Hierarchy& h, std::span<const double> scores, PredictionMode mode);

Prediction predict(const Hierarchy& h, const ConditionalScores& cond, PredictionMode mode);

}  // namespace hiercls
