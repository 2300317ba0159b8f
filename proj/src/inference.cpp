#include "hiercls/inference.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hiercls/error.hpp"

namespace hiercls {

namespace {

constexpr double kLogSpaceThreshold = 1e-12;

// prod(1 - p_i). Switches to a log-space sum once any factor is tiny.
template <typename Factors>
double product_of_complements(const Factors& factors) {
    double prod = 1.0;
    bool tiny = false;
    for (double p : factors) {
        const double q = 1.0 - p;
        if (q < kLogSpaceThreshold) tiny = true;
        prod *= q;
    }
    if (!tiny) return prod;
    double log_prod = 0.0;
    for (double p : factors) {
        const double q = 1.0 - p;
        if (q <= 0.0) return 0.0;
        log_prod += std::log(q);
    }
    return std::exp(log_prod);
}

void check_length(const Hierarchy& h, std::size_t n, const char* what) {
    if (n != h.size()) {
        throw LengthMismatch(std::string(what) + " has " + std::to_string(n) + " entries, hierarchy has " +
                             std::to_string(h.size()) + " nodes");
    }
}

}  // namespace

PredictionMode parse_prediction_mode(std::string_view text) {
    if (text == "mlnp" || text == "MLNP") return PredictionMode::Mlnp;
    if (text == "anp" || text == "ANP") return PredictionMode::Anp;
    throw InvalidConfig("unknown prediction mode '" + std::string(text) + "' (expected mlnp or anp)");
}

std::string_view to_string(PredictionMode mode) { return mode == PredictionMode::Mlnp ? "mlnp" : "anp"; }

double noisy_or(std::span<const double> probabilities) {
    if (probabilities.size() == 1) return probabilities[0];
    const double largest = probabilities.empty() ? 0.0 : *std::max_element(probabilities.begin(), probabilities.end());
    return std::max(largest, 1.0 - product_of_complements(probabilities));
}

MarginalScores marginals(const Hierarchy& h, const ConditionalScores& cond) {
    check_length(h, cond.values.size(), "conditional scores");
    MarginalScores marg{std::vector<double>(h.size(), 0.0)};
    std::vector<double> parent_marg;
    for (NodeId s : h.topo_order()) {
        const auto parents = h.parents(s);
        if (parents.empty()) {
            marg.values[s.index] = 1.0;
            continue;
        }
        parent_marg.clear();
        for (NodeId p : parents) parent_marg.push_back(marg.values[p.index]);
        marg.values[s.index] = cond.values[s.index] * noisy_or(parent_marg);
    }
    return marg;
}

std::vector<double> prediction_scores(const Hierarchy& h, const ConditionalScores& cond, const MarginalScores& marg) {
    check_length(h, cond.values.size(), "conditional scores");
    check_length(h, marg.values.size(), "marginal scores");
    std::vector<double> score(h.size());
    std::vector<double> child_cond;
    for (std::size_t i = 0; i < h.size(); ++i) {
        child_cond.clear();
        for (NodeId c : h.children(NodeId{i})) child_cond.push_back(cond.values[c.index]);
        score[i] = marg.values[i] * product_of_complements(child_cond);
    }
    return score;
}

Prediction select_prediction(const Hierarchy& h, std::span<const double> scores, PredictionMode mode) {
    check_length(h, scores.size(), "prediction scores");
    bool found = false;
    Prediction best;
    auto consider = [&](NodeId s) {
        if (!found || scores[s.index] > best.score) {
            best = {s, scores[s.index]};
            found = true;
        }
    };
    if (mode == PredictionMode::Mlnp) {
        for (NodeId s : h.labeled()) consider(s);
    } else {
        for (std::size_t i = 0; i < h.size(); ++i) consider(NodeId{i});
    }
    if (!found) throw EmptyCandidateSet();
    return best;
}

Prediction predict(const Hierarchy& h, const ConditionalScores& cond, PredictionMode mode) {
    const auto marg = marginals(h, cond);
    const auto scores = prediction_scores(h, cond, marg);
    return select_prediction(h, scores, mode);
}

}  // namespace hiercls
