#pragma once

// Test fixtures and independent oracles. Nothing here calls into the code
// paths it is used to check: reachability walks the raw edge list, the
// encoding and mask oracles are set comprehensions over that list, and
// marginals are recomputed by plain recursion without memoization.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hiercls/hiercls.hpp"

namespace hiercls::testing {

struct GraphSpec {
    std::vector<std::string> nodes;
    std::vector<NamedEdge> edges;
    std::vector<std::string> labeled;

    Hierarchy build() const { return Hierarchy::build(nodes, edges, labeled); }
};

inline GraphSpec toy1() {
    return {{"entity", "animal", "vehicle", "dog", "corgi", "car", "bus"},
            {{"animal", "entity"}, {"vehicle", "entity"}, {"dog", "animal"}, {"corgi", "dog"}, {"car", "vehicle"}, {"bus", "vehicle"}},
            {"corgi", "car", "bus"}};
}

inline GraphSpec toy2() {
    return {{"entity", "mammal", "aquatic", "whale", "dolphin"},
            {{"mammal", "entity"}, {"aquatic", "entity"}, {"whale", "mammal"}, {"whale", "aquatic"}, {"dolphin", "whale"}},
            {"whale", "dolphin"}};
}

/// Random DAG on n nodes. Node names are shuffled relative to a hidden
/// rank so that NodeId order is not a topological order; edges only go from
/// higher to lower rank. At most max_parents parents per node.
inline GraphSpec random_dag(std::mt19937_64& rng, std::size_t n, std::size_t max_parents = 3, double root_prob = 0.1) {
    GraphSpec g;
    for (std::size_t i = 0; i < n; ++i) g.nodes.push_back("n" + std::to_string(i));
    std::vector<std::size_t> rank(n);
    for (std::size_t i = 0; i < n; ++i) rank[i] = i;
    std::shuffle(rank.begin(), rank.end(), rng);  // rank[k] = node at position k
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t k = 1; k < n; ++k) {
        if (u(rng) < root_prob) continue;
        std::uniform_int_distribution<std::size_t> count(1, std::min(max_parents, k));
        std::uniform_int_distribution<std::size_t> pick(0, k - 1);
        std::set<std::size_t> parents;
        const std::size_t want = count(rng);
        while (parents.size() < want) parents.insert(pick(rng));
        for (std::size_t p : parents) g.edges.emplace_back(g.nodes[rank[k]], g.nodes[rank[p]]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (u(rng) < 0.5) g.labeled.push_back(g.nodes[i]);
    }
    if (g.labeled.empty()) g.labeled.push_back(g.nodes[0]);
    return g;
}

/// Ancestors of `node` by depth-first search over the raw edge list.
inline std::set<std::string> oracle_ancestors(const GraphSpec& g, const std::string& node) {
    std::set<std::string> seen;
    std::vector<std::string> stack{node};
    while (!stack.empty()) {
        const std::string v = stack.back();
        stack.pop_back();
        for (const auto& [c, p] : g.edges) {
            if (c == v && seen.insert(p).second) stack.push_back(p);
        }
    }
    return seen;
}

/// O(n^3) Warshall closure over an adjacency matrix indexed like g.nodes.
inline std::vector<std::vector<bool>> oracle_closure(const GraphSpec& g) {
    const std::size_t n = g.nodes.size();
    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i) idx[g.nodes[i]] = i;
    std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
    for (const auto& [c, p] : g.edges) r[idx[c]][idx[p]] = true;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (r[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (r[k][j]) r[i][j] = true;
    return r;
}

/// e(y)_s = 1 iff y = s or (y, s) in the closure.
inline std::set<std::string> oracle_encoding(const GraphSpec& g, const std::string& y) {
    auto out = oracle_ancestors(g, y);
    out.insert(y);
    return out;
}

/// m(y)_s = 1 iff y = s or some edge (s, s') has s' = y or (y, s') in the closure.
inline std::set<std::string> oracle_mask(const GraphSpec& g, const std::string& y) {
    const auto anc = oracle_ancestors(g, y);
    std::set<std::string> out{y};
    for (const auto& s : g.nodes) {
        for (const auto& [c, p] : g.edges) {
            if (c == s && (p == y || anc.contains(p))) out.insert(s);
        }
    }
    return out;
}

/// Marginal of one node by direct recursion over the raw edge list:
/// 1 at roots, cond * (1 - prod(1 - marginal(parent))) elsewhere.
inline double oracle_marginal(const GraphSpec& g, const std::map<std::string, double>& cond, const std::string& s) {
    std::vector<std::string> parents;
    for (const auto& [c, p] : g.edges) {
        if (c == s) parents.push_back(p);
    }
    if (parents.empty()) return 1.0;
    double none = 1.0;
    for (const auto& p : parents) none *= 1.0 - oracle_marginal(g, cond, p);
    return cond.at(s) * (1.0 - none);
}

inline std::vector<double> to_vector(const Hierarchy& h, const std::map<std::string, double>& by_name, double fill = 0.5) {
    std::vector<double> v(h.size(), fill);
    for (const auto& [name, value] : by_name) v[h.id(name).index] = value;
    return v;
}

/// Relative error with the denominator floored at `floor`.
inline double rel_error(double a, double b, double floor) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

/// Central finite difference of f at every parameter of p.
inline Gradients numeric_gradients(const ModelParams& p, const std::function<double(const ModelParams&)>& f,
                                   double step = 1e-5) {
    Gradients g;
    ModelParams q = p;
    for (std::size_t li = 0; li < p.layers.size(); ++li) {
        Layer gl{Eigen::MatrixXd::Zero(p.layers[li].weight.rows(), p.layers[li].weight.cols()),
                 Eigen::VectorXd::Zero(p.layers[li].bias.size())};
        for (Eigen::Index i = 0; i < gl.weight.size(); ++i) {
            double& w = q.layers[li].weight.data()[i];
            const double orig = w;
            w = orig + step;
            const double up = f(q);
            w = orig - step;
            const double down = f(q);
            w = orig;
            gl.weight.data()[i] = (up - down) / (2.0 * step);
        }
        for (Eigen::Index i = 0; i < gl.bias.size(); ++i) {
            double& b = q.layers[li].bias[i];
            const double orig = b;
            b = orig + step;
            const double up = f(q);
            b = orig - step;
            const double down = f(q);
            b = orig;
            gl.bias[i] = (up - down) / (2.0 * step);
        }
        g.push_back(std::move(gl));
    }
    return g;
}

/// Largest floored relative error over all parameters.
inline double max_rel_error(const Gradients& a, const Gradients& b, double floor) {
    double worst = 0.0;
    for (std::size_t li = 0; li < a.size(); ++li) {
        for (Eigen::Index i = 0; i < a[li].weight.size(); ++i)
            worst = std::max(worst, rel_error(a[li].weight.data()[i], b[li].weight.data()[i], floor));
        for (Eigen::Index i = 0; i < a[li].bias.size(); ++i)
            worst = std::max(worst, rel_error(a[li].bias[i], b[li].bias[i], floor));
    }
    return worst;
}

}  // namespace hiercls::testing
