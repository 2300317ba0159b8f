#include "hiercls/hierarchy.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>

#include "hiercls/error.hpp"

namespace hiercls {

CycleDetected::CycleDetected(std::vector<std::string> cycle)
    : Error([&] {
          std::string msg = "cycle detected:";
          for (const auto& n : cycle) msg += " " + n + " ->";
          if (!cycle.empty()) msg += " " + cycle.front();
          return msg;
      }()),
      cycle_(std::move(cycle)) {}

namespace {

// Kahn's algorithm, parents before children, smallest id first among ready
// nodes. Returns the order; fewer than n entries means a cycle exists.
std::vector<NodeId> topological_order(const std::vector<std::vector<NodeId>>& parents,
                                      const std::vector<std::vector<NodeId>>& children) {
    const std::size_t n = parents.size();
    std::vector<std::size_t> pending(n);
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t i = 0; i < n; ++i) {
        pending[i] = parents[i].size();
        if (pending[i] == 0) ready.push(i);
    }
    std::vector<NodeId> order;
    order.reserve(n);
    while (!ready.empty()) {
        const std::size_t v = ready.top();
        ready.pop();
        order.push_back(NodeId{v});
        for (NodeId c : children[v]) {
            if (--pending[c.index] == 0) ready.push(c.index);
        }
    }
    return order;
}

std::vector<std::string> find_cycle(const std::vector<std::string>& names,
                                    const std::vector<std::vector<NodeId>>& parents,
                                    const std::vector<NodeId>& partial_order) {
    std::vector<bool> done(names.size(), false);
    for (NodeId s : partial_order) done[s.index] = true;
    // Every unfinished node has an unfinished parent, so walking parents
    // inside the unfinished set must revisit a node.
    std::size_t start = 0;
    while (done[start]) ++start;
    std::vector<std::size_t> pos(names.size(), names.size());
    std::vector<std::size_t> walk;
    std::size_t v = start;
    while (pos[v] == names.size()) {
        pos[v] = walk.size();
        walk.push_back(v);
        for (NodeId p : parents[v]) {
            if (!done[p.index]) {
                v = p.index;
                break;
            }
        }
    }
    std::vector<std::string> cycle;
    for (std::size_t i = pos[v]; i < walk.size(); ++i) cycle.push_back(names[walk[i]]);
    return cycle;
}

}  // namespace

Hierarchy Hierarchy::build(std::vector<std::string> nodes, const std::vector<NamedEdge>& edges,
                           const std::vector<std::string>& labeled) {
    Hierarchy h;
    const std::size_t n = nodes.size();
    h.index_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (nodes[i].empty()) throw Error("node names must be non-empty");
        if (!h.index_.emplace(nodes[i], i).second) throw DuplicateName(nodes[i]);
    }
    h.names_ = std::move(nodes);

    h.parents_.assign(n, {});
    h.children_.assign(n, {});
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& [child, parent] : edges) {
        const NodeId c = h.id(child);
        const NodeId p = h.id(parent);
        if (c == p) throw SelfLoop(child);
        if (!seen.emplace(c.index, p.index).second) continue;
        h.parents_[c.index].push_back(p);
        h.children_[p.index].push_back(c);
    }
    h.edge_count_ = seen.size();
    for (auto& v : h.parents_) std::sort(v.begin(), v.end());
    for (auto& v : h.children_) std::sort(v.begin(), v.end());

    h.topo_ = topological_order(h.parents_, h.children_);
    if (h.topo_.size() != n) throw CycleDetected(find_cycle(h.names_, h.parents_, h.topo_));

    h.closure_.assign(n, boost::dynamic_bitset<>(n));
    for (NodeId s : h.topo_) {
        auto& anc = h.closure_[s.index];
        for (NodeId p : h.parents_[s.index]) {
            anc.set(p.index);
            anc |= h.closure_[p.index];
        }
        if (h.parents_[s.index].empty()) h.roots_.push_back(s);
    }
    std::sort(h.roots_.begin(), h.roots_.end());

    h.labeled_mask_.assign(n, false);
    for (const auto& name : labeled) h.labeled_mask_[h.id(name).index] = true;
    for (std::size_t i = 0; i < n; ++i) {
        if (h.labeled_mask_[i]) h.labeled_.push_back(NodeId{i});
    }
    return h;
}

NodeId Hierarchy::id(std::string_view name) const {
    const auto it = index_.find(std::string(name));
    if (it == index_.end()) throw UnknownName(std::string(name));
    return NodeId{it->second};
}

bool Hierarchy::contains(std::string_view name) const { return index_.contains(std::string(name)); }

std::vector<NodeId> Hierarchy::leaves() const {
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < size(); ++i) {
        if (children_[i].empty()) out.push_back(NodeId{i});
    }
    return out;
}

std::vector<std::pair<NodeId, NodeId>> Hierarchy::edges() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(edge_count_);
    for (std::size_t c = 0; c < size(); ++c) {
        for (NodeId p : parents_[c]) out.emplace_back(NodeId{c}, p);
    }
    return out;
}

bool Hierarchy::equivalent(const Hierarchy& other) const {
    if (size() != other.size() || edge_count_ != other.edge_count_) return false;
    for (std::size_t i = 0; i < size(); ++i) {
        if (!other.contains(names_[i])) return false;
        const NodeId o = other.id(names_[i]);
        if (is_labeled(NodeId{i}) != other.is_labeled(o)) return false;
        for (NodeId p : parents_[i]) {
            const auto op = other.parents(o);
            if (std::find(op.begin(), op.end(), other.id(names_[p.index])) == op.end()) return false;
        }
    }
    return true;
}

Hierarchy parse_hierarchy(std::string_view text) {
    std::vector<std::string> nodes;
    std::unordered_map<std::string, std::size_t> known;
    std::vector<NamedEdge> edges;
    std::vector<std::string> labeled;
    auto intern = [&](const std::string& name) {
        if (known.emplace(name, nodes.size()).second) nodes.push_back(name);
    };

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') {
            if (end == text.size()) break;
            continue;
        }
        const std::size_t tab = line.find('\t');
        if (tab == std::string_view::npos) throw ParseError(line_no, "expected two tab-separated columns");
        std::string first(line.substr(0, tab));
        std::string second(line.substr(tab + 1));
        if (second.find('\t') != std::string::npos)
            throw ParseError(line_no, "expected two tab-separated columns");
        if (first.empty() || second.empty()) throw ParseError(line_no, "empty column");
        if (first == "!label") {
            labeled.push_back(std::move(second));
        } else {
            intern(first);
            intern(second);
            edges.emplace_back(std::move(first), std::move(second));
        }
        if (end == text.size()) break;
    }
    return Hierarchy::build(std::move(nodes), edges, labeled);
}

Hierarchy load_hierarchy(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open hierarchy file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_hierarchy(buf.str());
}

std::string serialize_hierarchy(const Hierarchy& h) {
    const std::size_t n = h.size();
    std::vector<bool> introduced(n, false);
    std::set<std::pair<std::size_t, std::size_t>> edges_done;
    std::string out;
    auto edge_line = [&](NodeId c, NodeId p) {
        out += h.name(c) + '\t' + h.name(p) + '\n';
        introduced[c.index] = introduced[p.index] = true;
        edges_done.emplace(c.index, p.index);
    };

    // Introduce nodes in id order, each with a line that names it after
    // everything already introduced.
    for (std::size_t i = 0; i < n; ++i) {
        const NodeId v{i};
        if (introduced[i]) continue;
        bool done = false;
        for (NodeId p : h.parents(v)) {
            if (introduced[p.index]) {
                edge_line(v, p);
                done = true;
                break;
            }
        }
        if (!done) {
            for (NodeId c : h.children(v)) {
                if (introduced[c.index]) {
                    edge_line(c, v);
                    done = true;
                    break;
                }
            }
        }
        if (done) continue;
        if (!h.parents(v).empty()) {
            edge_line(v, h.parents(v).front());
        } else if (!h.children(v).empty()) {
            edge_line(h.children(v).front(), v);
        } else {
            throw Error("node '" + h.name(v) + "' has no edges; the file format cannot express it");
        }
    }
    for (auto [c, p] : h.edges()) {
        if (!edges_done.contains({c.index, p.index})) edge_line(c, p);
    }
    for (NodeId s : h.labeled()) out += "!label\t" + h.name(s) + '\n';
    return out;
}

void save_hierarchy(const Hierarchy& h, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write hierarchy file '" + path + "'");
    out << serialize_hierarchy(h);
}

}  // namespace hiercls
