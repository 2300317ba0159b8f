#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace hiercls {

/// Dense index of a node inside one Hierarchy. Valid ids are 0 .. size()-1.
struct NodeId {
    std::size_t index = 0;

    friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

using NamedEdge = std::pair<std::string, std::string>;  // (child, parent)

/// Immutable class DAG. Edges point child -> parent ("child is-a parent").
///
/// Construction validates names, rejects self loops and cycles, and
/// precomputes the transitive closure (one ancestor bitset per node) and a
/// topological order in which every parent precedes its children. All
/// queries are const and safe to call concurrently.
class Hierarchy {
public:
    /// NodeIds are assigned in the order of `nodes`.
    /// Throws DuplicateName, UnknownName, SelfLoop or CycleDetected.
    static Hierarchy build(std::vector<std::string> nodes, const std::vector<NamedEdge>& edges,
                           const std::vector<std::string>& labeled);

    std::size_t size() const noexcept { return names_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }

    const std::string& name(NodeId s) const { return names_.at(s.index); }
    const std::vector<std::string>& names() const noexcept { return names_; }
    /// Throws UnknownName.
    NodeId id(std::string_view name) const;
    bool contains(std::string_view name) const;

    std::span<const NodeId> parents(NodeId s) const { return parents_.at(s.index); }
    std::span<const NodeId> children(NodeId s) const { return children_.at(s.index); }

    bool is_root(NodeId s) const { return parents_.at(s.index).empty(); }
    bool is_leaf(NodeId s) const { return children_.at(s.index).empty(); }
    /// True iff (descendant, ancestor) is in the transitive closure; false when equal.
    bool is_ancestor(NodeId descendant, NodeId ancestor) const {
        return closure_.at(descendant.index).test(ancestor.index);
    }
    /// Strict ancestors of s as a bitset over NodeId indices.
    const boost::dynamic_bitset<>& ancestors(NodeId s) const { return closure_.at(s.index); }

    bool is_labeled(NodeId s) const { return labeled_mask_.at(s.index); }
    /// Labeled classes (C), sorted by NodeId.
    std::span<const NodeId> labeled() const noexcept { return labeled_; }
    std::span<const NodeId> roots() const noexcept { return roots_; }
    std::vector<NodeId> leaves() const;
    /// Permutation of all nodes; parents come before children.
    std::span<const NodeId> topo_order() const noexcept { return topo_; }

    /// All edges as (child, parent), sorted by (child, parent) id.
    std::vector<std::pair<NodeId, NodeId>> edges() const;

    /// Same names, edges and labeled set (compared by name, not by id).
    bool equivalent(const Hierarchy& other) const;

private:
    Hierarchy() = default;

    std::vector<std::string> names_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::vector<NodeId>> parents_;
    std::vector<std::vector<NodeId>> children_;
    std::vector<boost::dynamic_bitset<>> closure_;
    std::vector<NodeId> topo_;
    std::vector<NodeId> roots_;
    std::vector<NodeId> labeled_;
    std::vector<bool> labeled_mask_;
    std::size_t edge_count_ = 0;
};

/// Parses the tab-separated hierarchy format:
///   child<TAB>parent     an edge
///   !label<TAB>name      marks name as a labeled class
///   # ...                comment
/// Blank lines are ignored. The nodes are the names appearing in edge lines,
/// numbered in order of first appearance; a label naming any other node is
/// an UnknownName error.
/// Throws ParseError (1-based line) and every error of Hierarchy::build.
Hierarchy parse_hierarchy(std::string_view text);
Hierarchy load_hierarchy(const std::string& path);

/// Inverse of parse_hierarchy. Lines are arranged so that re-parsing keeps
/// the original numbering whenever the format can express it. Throws Error
/// for nodes without any edge, which the format cannot hold.
std::string serialize_hierarchy(const Hierarchy& h);
void save_hierarchy(const Hierarchy& h, const std::string& path);

}  // namespace hiercls

template <>
struct std::hash<hiercls::NodeId> {
    std::size_t operator()(hiercls::NodeId s) const noexcept { return std::hash<std::size_t>{}(s.index); }
};
