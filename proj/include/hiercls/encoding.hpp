#pragma once

#include <cstdint>
#include <vector>

#include "hiercls/hierarchy.hpp"

namespace hiercls {

/// e(y): 1 at y and at every ancestor of y, 0 elsewhere. Indexed by NodeId.
struct LabelEncoding {
    std::vector<std::uint8_t> values;

    std::size_t size() const noexcept { return values.size(); }
    bool operator[](NodeId s) const { return values[s.index] != 0; }
    friend bool operator==(const LabelEncoding&, const LabelEncoding&) = default;
};

/// m(y): which output components are trained for label y. That is y itself
/// and every node with a parent equal to y or to an ancestor of y.
struct LossMask {
    std::vector<std::uint8_t> values;

    std::size_t size() const noexcept { return values.size(); }
    bool operator[](NodeId s) const { return values[s.index] != 0; }
    friend bool operator==(const LossMask&, const LossMask&) = default;
};

LabelEncoding encode_label(const Hierarchy& h, NodeId y);
LossMask loss_mask(const Hierarchy& h, NodeId y);

/// Encodings and masks of every labeled class, computed once.
class EncodingTable {
public:
    explicit EncodingTable(const Hierarchy& h);

    const LabelEncoding& encoding(NodeId y) const;
    const LossMask& mask(NodeId y) const;

private:
    std::vector<std::size_t> slot_;  // NodeId -> position, npos when unlabeled
    std::vector<LabelEncoding> encodings_;
    std::vector<LossMask> masks_;
};

}  // namespace hiercls
