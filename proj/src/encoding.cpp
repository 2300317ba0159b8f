#include "hiercls/encoding.hpp"

#include <limits>

#include "hiercls/error.hpp"

namespace hiercls {

namespace {

constexpr std::size_t kNoSlot = std::numeric_limits<std::size_t>::max();

void check_node(const Hierarchy& h, NodeId y) {
    if (y.index >= h.size()) throw IndexOutOfRange("node id " + std::to_string(y.index) + " out of range");
}

}  // namespace

LabelEncoding encode_label(const Hierarchy& h, NodeId y) {
    check_node(h, y);
    LabelEncoding e{std::vector<std::uint8_t>(h.size(), 0)};
    const auto& anc = h.ancestors(y);
    for (auto i = anc.find_first(); i != boost::dynamic_bitset<>::npos; i = anc.find_next(i)) e.values[i] = 1;
    e.values[y.index] = 1;
    return e;
}

LossMask loss_mask(const Hierarchy& h, NodeId y) {
    check_node(h, y);
    LossMask m{std::vector<std::uint8_t>(h.size(), 0)};
    m.values[y.index] = 1;
    for (NodeId c : h.children(y)) m.values[c.index] = 1;
    const auto& anc = h.ancestors(y);
    for (auto i = anc.find_first(); i != boost::dynamic_bitset<>::npos; i = anc.find_next(i)) {
        for (NodeId c : h.children(NodeId{i})) m.values[c.index] = 1;
    }
    return m;
}

EncodingTable::EncodingTable(const Hierarchy& h) : slot_(h.size(), kNoSlot) {
    for (NodeId y : h.labeled()) {
        slot_[y.index] = encodings_.size();
        encodings_.push_back(encode_label(h, y));
        masks_.push_back(loss_mask(h, y));
    }
}

const LabelEncoding& EncodingTable::encoding(NodeId y) const {
    if (y.index >= slot_.size() || slot_[y.index] == kNoSlot)
        throw IndexOutOfRange("node " + std::to_string(y.index) + " is not a labeled class");
    return encodings_[slot_[y.index]];
}

const LossMask& EncodingTable::mask(NodeId y) const {
    if (y.index >= slot_.size() || slot_[y.index] == kNoSlot)
        throw IndexOutOfRange("node " + std::to_string(y.index) + " is not a labeled class");
    return masks_[slot_[y.index]];
}

}  // namespace hiercls
