#include "hiercls/loss.hpp"

#include <string>

#include "hiercls/error.hpp"

namespace hiercls {

LossValue hierarchical_loss(const LabelEncoding& enc, const LossMask& mask, std::span<const double> out) {
    if (enc.size() != out.size() || mask.size() != out.size()) {
        throw LengthMismatch("hierarchical loss: encoding " + std::to_string(enc.size()) + ", mask " +
                             std::to_string(mask.size()) + ", output " + std::to_string(out.size()));
    }
    LossValue r{0.0, std::vector<double>(out.size(), 0.0)};
    for (std::size_t s = 0; s < out.size(); ++s) {
        if (!mask.values[s]) continue;
        const double diff = out[s] - static_cast<double>(enc.values[s]);
        r.value += diff * diff;
        r.gradient[s] = 2.0 * diff;
    }
    return r;
}

LossValue onehot_loss(std::size_t target, std::span<const double> out) {
    if (target >= out.size()) {
        throw IndexOutOfRange("one-hot target " + std::to_string(target) + " with " + std::to_string(out.size()) +
                              " outputs");
    }
    LossValue r{0.0, std::vector<double>(out.size(), 0.0)};
    for (std::size_t c = 0; c < out.size(); ++c) {
        const double diff = out[c] - (c == target ? 1.0 : 0.0);
        r.value += diff * diff;
        r.gradient[c] = 2.0 * diff;
    }
    return r;
}

}  // namespace hiercls
