#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hiercls/encoding.hpp"

namespace hiercls {

/// Output components are kept inside [kOutputEps, 1 - kOutputEps].
inline constexpr double kOutputEps = 1e-7;

struct LossValue {
    double value = 0.0;
    std::vector<double> gradient;  // d value / d output, same length as the output
};

/// sum_s m_s (e_s - f_s)^2 with gradient 2 m_s (f_s - e_s). Throws LengthMismatch.
LossValue hierarchical_loss(const LabelEncoding& enc, const LossMask& mask, std::span<const double> out);

/// sum_c (onehot_c - f_c)^2 over the |C| baseline outputs. Throws IndexOutOfRange.
LossValue onehot_loss(std::size_t target, std::span<const double> out);

}  // namespace hiercls
