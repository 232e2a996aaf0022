#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fidx/common.hpp"

namespace fidx {

// Gap transform. Convention: gaps[0] is the absolute first component (may be
// 0), gaps[i] = components[i] - components[i-1] >= 1 afterwards. Bit codecs
// shift the first gap by +1 internally; byte codecs encode it as is.
inline std::vector<std::uint32_t> to_gaps(std::span<const std::uint32_t> components) {
  std::vector<std::uint32_t> gaps(components.size());
  std::uint32_t prev = 0;
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (i > 0 && components[i] <= prev)
      throw validation_error("components not strictly increasing at index " + std::to_string(i));
    gaps[i] = components[i] - prev;
    prev = components[i];
  }
  return gaps;
}

// Inverse of to_gaps. Every prefix sum must stay below dim.
inline std::vector<std::uint32_t> from_gaps(std::span<const std::uint32_t> gaps,
                                            std::uint32_t dim) {
  std::vector<std::uint32_t> components(gaps.size());
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    sum += gaps[i];
    if (sum >= dim)
      throw corruption_error("gap prefix sum " + std::to_string(sum) +
                             " reaches dim " + std::to_string(dim) + " at index " +
                             std::to_string(i));
    components[i] = static_cast<std::uint32_t>(sum);
  }
  return components;
}

}  // namespace fidx
