#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fidx/sparse.hpp"
#include "fidx/values.hpp"

namespace fidx {

inline constexpr std::uint32_t kMaxDim = 65536;  // components must fit 16 bits

// Uncompressed forward index: three contiguous arrays. The correctness
// reference and the 16-bits-per-component baseline.
struct ForwardIndex {
  std::uint32_t dim = 0;
  ValueFormat format;
  std::vector<std::uint16_t> components;
  std::vector<std::uint8_t> values;    // packed per format
  std::vector<std::uint64_t> offsets;  // n+1 element offsets into both arrays

  std::size_t size() const { return offsets.empty() ? 0 : offsets.size() - 1; }
  std::uint64_t total_nnz() const { return offsets.empty() ? 0 : offsets.back(); }

  std::span<const std::uint16_t> doc_components(std::size_t i) const {
    return {components.data() + offsets[i], components.data() + offsets[i + 1]};
  }

  float value(std::size_t doc, std::size_t j) const {
    return load_value(values.data() + format.value_size() * offsets[doc], j, format);
  }

  double bits_per_component() const {
    std::uint64_t nnz = total_nnz();
    if (nnz == 0) return 0.0;
    return 8.0 * static_cast<double>(components.size() * sizeof(std::uint16_t)) /
           static_cast<double>(nnz);
  }
};

inline ForwardIndex build_uncompressed(const SparseDataset& ds, ValueFormat fmt) {
  if (ds.dim() > kMaxDim)
    throw validation_error("dim " + std::to_string(ds.dim()) + " exceeds " +
                           std::to_string(kMaxDim) + "; components must fit 16 bits");
  ForwardIndex fi;
  fi.dim = ds.dim();
  fi.format = fmt;
  fi.offsets.reserve(ds.size() + 1);
  fi.offsets.push_back(0);
  fi.components.reserve(ds.total_nnz());
  for (const auto& doc : ds.docs()) {
    for (std::size_t j = 0; j < doc.nnz(); ++j) {
      fi.components.push_back(static_cast<std::uint16_t>(doc.components[j]));
      append_quantized(fi.values, doc.values[j], fmt);
    }
    fi.offsets.push_back(fi.components.size());
  }
  return fi;
}

}  // namespace fidx
