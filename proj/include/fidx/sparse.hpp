#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fidx/common.hpp"

namespace fidx {

// One sparse vector: strictly increasing component ids paired with
// non-negative finite values.
struct SparseVector {
  std::vector<std::uint32_t> components;
  std::vector<float> values;

  std::size_t nnz() const { return components.size(); }
};

inline void validate_vector(std::span<const std::uint32_t> components,
                            std::span<const float> values, std::uint32_t dim) {
  if (components.size() != values.size())
    throw validation_error("components/values length mismatch: " +
                           std::to_string(components.size()) + " vs " +
                           std::to_string(values.size()));
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (i > 0 && components[i] <= components[i - 1])
      throw validation_error("components not strictly increasing at index " + std::to_string(i));
    if (components[i] >= dim)
      throw validation_error("component " + std::to_string(components[i]) +
                             " out of range for dim " + std::to_string(dim));
    if (!std::isfinite(values[i]) || values[i] < 0.0f)
      throw validation_error("value at index " + std::to_string(i) +
                             " is not a finite non-negative number");
  }
}

// Ordered collection of sparse vectors over a fixed dimension. Document id is
// the position in the collection. Mutable while being filled, treated as
// immutable afterwards.
class SparseDataset {
 public:
  explicit SparseDataset(std::uint32_t dim) : dim_(dim) {}

  std::uint32_t dim() const { return dim_; }
  std::size_t size() const { return docs_.size(); }
  bool empty() const { return docs_.empty(); }
  const SparseVector& operator[](std::size_t i) const { return docs_[i]; }
  const std::vector<SparseVector>& docs() const { return docs_; }

  void add(std::vector<std::uint32_t> components, std::vector<float> values) {
    validate_vector(components, values, dim_);
    docs_.push_back(SparseVector{std::move(components), std::move(values)});
  }

  // Used by loaders/generators that have already validated.
  void add_unchecked(SparseVector v) { docs_.push_back(std::move(v)); }

  std::uint64_t total_nnz() const {
    std::uint64_t t = 0;
    for (const auto& d : docs_) t += d.nnz();
    return t;
  }

 private:
  std::uint32_t dim_;
  std::vector<SparseVector> docs_;
};

// Dense accumulator of length dim: query values at their component positions,
// exact zeros elsewhere. Gives the dot-product kernels constant-time gathers.
struct DenseQuery {
  std::vector<float> values;

  std::uint32_t dim() const { return static_cast<std::uint32_t>(values.size()); }

  static DenseQuery from(const SparseVector& q, std::uint32_t dim) {
    validate_vector(q.components, q.values, dim);
    DenseQuery out;
    out.values.assign(dim, 0.0f);
    for (std::size_t i = 0; i < q.components.size(); ++i) out.values[q.components[i]] = q.values[i];
    return out;
  }
};

}  // namespace fidx
