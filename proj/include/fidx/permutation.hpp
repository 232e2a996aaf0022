#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "fidx/common.hpp"
#include "fidx/sparse.hpp"

namespace fidx {

// Bijection on component ids, applied symmetrically to documents and queries.
// forward[old_id] = new_id.
struct Permutation {
  std::vector<std::uint32_t> forward;

  std::uint32_t dim() const { return static_cast<std::uint32_t>(forward.size()); }

  static Permutation identity(std::uint32_t dim) {
    Permutation p;
    p.forward.resize(dim);
    std::iota(p.forward.begin(), p.forward.end(), 0u);
    return p;
  }

  bool is_bijection() const {
    std::vector<bool> seen(forward.size(), false);
    for (std::uint32_t v : forward) {
      if (v >= forward.size() || seen[v]) return false;
      seen[v] = true;
    }
    return true;
  }

  Permutation inverse() const {
    Permutation inv;
    inv.forward.resize(forward.size());
    for (std::uint32_t i = 0; i < forward.size(); ++i) inv.forward[forward[i]] = i;
    return inv;
  }

  void validate(std::uint32_t dim) const {
    if (forward.size() != dim)
      throw validation_error("permutation covers " + std::to_string(forward.size()) +
                             " ids, dataset dim is " + std::to_string(dim));
    if (!is_bijection()) throw validation_error("permutation is not a bijection");
  }
};

// Remaps every document's component ids and re-sorts its (component, value)
// pairs; values travel with their components.
inline SparseDataset apply_permutation(const SparseDataset& ds, const Permutation& perm) {
  perm.validate(ds.dim());
  SparseDataset out(ds.dim());
  std::vector<std::pair<std::uint32_t, float>> pairs;
  for (const auto& doc : ds.docs()) {
    pairs.clear();
    pairs.reserve(doc.nnz());
    for (std::size_t j = 0; j < doc.nnz(); ++j)
      pairs.emplace_back(perm.forward[doc.components[j]], doc.values[j]);
    std::sort(pairs.begin(), pairs.end());
    SparseVector v;
    v.components.reserve(pairs.size());
    v.values.reserve(pairs.size());
    for (auto& [c, x] : pairs) {
      v.components.push_back(c);
      v.values.push_back(x);
    }
    out.add_unchecked(std::move(v));
  }
  return out;
}

// Permutation file: magic "PRM1", u32 dim, dim x u32 forward mapping,
// trailing crc32 of everything before it. Little-endian.
inline void save_permutation(const Permutation& p, const std::string& path) {
  std::vector<std::uint8_t> buf;
  buf.reserve(8 + 4 * p.forward.size() + 4);
  buf.insert(buf.end(), {'P', 'R', 'M', '1'});
  put_u32(buf, p.dim());
  for (std::uint32_t v : p.forward) put_u32(buf, v);
  put_u32(buf, crc32(buf));
  write_file(path, buf);
}

inline Permutation load_permutation(const std::string& path) {
  std::vector<std::uint8_t> buf = read_file(path);
  if (buf.size() < 12) throw corruption_error("permutation file too short: " + path);
  std::uint32_t stored_crc = static_cast<std::uint32_t>(buf[buf.size() - 4]) |
                             (static_cast<std::uint32_t>(buf[buf.size() - 3]) << 8) |
                             (static_cast<std::uint32_t>(buf[buf.size() - 2]) << 16) |
                             (static_cast<std::uint32_t>(buf[buf.size() - 1]) << 24);
  if (crc32({buf.data(), buf.size() - 4}) != stored_crc)
    throw corruption_error("permutation file checksum mismatch: " + path);
  ByteCursor cur({buf.data(), buf.size() - 4});
  std::uint8_t magic[4];
  cur.bytes(magic, 4);
  if (std::memcmp(magic, "PRM1", 4) != 0)
    throw corruption_error("bad magic in permutation file: " + path);
  std::uint32_t dim = cur.u32();
  Permutation p;
  p.forward.resize(dim);
  for (std::uint32_t i = 0; i < dim; ++i) p.forward[i] = cur.u32();
  if (cur.remaining() != 0) throw corruption_error("trailing bytes in permutation file: " + path);
  if (!p.is_bijection()) throw corruption_error("permutation file is not a bijection: " + path);
  return p;
}

}  // namespace fidx
