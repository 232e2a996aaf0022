#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fidx {

// Input violates a documented contract (bad arguments, malformed dataset).
class validation_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Stored bytes cannot be decoded back into a consistent structure.
class corruption_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class io_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- little-endian packing -------------------------------------------------

inline void put_u8(std::vector<std::uint8_t>& out, std::uint8_t v) { out.push_back(v); }

inline void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline void put_f32(std::vector<std::uint8_t>& out, float v) {
  put_u32(out, std::bit_cast<std::uint32_t>(v));
}

// Bounds-checked cursor over a byte buffer. Throws corruption_error on
// out-of-range reads so truncated files surface as distinct errors.
class ByteCursor {
 public:
  explicit ByteCursor(std::span<const std::uint8_t> data)
      : p_(data.data()), end_(data.data() + data.size()) {}

  std::size_t remaining() const { return static_cast<std::size_t>(end_ - p_); }

  std::uint8_t u8() {
    need(1);
    return *p_++;
  }
  std::uint16_t u16() {
    need(2);
    std::uint16_t v = static_cast<std::uint16_t>(p_[0] | (p_[1] << 8));
    p_ += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p_[i]) << (8 * i);
    p_ += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p_[i]) << (8 * i);
    p_ += 8;
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }

  void bytes(void* dst, std::size_t n) {
    need(n);
    std::memcpy(dst, p_, n);
    p_ += n;
  }

 private:
  void need(std::size_t n) const {
    if (remaining() < n) throw corruption_error("unexpected end of buffer");
  }
  const std::uint8_t* p_;
  const std::uint8_t* end_;
};

// --- crc32 (reflected, poly 0xEDB88320) -------------------------------------

namespace detail {
constexpr std::array<std::uint32_t, 256> make_crc32_table() {
  std::array<std::uint32_t, 256> t{};
  for (std::uint32_t i = 0; i < 256; ++i) {
    std::uint32_t c = i;
    for (int j = 0; j < 8; ++j) c = (c & 1) ? (0xEDB88320u ^ (c >> 1)) : (c >> 1);
    t[i] = c;
  }
  return t;
}
inline constexpr auto kCrc32Table = make_crc32_table();
}  // namespace detail

inline std::uint32_t crc32(std::span<const std::uint8_t> data, std::uint32_t seed = 0) {
  std::uint32_t c = ~seed;
  for (std::uint8_t b : data) c = detail::kCrc32Table[(c ^ b) & 0xFFu] ^ (c >> 8);
  return ~c;
}

// --- whole-file io -----------------------------------------------------------

inline std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open file: " + path);
  in.seekg(0, std::ios::end);
  auto size = in.tellg();
  in.seekg(0, std::ios::beg);
  std::vector<std::uint8_t> buf(static_cast<std::size_t>(size));
  if (size > 0) in.read(reinterpret_cast<char*>(buf.data()), size);
  if (!in) throw io_error("cannot read file: " + path);
  return buf;
}

inline void write_file(const std::string& path, std::span<const std::uint8_t> data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open file for writing: " + path);
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
  if (!out) throw io_error("cannot write file: " + path);
}

}  // namespace fidx
