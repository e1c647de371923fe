#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "obf/errors.hpp"

namespace obf {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

// Bounds-checked little-endian readers. All offsets are absolute.
inline std::uint8_t read_u8(ByteView b, std::size_t off) {
  if (off + 1 > b.size()) raise(Errc::OutOfBounds, "read_u8 at " + std::to_string(off));
  return b[off];
}

inline std::uint16_t read_u16(ByteView b, std::size_t off) {
  if (off + 2 > b.size()) raise(Errc::OutOfBounds, "read_u16 at " + std::to_string(off));
  return static_cast<std::uint16_t>(b[off] | (b[off + 1] << 8));
}

inline std::uint32_t read_u32(ByteView b, std::size_t off) {
  if (off + 4 > b.size()) raise(Errc::OutOfBounds, "read_u32 at " + std::to_string(off));
  return static_cast<std::uint32_t>(b[off]) | (static_cast<std::uint32_t>(b[off + 1]) << 8) |
         (static_cast<std::uint32_t>(b[off + 2]) << 16) |
         (static_cast<std::uint32_t>(b[off + 3]) << 24);
}

inline std::uint64_t read_u64(ByteView b, std::size_t off) {
  if (off + 8 > b.size()) raise(Errc::OutOfBounds, "read_u64 at " + std::to_string(off));
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[off + static_cast<std::size_t>(i)];
  return v;
}

inline void write_u16(Bytes& b, std::size_t off, std::uint16_t v) {
  if (off + 2 > b.size()) raise(Errc::OutOfBounds, "write_u16 at " + std::to_string(off));
  b[off] = static_cast<std::uint8_t>(v & 0xFF);
  b[off + 1] = static_cast<std::uint8_t>(v >> 8);
}

inline void write_u32(Bytes& b, std::size_t off, std::uint32_t v) {
  if (off + 4 > b.size()) raise(Errc::OutOfBounds, "write_u32 at " + std::to_string(off));
  for (int i = 0; i < 4; ++i) b[off + static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF);
}

inline void write_u64(Bytes& b, std::size_t off, std::uint64_t v) {
  if (off + 8 > b.size()) raise(Errc::OutOfBounds, "write_u64 at " + std::to_string(off));
  for (int i = 0; i < 8; ++i) b[off + static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF);
}

inline void append_u16(Bytes& b, std::uint16_t v) {
  b.push_back(static_cast<std::uint8_t>(v & 0xFF));
  b.push_back(static_cast<std::uint8_t>(v >> 8));
}

inline void append_u32(Bytes& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

inline void append_u64(Bytes& b, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) b.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

template <typename T>
inline T align_up(T v, T alignment) {
  if (alignment == 0) return v;
  T rem = v % alignment;
  return rem == 0 ? v : v + (alignment - rem);
}

// Shannon entropy in bits per byte, range [0, 8]. Empty input yields 0.
double byte_entropy(ByteView data);

// Fraction of bytes in the printable ASCII range [0x20, 0x7E].
double printable_fraction(ByteView data);

// SHA-256 as a lowercase hex string.
std::string sha256_hex(ByteView data);

Bytes read_file(const std::string& path);
void write_file(const std::string& path, ByteView data);

}  // namespace obf
