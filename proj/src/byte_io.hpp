#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>

#include "pnm/error.hpp"

// Little-endian primitives shared by the binary formats.
namespace pnm::io::detail {

inline void put_u8(std::ostream& out, std::uint8_t v) {
  out.put(static_cast<char>(v));
}

inline void put_u16(std::ostream& out, std::uint16_t v) {
  put_u8(out, static_cast<std::uint8_t>(v));
  put_u8(out, static_cast<std::uint8_t>(v >> 8));
}

inline void put_u32(std::ostream& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8)
    put_u8(out, static_cast<std::uint8_t>(v >> shift));
}

inline void put_f32(std::ostream& out, float v) {
  put_u32(out, std::bit_cast<std::uint32_t>(v));
}

template <std::size_t N>
void get_bytes(std::istream& in, std::array<std::uint8_t, N>& buf,
               const char* what) {
  in.read(reinterpret_cast<char*>(buf.data()), N);
  if (static_cast<std::size_t>(in.gcount()) != N) {
    throw Error(ErrorKind::Truncated, what);
  }
}

inline std::uint8_t get_u8(std::istream& in, const char* what) {
  std::array<std::uint8_t, 1> b{};
  get_bytes(in, b, what);
  return b[0];
}

inline std::uint16_t get_u16(std::istream& in, const char* what) {
  std::array<std::uint8_t, 2> b{};
  get_bytes(in, b, what);
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

inline std::uint32_t get_u32(std::istream& in, const char* what) {
  std::array<std::uint8_t, 4> b{};
  get_bytes(in, b, what);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

inline std::uint32_t load_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace pnm::io::detail
