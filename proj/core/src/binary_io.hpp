#pragma once

// Little-endian primitives shared by the tensor and weight file formats.

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>

#include "locnoise/errors.hpp"

namespace locnoise::detail {

inline void write_u32(std::ostream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v & 0xFFu), static_cast<char>((v >> 8) & 0xFFu),
                         static_cast<char>((v >> 16) & 0xFFu),
                         static_cast<char>((v >> 24) & 0xFFu)};
  out.write(bytes, 4);
}

inline void write_f32(std::ostream& out, float v) { write_u32(out, std::bit_cast<std::uint32_t>(v)); }

inline void write_f32s(std::ostream& out, std::span<const float> values) {
  for (float v : values) write_f32(out, v);
}

/// Reads from a stream and reports truncation as IoError naming `what`.
class LittleEndianReader {
 public:
  LittleEndianReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  void read_bytes(char* dst, std::size_t n, const char* what) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw IoError(source_ + ": truncated while reading " + what);
    }
  }

  std::uint8_t u8(const char* what) {
    char b = 0;
    read_bytes(&b, 1, what);
    return static_cast<std::uint8_t>(b);
  }

  std::uint32_t u32(const char* what) {
    unsigned char b[4];
    read_bytes(reinterpret_cast<char*>(b), 4, what);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
  }

  float f32(const char* what) { return std::bit_cast<float>(u32(what)); }

  void f32s(std::span<float> dst, const char* what) {
    for (float& v : dst) v = f32(what);
  }

  bool at_end() { return in_.peek() == std::char_traits<char>::eof(); }

  /// Throws IoError unless `count` floats can still be read.
  void require_floats(std::uint64_t count, const char* what) {
    const auto here = in_.tellg();
    in_.seekg(0, std::ios::end);
    const auto end = in_.tellg();
    in_.seekg(here);
    if (here < 0 || end < here ||
        static_cast<std::uint64_t>(end - here) / sizeof(float) < count) {
      throw IoError(source_ + ": truncated while reading " + what);
    }
  }

  const std::string& source() const { return source_; }

 private:
  std::istream& in_;
  std::string source_;
};

}  // namespace locnoise::detail
