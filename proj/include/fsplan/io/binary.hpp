#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fsplan::io {

/// Little-endian primitive writers/readers shared by the binary formats.
class BinaryWriter {
 public:
  explicit BinaryWriter(std::ostream& os) : os_(os) {}

  void magic(std::string_view m) { os_.write(m.data(), static_cast<std::streamsize>(m.size())); }
  void u8(std::uint8_t v) { os_.put(static_cast<char>(v)); }
  void u32(std::uint32_t v) { raw(v); }
  void u64(std::uint64_t v) { raw(v); }
  void f32(float v) { raw(v); }
  void f64(double v) { raw(v); }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    os_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }

 private:
  template <typename T>
  void raw(T v) {
    static_assert(std::endian::native == std::endian::little, "little-endian host required");
    std::array<char, sizeof(T)> buf;
    std::memcpy(buf.data(), &v, sizeof(T));
    os_.write(buf.data(), sizeof(T));
  }
  std::ostream& os_;
};

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BinaryReader {
 public:
  explicit BinaryReader(std::istream& is) : is_(is) {}

  void expect_magic(std::string_view m) {
    std::string got(m.size(), '\0');
    is_.read(got.data(), static_cast<std::streamsize>(m.size()));
    if (!is_ || got != m)
      throw FormatError("bad magic: expected '" + std::string(m) + "'");
  }
  std::uint8_t u8() { return raw<std::uint8_t>(); }
  std::uint32_t u32() { return raw<std::uint32_t>(); }
  std::uint64_t u64() { return raw<std::uint64_t>(); }
  float f32() { return raw<float>(); }
  double f64() { return raw<double>(); }
  std::string str() {
    const std::uint32_t n = u32();
    if (n > (1u << 20)) throw FormatError("string too long");
    std::string s(n, '\0');
    is_.read(s.data(), n);
    if (!is_) throw FormatError("truncated file");
    return s;
  }
  std::string tag() {
    std::string t(4, '\0');
    is_.read(t.data(), 4);
    if (!is_) throw FormatError("truncated file");
    return t;
  }
  void bytes(std::uint8_t* dst, std::size_t n) {
    is_.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
    if (!is_) throw FormatError("truncated file");
  }
  bool at_end() { return is_.peek() == std::char_traits<char>::eof(); }

 private:
  template <typename T>
  T raw() {
    std::array<char, sizeof(T)> buf;
    is_.read(buf.data(), sizeof(T));
    if (!is_) throw FormatError("truncated file");
    T v;
    std::memcpy(&v, buf.data(), sizeof(T));
    return v;
  }
  std::istream& is_;
};

}  // namespace fsplan::io
