#pragma once

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "gwpt/error.hpp"

// Little-endian primitives used by the model archive. Floats travel as
// IEEE-754 bit patterns, so save/load roundtrips are bit-exact.

namespace gwpt::serialize {

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void u8(std::uint8_t v) { out_.put(static_cast<char>(v)); }

  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.put(static_cast<char>((v >> (8 * i)) & 0xFF));
  }

  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.put(static_cast<char>((v >> (8 * i)) & 0xFF));
  }

  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

  void str(const std::string& s) {
    u64(s.size());
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }

  void f64_vec(const std::vector<double>& v) {
    u64(v.size());
    for (double x : v) f64(x);
  }

  void u32_vec(const std::vector<std::uint32_t>& v) {
    u64(v.size());
    for (std::uint32_t x : v) u32(x);
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::uint8_t u8() {
    int c = in_.get();
    if (c == std::istream::traits_type::eof()) fail();
    return static_cast<std::uint8_t>(c);
  }

  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
    return v;
  }

  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
    return v;
  }

  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  double f64() { return std::bit_cast<double>(u64()); }

  std::string str() {
    const std::uint64_t len = u64();
    check_len(len);
    std::string s(len, '\0');
    in_.read(s.data(), static_cast<std::streamsize>(len));
    if (static_cast<std::uint64_t>(in_.gcount()) != len) fail();
    return s;
  }

  std::vector<double> f64_vec() {
    const std::uint64_t len = u64();
    check_len(len);
    std::vector<double> v(len);
    for (auto& x : v) x = f64();
    return v;
  }

  std::vector<std::uint32_t> u32_vec() {
    const std::uint64_t len = u64();
    check_len(len);
    std::vector<std::uint32_t> v(len);
    for (auto& x : v) x = u32();
    return v;
  }

 private:
  [[noreturn]] void fail() const {
    throw Error::bad_input("archive: truncated or corrupt data");
  }
  void check_len(std::uint64_t len) const {
    // Guards against absurd lengths from corrupt headers.
    if (len > (1ull << 40)) fail();
  }

  std::istream& in_;
};

}  // namespace gwpt::serialize
