#ifndef DSIM_SRC_BINARY_H_
#define DSIM_SRC_BINARY_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

#include "dsim/errors.h"

namespace dsim::internal {

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian platforms are not supported");

template <typename T>
T ToLittle(T value) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) {
      std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    }
    std::memcpy(&value, bytes, sizeof(T));
  }
  return value;
}

class BinaryWriter {
 public:
  template <typename T>
  void Put(T value) {
    value = ToLittle(value);
    char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    out_.append(bytes, sizeof(T));
  }
  void PutRaw(std::string_view bytes) { out_.append(bytes); }
  void PutString(std::string_view s) {
    Put(static_cast<std::uint32_t>(s.size()));
    PutRaw(s);
  }
  std::string Take() { return std::move(out_); }

 private:
  std::string out_;
};

// Bounds-checked little-endian cursor. Every failure reports the byte offset
// at which the missing or bad field starts.
class BinaryReader {
 public:
  BinaryReader(std::string_view bytes, const std::string& source)
      : bytes_(bytes), source_(source) {}

  std::uint64_t offset() const { return offset_; }
  std::uint64_t remaining() const { return bytes_.size() - offset_; }

  template <typename T>
  T Get(const char* what) {
    Require(sizeof(T), what);
    T value;
    std::memcpy(&value, bytes_.data() + offset_, sizeof(T));
    offset_ += sizeof(T);
    return ToLittle(value);
  }

  std::string_view GetRaw(std::size_t n, const char* what) {
    Require(n, what);
    std::string_view out = bytes_.substr(offset_, n);
    offset_ += n;
    return out;
  }

  std::string GetString(const char* what) {
    const std::uint64_t at = offset_;
    const auto n = Get<std::uint32_t>(what);
    if (n > remaining()) {
      throw ParseErrorAtOffset(source_, at,
                               std::string("truncated ") + what + " (length " +
                                   std::to_string(n) + ")");
    }
    return std::string(GetRaw(n, what));
  }

  [[noreturn]] void Fail(std::uint64_t at, const std::string& what) const {
    throw ParseErrorAtOffset(source_, at, what);
  }

 private:
  void Require(std::size_t n, const char* what) const {
    if (n > remaining()) {
      Fail(offset_, std::string("truncated ") + what);
    }
  }

  std::string_view bytes_;
  const std::string& source_;
  std::uint64_t offset_ = 0;
};

}  // namespace dsim::internal

#endif  // DSIM_SRC_BINARY_H_
