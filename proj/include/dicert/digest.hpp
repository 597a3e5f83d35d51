#pragma once

#include <cstdint>
#include <string>

namespace dicert {

// FNV-1a 64-bit, used for content-addressing curves and run configs.
class Digest {
 public:
  Digest& add(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h_ ^= p[i];
      h_ *= 0x100000001b3ULL;
    }
    return *this;
  }
  Digest& add(const std::string& s) { return add(s.data(), s.size()); }
  Digest& add(double v) { return add(&v, sizeof v); }
  Digest& add(std::uint64_t v) { return add(&v, sizeof v); }

  std::uint64_t value() const { return h_; }
  std::string hex() const;

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

}  // namespace dicert
