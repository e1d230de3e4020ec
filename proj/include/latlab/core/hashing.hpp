#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "latlab/core/rng.hpp"

namespace latlab {

// Incremental FNV-1a, for hashing several parts into one integrity checksum.
// These hashes gate stage caching and manifest identity; they are integrity
// checks, not cryptography.
class StreamHash {
 public:
  StreamHash& update(std::string_view bytes) {
    for (unsigned char c : bytes) {
      h_ ^= c;
      h_ *= 1099511628211ull;
    }
    return *this;
  }
  StreamHash& update_u64(std::uint64_t v) {
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    return update(std::string_view(buf, 8));
  }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 1469598103934665603ull;
};

std::string hash_hex(std::uint64_t h);
std::uint64_t hash_file(const std::filesystem::path& p);
std::string hash_file_hex(const std::filesystem::path& p);

}  // namespace latlab
