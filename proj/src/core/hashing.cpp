#include "latlab/core/hashing.hpp"

#include <fstream>

#include "latlab/core/errors.hpp"

namespace latlab {

std::string hash_hex(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

std::uint64_t hash_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw DataError("cannot open for hashing: " + p.string());
  StreamHash h;
  char buf[1 << 16];
  while (f) {
    f.read(buf, sizeof buf);
    std::streamsize got = f.gcount();
    if (got > 0) h.update(std::string_view(buf, static_cast<std::size_t>(got)));
  }
  return h.value();
}

std::string hash_file_hex(const std::filesystem::path& p) { return hash_hex(hash_file(p)); }

}  // namespace latlab
