#include "mib/unicode.hpp"

#include <cstdint>

namespace mib {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

inline bool is_continuation(unsigned char b) { return (b & 0xC0) == 0x80; }

}  // namespace

std::u32string decode_utf8(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());

  std::size_t i = 0;
  const std::size_t n = utf8.size();
  while (i < n) {
    unsigned char b0 = static_cast<unsigned char>(utf8[i]);

    if (b0 < 0x80) {
      out.push_back(b0);
      ++i;
      continue;
    }

    int len;
    char32_t cp;
    char32_t min_cp;
    if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
      min_cp = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
      min_cp = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
      min_cp = 0x10000;
    } else {
      // stray continuation byte or invalid lead
      out.push_back(kReplacement);
      ++i;
      continue;
    }

    if (i + len > n) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }

    bool ok = true;
    for (int k = 1; k < len; ++k) {
      unsigned char bk = static_cast<unsigned char>(utf8[i + k]);
      if (!is_continuation(bk)) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (bk & 0x3F);
    }

    // overlong, surrogate and out-of-range forms are rejected, one
    // replacement per lead byte
    if (!ok || cp < min_cp || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }

    out.push_back(cp);
    i += len;
  }
  return out;
}

}  // namespace mib
