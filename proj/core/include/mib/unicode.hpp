#pragma once

#include <string>
#include <string_view>

namespace mib {

// Decodes UTF-8 to unicode scalar values. Lenient: every byte that does not
// form a valid scalar value (stray continuation, overlong form, surrogate,
// out-of-range) becomes one U+FFFD.
std::u32string decode_utf8(std::string_view utf8);

}  // namespace mib
