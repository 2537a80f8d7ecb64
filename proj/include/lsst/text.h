#ifndef LSST_TEXT_H
#define LSST_TEXT_H

#include <string>
#include <string_view>

namespace lsst {

// Words are sequences of code points. Letters are ordinary code points;
// values above kMaxCodePoint are reserved for symbolic placeholders.
using Word = std::u32string;

inline constexpr char32_t kMaxCodePoint = 0x10FFFF;

std::u32string to_u32(std::string_view utf8);
std::string to_utf8(std::u32string_view text);
std::string to_utf8(char32_t c);

}  // namespace lsst

#endif  // LSST_TEXT_H
