#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace memoria::kg {

/// Lowercases ASCII, splits on anything that is not a letter or digit, and
/// drops tokens shorter than two characters. Bytes of multi-byte UTF-8
/// sequences count as letters, so accented names stay whole; length is
/// measured in code points. Token order and repeats are preserved.
std::vector<std::string> tokenize(std::string_view text);

} // namespace memoria::kg
