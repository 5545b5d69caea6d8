#pragma once

#include <string>

namespace fragmap {

// Porter's 1980 suffix-stripping algorithm. The input is lowercased first;
// tokens containing anything outside a-z come back unchanged (numbers,
// hyphenated junk, ...). Used for both value indexing and keyword lookup so
// the two sides always agree.
std::string porter_stem(const std::string& token);

}  // namespace fragmap
