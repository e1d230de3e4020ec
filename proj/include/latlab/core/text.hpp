#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace latlab {

std::vector<std::string> split_ws(std::string_view s);
std::vector<std::string> split_on(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string lower_ascii(std::string_view s);
std::string trim(std::string_view s);

// Canonical answer normalization used by every scorer and verifier:
// trim, ASCII case-fold, strip punctuation, collapse internal whitespace.
std::string normalize_answer(std::string_view s);

bool starts_with(std::string_view s, std::string_view prefix);
bool contains(std::string_view haystack, std::string_view needle);

}  // namespace latlab
