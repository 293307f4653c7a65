#pragma once

// Unicode handling shared by every module. The character unit throughout the
// toolkit is the Unicode scalar value after NFC composition.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace gtcurate::text {

// Throws FormatError on ill-formed UTF-8.
std::u32string decode_utf8(std::string_view utf8);
std::string encode_utf8(std::u32string_view chars);

bool is_space(char32_t c) noexcept;

std::string to_nfc(std::string_view utf8);
bool is_nfc(std::string_view utf8);

/// Strips leading and trailing Unicode whitespace; interior runs are kept.
std::string trim(std::string_view utf8);
std::u32string_view trim_right(std::u32string_view chars) noexcept;

/// NFC followed by trim, the ingestion normal form for line texts.
std::string normalize_line(std::string_view utf8);
bool is_normalized_line(std::string_view utf8);

std::size_t char_count(std::string_view utf8);

/// Maximal runs of non-whitespace characters.
std::vector<std::u32string> split_words(std::u32string_view chars);
std::size_t word_count(std::string_view utf8);

}  // namespace gtcurate::text
