#include "gtcurate/text.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "gtcurate/error.hpp"

namespace gtcurate::text {

namespace {

const icu::Normalizer2& nfc_instance() {
  UErrorCode ec = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(ec);
  if (U_FAILURE(ec) || nfc == nullptr) {
    throw Error(std::string("ICU NFC normalizer unavailable: ") + u_errorName(ec));
  }
  return *nfc;
}

icu::UnicodeString to_icu(std::string_view utf8) {
  // Validates first so ill-formed input is reported instead of silently
  // replaced with U+FFFD.
  (void)decode_utf8(utf8);
  return icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
}

}  // namespace

std::u32string decode_utf8(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
  const auto length = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < length) {
    const int32_t at = i;
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) {
      throw FormatError("utf-8", 0, "ill-formed UTF-8 at byte offset " + std::to_string(at));
    }
    out.push_back(static_cast<char32_t>(c));
  }
  return out;
}

std::string encode_utf8(std::u32string_view chars) {
  std::string out;
  out.reserve(chars.size());
  for (char32_t c : chars) {
    uint8_t buf[U8_MAX_LENGTH];
    int32_t n = 0;
    U8_APPEND_UNSAFE(buf, n, static_cast<UChar32>(c));
    out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
  }
  return out;
}

bool is_space(char32_t c) noexcept { return u_isUWhiteSpace(static_cast<UChar32>(c)); }

std::string to_nfc(std::string_view utf8) {
  UErrorCode ec = U_ZERO_ERROR;
  const icu::UnicodeString normalized = nfc_instance().normalize(to_icu(utf8), ec);
  if (U_FAILURE(ec)) throw Error(std::string("NFC normalization failed: ") + u_errorName(ec));
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

bool is_nfc(std::string_view utf8) {
  UErrorCode ec = U_ZERO_ERROR;
  const bool yes = nfc_instance().isNormalized(to_icu(utf8), ec);
  if (U_FAILURE(ec)) throw Error(std::string("NFC check failed: ") + u_errorName(ec));
  return yes;
}

std::u32string_view trim_right(std::u32string_view chars) noexcept {
  while (!chars.empty() && is_space(chars.back())) chars.remove_suffix(1);
  return chars;
}

std::string trim(std::string_view utf8) {
  std::u32string_view chars;
  const std::u32string decoded = decode_utf8(utf8);
  chars = decoded;
  while (!chars.empty() && is_space(chars.front())) chars.remove_prefix(1);
  return encode_utf8(trim_right(chars));
}

std::string normalize_line(std::string_view utf8) { return trim(to_nfc(utf8)); }

bool is_normalized_line(std::string_view utf8) { return is_nfc(utf8) && trim(utf8).size() == utf8.size(); }

std::size_t char_count(std::string_view utf8) {
  std::size_t n = 0;
  const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
  const auto length = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) throw FormatError("utf-8", 0, "ill-formed UTF-8");
    ++n;
  }
  return n;
}

std::vector<std::u32string> split_words(std::u32string_view chars) {
  std::vector<std::u32string> words;
  std::size_t i = 0;
  while (i < chars.size()) {
    while (i < chars.size() && is_space(chars[i])) ++i;
    const std::size_t start = i;
    while (i < chars.size() && !is_space(chars[i])) ++i;
    if (i > start) words.emplace_back(chars.substr(start, i - start));
  }
  return words;
}

std::size_t word_count(std::string_view utf8) { return split_words(decode_utf8(utf8)).size(); }

}  // namespace gtcurate::text
