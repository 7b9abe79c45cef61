#pragma once

// UTF-8 coding plus the small slice of Unicode character data the
// tokenizer needs: letter/script classes and simple case mapping for
// Latin, Greek and Cyrillic.

#include <string>
#include <string_view>

namespace lexfreq::utf8 {

/// Decodes UTF-8; throws Error(encoding) naming the byte offset of the
/// first invalid sequence.
std::u32string decode(std::string_view bytes);

void append(std::string& out, char32_t cp);
std::string encode(std::u32string_view text);

char32_t to_lower(char32_t cp) noexcept;
char32_t to_upper(char32_t cp) noexcept;
std::u32string lower(std::u32string_view text);
std::u32string upper(std::u32string_view text);
std::string lower(std::string_view text);
std::string upper(std::string_view text);

bool is_cyrillic_letter(char32_t cp) noexcept;
bool is_latin_letter(char32_t cp) noexcept;
bool is_letter(char32_t cp) noexcept;
bool is_digit(char32_t cp) noexcept;
/// Combining diacritics (U+0300..U+036F); accent marks in the corpus.
bool is_combining_mark(char32_t cp) noexcept;
bool is_stress_accent(char32_t cp) noexcept;
bool is_apostrophe(char32_t cp) noexcept;
bool is_hyphen(char32_t cp) noexcept;
bool is_space(char32_t cp) noexcept;

inline constexpr char32_t kApostrophe = U'\'';
inline constexpr char32_t kHyphen = U'-';

}  // namespace lexfreq::utf8
