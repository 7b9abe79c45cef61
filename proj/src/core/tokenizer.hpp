#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "core/ingest.hpp"

namespace lexfreq {

enum class Script { cyrillic, latin, digit, mixed };

const char* to_string(Script script) noexcept;

struct Token {
  std::string surface;  // as in the clean text
  std::string norm;     // case-folded, apostrophes unified, stress removed
  Script script = Script::cyrillic;
  std::string doc_id;
  std::size_t char_offset = 0;
  std::size_t char_length = 0;
  std::optional<std::string> sense_tag;
  bool hyphenated = false;
  bool standalone_particle = false;

  bool operator==(const Token&) const = default;
};

struct TokenizerOptions {
  OrthographyProfile profile = OrthographyProfile::modern_edition;
  /// Lower-cased forms whose stress marks distinguish meaning; for these
  /// the accent survives into `norm`.
  std::unordered_set<std::string> accent_keep;
};

/// Case fold, unify apostrophe and hyphen variants, and drop stress marks
/// unless the accented form is registered in `accent_keep`.
std::string normalize_form(std::string_view surface,
                           const std::unordered_set<std::string>* accent_keep = nullptr);

/// A word is a maximal run of letters, apostrophes, hyphens and combining
/// accents, or a maximal run of digits. Leading and trailing apostrophes and
/// hyphens belong to the surrounding delimiters.
std::vector<Token> tokenize(const CleanText& clean, const TokenizerOptions& options = {});

Script classify_script(std::string_view surface);

enum class Enclitic { bo, no, taky, to };

const char* to_string(Enclitic particle) noexcept;

struct EncliticSplit {
  std::string base;
  Enclitic particle;

  bool operator==(const EncliticSplit&) const = default;
};

/// Splits a trailing -бо/-но/-таки/-то off a hyphenated token (on `norm`).
std::optional<EncliticSplit> detect_hyphen_enclitic(const Token& token);

using ScriptCounts = std::array<std::size_t, 4>;  // indexed by Script

ScriptCounts count_script_classes(std::span<const Token> tokens);

/// One row of the token stream export.
std::string format_token_row(const Token& token);

}  // namespace lexfreq
