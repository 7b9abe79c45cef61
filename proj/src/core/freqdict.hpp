#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "core/lemmatizer.hpp"
#include "core/lexicon.hpp"
#include "core/tokenizer.hpp"

namespace lexfreq {

using FormCounts = std::map<std::string, std::uint64_t>;

/// Counts `norm` keys after variant canonicalization (when a lexicon is given).
FormCounts count_forms(std::span<const Token> tokens, const Lexicon* variants = nullptr);
FormCounts count_forms(std::span<const LemmatizedToken> tokens);

struct LemmaKey {
  std::string lemma;
  Pos pos = Pos::other;
  std::optional<std::string> disambiguator;
  std::optional<std::string> language;

  auto operator<=>(const LemmaKey&) const = default;
  bool operator==(const LemmaKey&) const = default;

  static LemmaKey of(const Candidate& c) { return {c.lemma, c.pos, c.disambiguator, c.language}; }
  std::string display() const;
};

struct LemmaCount {
  std::uint64_t freq = 0;
  std::set<std::string> forms;

  bool operator==(const LemmaCount&) const = default;
};

using LemmaCounts = std::map<LemmaKey, LemmaCount>;

/// Disambiguator marking lemmas counted under their surface form because
/// they were still pending.
inline constexpr const char* kPendingMark = "pending";

/// Groups by (lemma, pos, disambiguator, language). Pending tokens are an
/// error unless `allow_pending`, in which case each counts under its own
/// form with the "pending" mark.
LemmaCounts count_lemmas(std::span<const LemmatizedToken> tokens, bool allow_pending = false);

void merge(FormCounts& into, const FormCounts& from);
void merge(LemmaCounts& into, const LemmaCounts& from);

struct RankedForm {
  std::size_t rank = 0;
  std::string form;
  std::uint64_t abs_freq = 0;
  double rel_freq = 0.0;

  bool operator==(const RankedForm&) const = default;
};

struct RankedLemma {
  std::size_t rank = 0;
  LemmaKey key;
  std::uint64_t abs_freq = 0;
  double rel_freq = 0.0;
  std::size_t distinct_forms = 0;

  bool operator==(const RankedLemma&) const = default;
};

/// Descending frequency; ties in code point order of the headword.
std::vector<RankedForm> assign_ranks(const FormCounts& counts);
std::vector<RankedLemma> assign_ranks(const LemmaCounts& counts);

/// Ukrainian alphabetical order (ґ after г, є after е, і ї after и), other
/// scripts after Cyrillic; apostrophes, hyphens and accents are ignored
/// except as a final tie-break.
bool alphabetical_less(std::string_view a, std::string_view b);

struct ScriptBreakdown {
  ScriptCounts tokens{};
  ScriptCounts forms{};
  ScriptCounts lemmas{};
};

struct FrequencyDictionary {
  std::uint64_t N = 0;
  std::vector<RankedLemma> lemma_entries;
  std::vector<RankedForm> form_entries;
  std::vector<RankedLemma> alpha_index;  // same rows as lemma_entries, alphabetical
  ScriptBreakdown by_script;
};

FrequencyDictionary build_dictionary(std::span<const LemmatizedToken> lemmatized,
                                     bool allow_pending = false);

/// Assembles a dictionary from already-counted lists (the stats path).
FrequencyDictionary dictionary_from_lists(std::vector<RankedLemma> lemmas,
                                          std::vector<RankedForm> forms);

// ---- export ----------------------------------------------------------------

std::string render_headword(const LemmaKey& key);

/// rank, headword, pos, disamb, abs, rel, n_forms
std::string format_lemma_ranks(const FrequencyDictionary& fd);
/// rank, form, abs, rel
std::string format_form_ranks(const FrequencyDictionary& fd);
/// headword, pos, disamb, abs, rel, n_forms
std::string format_alpha_index(const FrequencyDictionary& fd);

std::vector<RankedLemma> parse_lemma_ranks(std::string_view content, std::string_view source);
std::vector<RankedForm> parse_form_ranks(std::string_view content, std::string_view source);

inline constexpr const char* kLemmaRankFile = "lemmas_by_freq.tsv";
inline constexpr const char* kFormRankFile = "forms_by_freq.tsv";
inline constexpr const char* kAlphaFile = "lemmas_alpha.tsv";

/// Reads the two rank lists written by a build.
FrequencyDictionary read_dictionary(const std::filesystem::path& dir);

/// 64-bit FNV-1a of a byte string, as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace lexfreq
