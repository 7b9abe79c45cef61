#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace lexfreq {

enum class Pos {
  noun,
  noun_pl_tantum,
  adjective,
  pronoun,
  numeral,
  verb,
  participle,
  adverb,
  preposition,
  conjunction,
  particle,
  interjection,
  abbreviation,
  foreign,
  other,
};

const char* to_string(Pos pos) noexcept;
Pos parse_pos(std::string_view name);

/// Parts of speech whose hyphenated particles (-бо, -но, -таки, -то) are
/// stripped before lemmatizing.
bool strips_enclitic(Pos pos) noexcept;

struct Candidate {
  std::string lemma;
  Pos pos = Pos::other;
  std::optional<std::string> disambiguator;
  std::optional<std::string> language;

  auto operator<=>(const Candidate&) const = default;
  bool operator==(const Candidate&) const = default;

  /// "МАТИ (дієсл.)", or just the lemma when there is no disambiguator.
  std::string display() const;
};

/// Cyrillic lemmas are stored upper-case; other scripts as written.
std::string normalize_lemma(std::string_view lemma);

struct RankedCandidate {
  Candidate candidate;
  int priority = 0;

  bool operator==(const RankedCandidate&) const = default;
};

struct LexiconEntry {
  std::string form_key;
  std::vector<RankedCandidate> candidates;  // highest priority first

  bool operator==(const LexiconEntry&) const = default;
};

enum class VariantKind { euphonic, orthographic };

const char* to_string(VariantKind kind) noexcept;

struct VariantGroup {
  std::string head;
  std::set<std::string> members;  // includes head
  VariantKind kind = VariantKind::euphonic;

  bool operator==(const VariantGroup&) const = default;
};

/// Euphonic alternations and spelling doublets that collapse to one form.
std::vector<VariantGroup> default_variant_groups();

struct Occurrence {
  std::string doc_id;
  std::size_t char_offset = 0;

  auto operator<=>(const Occurrence&) const = default;
};

enum class DecisionScope { global, occurrence };

const char* to_string(DecisionScope scope) noexcept;
DecisionScope parse_scope(std::string_view name);

struct Decision {
  std::string form_key;
  DecisionScope scope = DecisionScope::global;
  std::optional<Occurrence> occurrence;
  Candidate chosen;
  std::string annotator;
  std::string timestamp;  // ISO 8601, UTC

  bool operator==(const Decision&) const = default;
};

/// Occurrence -> form key of the token seen there in the last run.
using OccurrenceIndex = std::map<Occurrence, std::string>;

class Lexicon {
public:
  /// Adds a candidate for `form_key` (normalized). A candidate already
  /// present keeps its position and takes the higher priority.
  void add(std::string_view form_key, Candidate candidate, int priority = 0);

  void add_variant_group(VariantGroup group);
  /// Adds the built-in groups whose members do not clash with loaded ones.
  void add_default_variant_groups();
  const std::vector<VariantGroup>& variant_groups() const { return groups_; }

  std::string canonicalize_variant(std::string_view form) const;

  /// Candidates ordered by priority; empty for an unknown form.
  std::vector<Candidate> lookup(std::string_view form_key) const;
  const LexiconEntry* find(std::string_view form_key) const;

  /// The candidate a lookup resolves to without asking: the only one, or
  /// one with strictly greater priority than the rest.
  std::optional<Candidate> preferred(std::string_view form_key) const;
  /// True when the preference comes from priority rather than uniqueness.
  bool preferred_by_priority(std::string_view form_key) const;

  std::optional<Candidate> occurrence_binding(const Occurrence& at) const;
  const std::map<Occurrence, std::pair<std::string, Candidate>>& occurrence_bindings() const {
    return bindings_;
  }

  /// Global decisions raise the chosen candidate to the top of its entry;
  /// occurrence decisions bind one token. When `known` is given, occurrence
  /// references must be present in it.
  void record_decision(const Decision& decision, const OccurrenceIndex* known = nullptr);
  const std::vector<Decision>& decision_log() const { return log_; }

  /// Lower-cased form keys carrying a stress mark.
  std::unordered_set<std::string> accented_forms() const;

  const std::map<std::string, LexiconEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  /// Compares entries, variant tables and occurrence bindings.
  bool operator==(const Lexicon& other) const;

private:
  std::map<std::string, LexiconEntry> entries_;
  std::vector<VariantGroup> groups_;
  std::map<std::string, std::size_t, std::less<>> member_to_group_;
  std::map<Occurrence, std::pair<std::string, Candidate>> bindings_;
  std::vector<Decision> log_;
};

/// Lexicon TSV: form_key, lemma, pos, disambiguator?, language?, priority?
/// plus directive rows "@variant kind head members" (members '|'-separated)
/// and "@occurrence doc_id offset form_key lemma pos disambiguator? language?".
Lexicon parse_lexicon(std::string_view content, std::string_view source = "lexicon");
Lexicon load_lexicon(const std::filesystem::path& path);
std::string serialize_lexicon(const Lexicon& lexicon);
void save_lexicon(const Lexicon& lexicon, const std::filesystem::path& path);

/// Decision log TSV: timestamp, annotator, scope, doc_id?, offset?, form_key,
/// lemma, pos, disambiguator?, language?
std::string format_decision(const Decision& decision);
Decision parse_decision(std::string_view line, std::size_t lineno = 0);
std::vector<Decision> load_decision_log(const std::filesystem::path& path);
/// Appends one line with a single write and flushes it to disk.
void append_decision(const std::filesystem::path& path, const Decision& decision);

std::string utc_timestamp();

}  // namespace lexfreq
