#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "core/lexicon.hpp"
#include "core/tokenizer.hpp"

namespace lexfreq {

enum class Resolution {
  lexicon_unique,
  sense_annotation,
  human_decision,
  self_lemma,          // digit strings are their own lemma
  self_lemma_unknown,  // lexicon keeps the wordform as-is ("?" entries)
  pending,
};

const char* to_string(Resolution r) noexcept;

struct LemmatizedToken {
  Token token;
  std::string form_key;    // variant-canonical norm; the wordform-list key
  std::string lookup_key;  // key the lexicon was asked about
  std::optional<Candidate> lemma;
  Resolution resolution = Resolution::pending;

  bool operator==(const LemmatizedToken&) const = default;
};

struct KwicLine {
  std::string left;
  std::string keyword;
  std::string right;

  bool operator==(const KwicLine&) const = default;
};

struct AmbiguityItem {
  Occurrence occurrence;
  std::string form_key;
  std::vector<Candidate> candidates;  // empty for an unknown form
  KwicLine kwic;

  bool operator==(const AmbiguityItem&) const = default;
};

struct LemmatizeResult {
  std::vector<LemmatizedToken> tokens;
  std::vector<AmbiguityItem> queue;
  /// Candidates authored from sense tags that matched no lexicon entry.
  std::vector<std::string> notes;
};

// ---- reduction schemes -----------------------------------------------------

using FeatureSet = std::set<std::string>;

struct ParadigmRow {
  std::string form;
  FeatureSet features;
};

/// All inflected forms of one word, with grammatical features per form.
/// Paradigm-wide flags: "pluralia_tantum", "person_class", "suppletive".
struct Paradigm {
  std::string id;
  Pos pos = Pos::other;
  std::optional<std::string> disambiguator;
  std::vector<ParadigmRow> rows;
  FeatureSet flags;
};

/// Picks the dictionary form of `form` inside its paradigm according to the
/// part-of-speech scheme: nouns to nom.sg (pluralia tantum and person-class
/// plurals to nom.pl), adjectives and participles to masc.nom.sg of the
/// positive degree (comparative for suppletive paradigms), verbs to the
/// infinitive, adverbs to the positive degree, pronouns and numerals to the
/// nominative. Invariable parts of speech return the form itself.
std::string reduce_by_scheme(std::string_view form, Pos pos, const FeatureSet& features,
                             const Paradigm& paradigm);

/// TSV rows: paradigm_id, pos, form, features (comma-separated), disambiguator?
std::vector<Paradigm> parse_paradigms(std::string_view content, std::string_view source = "paradigms");
std::vector<Paradigm> load_paradigms(const std::filesystem::path& path);

/// Registers every paradigm form with its reduced lemma.
void add_paradigms(Lexicon& lexicon, std::span<const Paradigm> paradigms);

// ---- enclitics and stream --------------------------------------------------

struct EncliticResolution {
  std::string effective_key;
  std::optional<EncliticSplit> split;
  bool particle_stripped = false;
  /// Lemma for a function word that keeps its particle (ДУЖЕ-ТО).
  std::optional<Candidate> kept_particle_lemma;
};

EncliticResolution strip_enclitic_if_content_word(const Token& token, const Lexicon& lexicon);

LemmatizeResult lemmatize_stream(std::span<const Token> tokens, const Lexicon& lexicon,
                                 std::size_t kwic_width = 5);

struct ApplyReport {
  std::size_t resolved = 0;
  std::vector<std::string> warnings;
};

/// Resolves pending tokens covered by a decision. For one key, the latest
/// global decision wins.
ApplyReport apply_decisions(std::vector<LemmatizedToken>& tokens,
                            std::span<const Decision> decisions, const Lexicon& lexicon);

/// Ambiguity items for every pending token, ordered by (doc_id, offset).
std::vector<AmbiguityItem> build_queue(std::span<const LemmatizedToken> tokens,
                                       const Lexicon& lexicon, std::size_t kwic_width = 5);

/// Context window of `width` tokens on each side, within the token's document.
KwicLine kwic_at(std::span<const Token> tokens, std::size_t index, std::size_t width);
KwicLine kwic_at(std::span<const LemmatizedToken> tokens, std::size_t index, std::size_t width);

std::string format_queue_row(const AmbiguityItem& item);

}  // namespace lexfreq
