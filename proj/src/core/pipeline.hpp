#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "core/freqdict.hpp"
#include "core/ingest.hpp"
#include "core/lemmatizer.hpp"
#include "core/lexicon.hpp"
#include "core/quantstats.hpp"

namespace lexfreq {

struct RunConfig {
  std::filesystem::path manifest;
  std::filesystem::path lexicon;
  std::optional<std::filesystem::path> decision_log;
  std::optional<std::filesystem::path> paradigms;
  /// Overrides the per-document profile of the manifest.
  std::optional<OrthographyProfile> profile;
  std::filesystem::path out_dir = "out";
  std::size_t K = 10;
  bool allow_pending = false;
  bool form_based_indices = false;
  bool default_variants = true;
  bool emit_tokens = false;
  std::size_t kwic_width = 5;
  NoteMarkers notes;
};

struct BuildSummary {
  std::uint64_t N = 0;
  std::size_t V_form = 0;
  std::size_t V_lemma = 0;
  std::size_t pending = 0;
  bool lemma_lists_written = false;
  std::vector<std::string> warnings;
};

struct Progress {
  std::size_t total = 0;
  std::size_t resolved = 0;
  std::size_t pending = 0;
  std::size_t queue_items = 0;
};

struct KwicHit {
  Occurrence occurrence;
  KwicLine line;
};

inline constexpr const char* kQueueFile = "queue.tsv";
inline constexpr const char* kProfileFile = "profile.json";
inline constexpr const char* kFitsFile = "fits.tsv";
inline constexpr const char* kPlotFile = "rankfreq_plot.tsv";
inline constexpr const char* kTokensFile = "tokens.tsv";
inline constexpr const char* kComparisonFile = "comparison.tsv";

/// The corpus, lexicon and decision log of one run, plus the lemmatized
/// token stream derived from them. Not synchronized; callers serialize
/// writers.
class Session {
public:
  explicit Session(RunConfig config);

  /// Reads manifest, documents, lexicon, paradigms and the decision log.
  void load();
  /// Tokenizes and lemmatizes every document and applies logged decisions.
  void run();
  /// load() + run() + writes all artifacts to the output directory.
  BuildSummary build();

  const RunConfig& config() const { return config_; }
  const Lexicon& lexicon() const { return lexicon_; }
  const std::vector<LemmatizedToken>& tokens() const { return tokens_; }
  const std::vector<AmbiguityItem>& queue() const { return queue_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  Progress progress() const;

  /// Every occurrence whose form key matches `form` after normalization.
  std::vector<KwicHit> kwic(std::string_view form, std::size_t width) const;

  /// Validates, appends to the decision log, records in the in-memory
  /// lexicon and resolves the affected pending tokens.
  void post_decision(Decision decision);
  /// Re-lemmatizes against the in-memory lexicon.
  void rerun();

  /// Validates every decision in `path`, appends them to the session log
  /// and saves global and occurrence decisions into the lexicon file.
  std::size_t import_decisions(const std::filesystem::path& path);

  void write_queue(const std::filesystem::path& path) const;

private:
  void rebuild_queue();

  RunConfig config_;
  bool loaded_ = false;
  std::vector<SourceDocument> docs_;
  Lexicon lexicon_;
  std::vector<Decision> log_;
  std::vector<LemmatizedToken> tokens_;
  std::vector<AmbiguityItem> queue_;
  OccurrenceIndex occurrences_;
  std::vector<std::string> warnings_;
};

/// Profile document (JSON text with sorted keys).
std::string format_profile(const StatProfile& profile, const FrequencyDictionary& fd,
                           const std::vector<std::pair<std::string, std::string>>& digests,
                           std::optional<std::size_t> standalone_particles = std::nullopt);

/// Zipf, Zipf-Mandelbrot and Menzerath fits; models that cannot be fitted
/// on this data are reported in `warnings`.
std::vector<FitResult> fit_all(const FrequencyDictionary& fd, const StatProfile& profile,
                               std::vector<std::string>& warnings);

struct StatsResult {
  std::vector<std::string> names;
  std::vector<StatProfile> profiles;
  std::vector<std::vector<FitResult>> fits;
  std::vector<std::string> warnings;
};

/// Recomputes profile and fits from list directories written by build.
/// With several inputs each gets a subdirectory and a comparison table.
StatsResult run_stats(const std::vector<std::filesystem::path>& list_dirs,
                      const std::filesystem::path& out_dir, std::size_t K = 10,
                      IndexBasis basis = IndexBasis::lemma);

std::string format_comparison(const std::vector<std::string>& names,
                              const std::vector<StatProfile>& profiles,
                              const std::vector<std::vector<FitResult>>& fits);

}  // namespace lexfreq
