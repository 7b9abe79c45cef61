#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "core/error.hpp"
#include "core/freqdict.hpp"
#include "core/tokenizer.hpp"

namespace lexfreq {

enum class IndexBasis { lemma, form };

struct CoveragePoint {
  std::size_t cutoff = 0;
  double coverage = 0.0;
};

/// Token-weighted length statistics over Cyrillic tokens.
struct LengthDistributions {
  std::map<int, std::uint64_t> syllables;  // syllable count -> tokens
  std::map<int, std::uint64_t> phonemes;   // phoneme count -> tokens
  /// syllable count (>= 1) -> mean phonemes per syllable
  std::map<int, double> mean_constituent;
};

struct StatProfile {
  std::uint64_t N = 0;
  std::size_t V_lemma = 0;
  std::size_t V_form = 0;
  std::size_t hapax_lemma = 0;
  std::size_t hapax_form = 0;
  std::size_t high_freq_count = 0;
  std::size_t K = 10;
  IndexBasis basis = IndexBasis::lemma;
  double richness = 0.0;       // V / N
  double exclusivity = 0.0;    // hapax / N
  double concentration = 0.0;  // count(freq >= K) / N
  double exclusivity_per_v = 0.0;
  double concentration_per_v = 0.0;
  double tokens_per_form = 0.0;  // N / V_form
  std::vector<CoveragePoint> coverage;
  LengthDistributions lengths;
};

/// Throws Error(empty_corpus) when N = 0.
StatProfile compute_profile(const FrequencyDictionary& fd, std::size_t K = 10,
                            IndexBasis basis = IndexBasis::lemma);

/// Cumulative relative frequency of ranks 1..cutoff of the chosen list.
double coverage_at(const FrequencyDictionary& fd, std::size_t cutoff,
                   IndexBasis basis = IndexBasis::lemma);

// ---- model fitting ---------------------------------------------------------

enum class FitModel { zipf, zipf_mandelbrot, menzerath };

const char* to_string(FitModel model) noexcept;

struct FitResult {
  FitModel model = FitModel::zipf;
  std::vector<std::pair<std::string, double>> params;
  double r_squared = 0.0;
  std::size_t n_points = 0;
  /// Residual sum of squares in log space.
  double rss = 0.0;
  /// "full" or "reduced" for Menzerath fits; empty otherwise.
  std::string variant;
  /// Rank-frequency fits are accepted when a > 0.
  bool accepted = true;
  /// False for the Menzerath form that lost the adjusted r^2 comparison.
  bool selected = true;

  double param(std::string_view name) const;
};

class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, FitResult best)
      : Error(ErrorCode::convergence, what), best_(std::move(best)) {}
  const FitResult& best_so_far() const noexcept { return best_; }

private:
  FitResult best_;
};

struct RankFreqPoint {
  double rank = 0.0;
  double freq = 0.0;
};

std::vector<RankFreqPoint> rank_frequency_points(const FrequencyDictionary& fd,
                                                 IndexBasis basis = IndexBasis::lemma);

/// Least squares line through (log r, log f): a = -slope, C = exp(intercept).
FitResult fit_zipf(std::span<const RankFreqPoint> points);

struct ZipfMandelbrotOptions {
  std::optional<double> fixed_b;
  int max_iterations = 200;
  double tolerance = 1e-10;
};

/// f(r) = C (r + b)^-a. Golden-section search over b in [0, r_max], each
/// step solving the log-log regression for C and a in closed form.
FitResult fit_zipf_mandelbrot(std::span<const RankFreqPoint> points,
                              const ZipfMandelbrotOptions& options = {});

/// Vowel letters; an approximation of syllables.
int count_syllables(std::string_view form);
int estimate_phonemes(std::string_view form);

struct LengthPoint {
  double x = 0.0;       // word length in syllables
  double y = 0.0;       // mean syllable length in phonemes
  double weight = 1.0;  // tokens observed at x
};

/// y = A x^b e^(-c x), weighted regression of ln y on (ln x, x). The
/// reduced form (c = 0) is also fitted; the one with higher adjusted r^2
/// is returned, the reduced form on ties.
FitResult fit_menzerath(std::span<const LengthPoint> points);
/// Selected form first, then the other one (selected = false) if it could
/// be fitted.
std::vector<FitResult> fit_menzerath_variants(std::span<const LengthPoint> points);

LengthDistributions length_distributions(std::span<const Token> tokens);
LengthDistributions length_distributions(std::span<const RankedForm> forms);

std::vector<LengthPoint> menzerath_points(const LengthDistributions& lengths);

// ---- export ----------------------------------------------------------------

/// model, variant, selected, r_squared, n_points, params ("name=value;...")
std::string format_fits(std::span<const FitResult> fits);
/// rank, freq, log_rank, log_freq
std::string format_plot_data(std::span<const RankFreqPoint> points);

}  // namespace lexfreq
