#include "core/quantstats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>

#include "core/tsv.hpp"
#include "core/utf8.hpp"

namespace lexfreq {

const char* to_string(FitModel model) noexcept {
  switch (model) {
    case FitModel::zipf: return "zipf";
    case FitModel::zipf_mandelbrot: return "zipf_mandelbrot";
    case FitModel::menzerath: return "menzerath";
  }
  return "zipf";
}

double FitResult::param(std::string_view name) const {
  for (const auto& [k, v] : params)
    if (k == name) return v;
  throw Error(ErrorCode::invalid_argument, "fit has no parameter '" + std::string(name) + "'");
}

namespace {

const std::vector<RankedLemma>& lemma_list(const FrequencyDictionary& fd) { return fd.lemma_entries; }

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rss = 0.0;
  double sstot = 0.0;
};

// Ordinary least squares with centered sums.
LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  LineFit f;
  if (sxx <= 0.0) throw Error(ErrorCode::numeric, "degenerate regression: all abscissae are equal");
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    f.rss += r * r;
  }
  f.sstot = syy;
  return f;
}

double r_squared(double rss, double sstot) {
  if (!(sstot > 0.0)) return 0.0;
  return std::clamp(1.0 - rss / sstot, 0.0, 1.0);
}

void check_rank_points(std::span<const RankFreqPoint> points, std::size_t min_points) {
  if (points.size() < min_points)
    throw Error(ErrorCode::invalid_argument, "need at least " + std::to_string(min_points) +
                                                 " points, got " + std::to_string(points.size()));
  for (const auto& p : points)
    if (!(p.rank > 0.0) || !(p.freq > 0.0))
      throw Error(ErrorCode::invalid_argument, "ranks and frequencies must be positive");
}

FitResult zm_at(std::span<const RankFreqPoint> points, double b) {
  std::vector<double> x(points.size()), y(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    x[i] = std::log(points[i].rank + b);
    y[i] = std::log(points[i].freq);
  }
  const auto line = fit_line(x, y);
  FitResult r;
  r.model = FitModel::zipf_mandelbrot;
  const double a = -line.slope;
  r.params = {{"C", std::exp(line.intercept)}, {"a", a}, {"b", b}};
  r.rss = line.rss;
  r.r_squared = r_squared(line.rss, line.sstot);
  r.n_points = points.size();
  r.accepted = a > 0.0 && b >= 0.0;
  return r;
}

// Weighted least squares via normal equations; false when singular.
template <std::size_t P>
bool solve_weighted(std::span<const std::array<double, P>> rows, std::span<const double> y,
                    std::span<const double> w, std::array<double, P>& beta) {
  std::array<std::array<double, P + 1>, P> m{};
  for (std::size_t k = 0; k < rows.size(); ++k)
    for (std::size_t i = 0; i < P; ++i) {
      for (std::size_t j = 0; j < P; ++j) m[i][j] += w[k] * rows[k][i] * rows[k][j];
      m[i][P] += w[k] * rows[k][i] * y[k];
    }
  double scale = 0.0;
  for (std::size_t i = 0; i < P; ++i) scale = std::max(scale, std::abs(m[i][i]));
  for (std::size_t c = 0; c < P; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < P; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    if (std::abs(m[piv][c]) <= 1e-12 * std::max(scale, 1.0)) return false;
    std::swap(m[c], m[piv]);
    for (std::size_t r = 0; r < P; ++r) {
      if (r == c) continue;
      const double f = m[r][c] / m[c][c];
      for (std::size_t j = c; j <= P; ++j) m[r][j] -= f * m[c][j];
    }
  }
  for (std::size_t i = 0; i < P; ++i) beta[i] = m[i][P] / m[i][i];
  return true;
}

struct MenzerathCandidate {
  FitResult fit;
  double adjusted = -std::numeric_limits<double>::infinity();
};

template <std::size_t P>
std::optional<MenzerathCandidate> menzerath_fit(std::span<const LengthPoint> pts, bool full) {
  std::vector<std::array<double, P>> rows;
  std::vector<double> y, w;
  for (const auto& p : pts) {
    std::array<double, P> row{};
    row[0] = 1.0;
    row[1] = std::log(p.x);
    if constexpr (P == 3) row[2] = p.x;
    rows.push_back(row);
    y.push_back(std::log(p.y));
    w.push_back(p.weight);
  }
  std::array<double, P> beta{};
  if (!solve_weighted<P>(rows, y, w, beta)) return std::nullopt;
  double sw = 0, my = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    sw += w[i];
    my += w[i] * y[i];
  }
  my /= sw;
  double rss = 0, sstot = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    double pred = 0;
    for (std::size_t j = 0; j < P; ++j) pred += beta[j] * rows[i][j];
    rss += w[i] * (y[i] - pred) * (y[i] - pred);
    sstot += w[i] * (y[i] - my) * (y[i] - my);
  }
  MenzerathCandidate c;
  c.fit.model = FitModel::menzerath;
  c.fit.variant = full ? "full" : "reduced";
  const double cc = P == 3 ? -beta[P - 1] : 0.0;
  c.fit.params = {{"A", std::exp(beta[0])}, {"b", beta[1]}, {"c", cc}};
  c.fit.rss = rss;
  c.fit.r_squared = r_squared(rss, sstot);
  c.fit.n_points = pts.size();
  const double n = static_cast<double>(pts.size());
  const double predictors = static_cast<double>(P - 1);
  if (n - predictors - 1.0 > 0.0)
    c.adjusted = 1.0 - (1.0 - c.fit.r_squared) * (n - 1.0) / (n - predictors - 1.0);
  return c;
}

bool is_vowel(char32_t c) {
  static constexpr std::u32string_view kVowels = U"аеиіоуяюєї";
  return kVowels.find(c) != std::u32string_view::npos;
}

}  // namespace

std::vector<RankFreqPoint> rank_frequency_points(const FrequencyDictionary& fd, IndexBasis basis) {
  std::vector<RankFreqPoint> pts;
  if (basis == IndexBasis::lemma)
    for (const auto& e : fd.lemma_entries) pts.push_back({double(e.rank), double(e.abs_freq)});
  else
    for (const auto& e : fd.form_entries) pts.push_back({double(e.rank), double(e.abs_freq)});
  return pts;
}

FitResult fit_zipf(std::span<const RankFreqPoint> points) {
  check_rank_points(points, 2);
  std::vector<double> x(points.size()), y(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    x[i] = std::log(points[i].rank);
    y[i] = std::log(points[i].freq);
  }
  const auto line = fit_line(x, y);
  FitResult r;
  r.model = FitModel::zipf;
  const double a = -line.slope;
  r.params = {{"C", std::exp(line.intercept)}, {"a", a}};
  r.rss = line.rss;
  r.r_squared = r_squared(line.rss, line.sstot);
  r.n_points = points.size();
  r.accepted = a > 0.0;
  return r;
}

FitResult fit_zipf_mandelbrot(std::span<const RankFreqPoint> points,
                              const ZipfMandelbrotOptions& options) {
  check_rank_points(points, 4);
  if (options.fixed_b) {
    if (*options.fixed_b < 0.0) throw Error(ErrorCode::invalid_argument, "b must be >= 0");
    return zm_at(points, *options.fixed_b);
  }
  double r_max = 0.0;
  for (const auto& p : points) r_max = std::max(r_max, p.rank);

  // Search in u = ln(1 + b): a coarse scan brackets the minimum, golden
  // section refines it.
  const double u_max = std::log1p(r_max);
  auto b_of = [](double u) { return std::expm1(u); };
  auto rss_at = [&](double u) { return zm_at(points, b_of(u)).rss; };

  constexpr int kGrid = 64;
  std::size_t best_i = 0;
  double best_rss = std::numeric_limits<double>::infinity();
  std::vector<double> grid(kGrid + 1);
  for (int i = 0; i <= kGrid; ++i) {
    grid[i] = u_max * i / kGrid;
    const double v = rss_at(grid[i]);
    if (v < best_rss) {
      best_rss = v;
      best_i = static_cast<std::size_t>(i);
    }
  }
  double lo = grid[best_i == 0 ? 0 : best_i - 1];
  double hi = grid[std::min<std::size_t>(best_i + 1, kGrid)];

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = rss_at(x1), f2 = rss_at(x2);
  int iter = 0;
  while (hi - lo > options.tolerance * (1.0 + std::abs(lo))) {
    if (++iter > options.max_iterations) {
      const double u = f1 < f2 ? x1 : x2;
      throw ConvergenceError("Zipf-Mandelbrot search did not converge after " +
                                 std::to_string(options.max_iterations) + " iterations",
                             zm_at(points, b_of(u)));
    }
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = rss_at(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = rss_at(x2);
    }
  }
  auto best = zm_at(points, b_of(0.5 * (lo + hi)));
  const auto at_grid = zm_at(points, b_of(grid[best_i]));
  return at_grid.rss < best.rss ? at_grid : best;
}

int count_syllables(std::string_view form) {
  int n = 0;
  for (char32_t c : utf8::decode(form))
    if (is_vowel(utf8::to_lower(c))) ++n;
  return n;
}

int estimate_phonemes(std::string_view form) {
  std::u32string s;
  for (char32_t c : utf8::decode(form))
    if (!utf8::is_combining_mark(c)) s.push_back(utf8::to_lower(c));
  int n = 0;
  char32_t prev = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char32_t c = s[i];
    if (utf8::is_hyphen(c)) {
      prev = 0;  // next letter starts a word part
      continue;
    }
    if (c == U'ь' || utf8::is_apostrophe(c)) {
      prev = c;
      continue;
    }
    if (!utf8::is_letter(c)) {
      prev = c;
      continue;
    }
    if (c == U'щ' || c == U'ї') {
      n += 2;
    } else if (c == U'д' && i + 1 < s.size() && (s[i + 1] == U'з' || s[i + 1] == U'ж')) {
      n += 1;
      ++i;
    } else if (c == U'я' || c == U'ю' || c == U'є') {
      const bool iotated = prev == 0 || is_vowel(prev) || prev == U'ь' || utf8::is_apostrophe(prev);
      n += iotated ? 2 : 1;
    } else {
      n += 1;
    }
    prev = s[i];
  }
  return n;
}

std::vector<FitResult> fit_menzerath_variants(std::span<const LengthPoint> points) {
  std::set<double> xs;
  for (const auto& p : points) {
    if (!(p.y > 0.0)) throw Error(ErrorCode::invalid_argument, "Menzerath data needs y > 0");
    if (!(p.x > 0.0)) throw Error(ErrorCode::invalid_argument, "Menzerath data needs x > 0");
    if (!(p.weight > 0.0)) throw Error(ErrorCode::invalid_argument, "Menzerath weights must be positive");
    xs.insert(p.x);
  }
  if (xs.size() < 3)
    throw Error(ErrorCode::invalid_argument, "Menzerath fit needs at least 3 distinct x values");
  auto reduced = menzerath_fit<2>(points, false);
  auto full = menzerath_fit<3>(points, true);
  if (!reduced && !full) throw Error(ErrorCode::numeric, "Menzerath regression is singular");
  std::vector<FitResult> out;
  if (!reduced) {
    out.push_back(full->fit);
    return out;
  }
  const bool full_wins = full && full->adjusted > reduced->adjusted + 1e-12;
  if (full_wins) {
    out.push_back(full->fit);
    out.push_back(reduced->fit);
  } else {
    out.push_back(reduced->fit);
    if (full) out.push_back(full->fit);
  }
  if (out.size() > 1) out[1].selected = false;
  return out;
}

FitResult fit_menzerath(std::span<const LengthPoint> points) {
  return fit_menzerath_variants(points).front();
}

LengthDistributions length_distributions(std::span<const Token> tokens) {
  LengthDistributions d;
  std::map<int, double> ratio_sum;
  for (const auto& t : tokens) {
    if (t.script != Script::cyrillic) continue;
    const int s = count_syllables(t.norm), p = estimate_phonemes(t.norm);
    ++d.syllables[s];
    ++d.phonemes[p];
    if (s > 0) ratio_sum[s] += double(p) / s;
  }
  for (const auto& [s, sum] : ratio_sum) d.mean_constituent[s] = sum / double(d.syllables[s]);
  return d;
}

LengthDistributions length_distributions(std::span<const RankedForm> forms) {
  LengthDistributions d;
  std::map<int, double> ratio_sum;
  for (const auto& f : forms) {
    if (classify_script(f.form) != Script::cyrillic) continue;
    const int s = count_syllables(f.form), p = estimate_phonemes(f.form);
    d.syllables[s] += f.abs_freq;
    d.phonemes[p] += f.abs_freq;
    if (s > 0) ratio_sum[s] += double(f.abs_freq) * p / s;
  }
  for (const auto& [s, sum] : ratio_sum) d.mean_constituent[s] = sum / double(d.syllables[s]);
  return d;
}

std::vector<LengthPoint> menzerath_points(const LengthDistributions& lengths) {
  std::vector<LengthPoint> pts;
  for (const auto& [x, y] : lengths.mean_constituent)
    pts.push_back({double(x), y, double(lengths.syllables.at(x))});
  return pts;
}

double coverage_at(const FrequencyDictionary& fd, std::size_t cutoff, IndexBasis basis) {
  const std::size_t v = basis == IndexBasis::lemma ? fd.lemma_entries.size() : fd.form_entries.size();
  if (cutoff < 1 || cutoff > v)
    throw Error(ErrorCode::invalid_argument, "coverage cutoff " + std::to_string(cutoff) +
                                                 " outside 1.." + std::to_string(v));
  std::uint64_t sum = 0;
  if (basis == IndexBasis::lemma)
    for (std::size_t i = 0; i < cutoff; ++i) sum += fd.lemma_entries[i].abs_freq;
  else
    for (std::size_t i = 0; i < cutoff; ++i) sum += fd.form_entries[i].abs_freq;
  return double(sum) / double(fd.N);
}

StatProfile compute_profile(const FrequencyDictionary& fd, std::size_t K, IndexBasis basis) {
  if (fd.N == 0) throw Error(ErrorCode::empty_corpus, "empty corpus");
  StatProfile p;
  p.N = fd.N;
  p.K = K;
  p.basis = basis;
  p.V_lemma = lemma_list(fd).size();
  p.V_form = fd.form_entries.size();
  for (const auto& e : fd.lemma_entries) p.hapax_lemma += e.abs_freq == 1;
  for (const auto& e : fd.form_entries) p.hapax_form += e.abs_freq == 1;
  std::size_t v = p.V_lemma, hapax = p.hapax_lemma;
  if (basis == IndexBasis::lemma) {
    for (const auto& e : fd.lemma_entries) p.high_freq_count += e.abs_freq >= K;
  } else {
    v = p.V_form;
    hapax = p.hapax_form;
    for (const auto& e : fd.form_entries) p.high_freq_count += e.abs_freq >= K;
  }
  const double n = double(p.N);
  p.richness = double(v) / n;
  p.exclusivity = double(hapax) / n;
  p.concentration = double(p.high_freq_count) / n;
  p.exclusivity_per_v = v ? double(hapax) / double(v) : 0.0;
  p.concentration_per_v = v ? double(p.high_freq_count) / double(v) : 0.0;
  p.tokens_per_form = p.V_form ? n / double(p.V_form) : 0.0;
  for (std::size_t cut : {10u, 100u, 500u, 1000u, 5000u})
    if (cut < v) p.coverage.push_back({cut, coverage_at(fd, cut, basis)});
  if (v > 0) p.coverage.push_back({v, coverage_at(fd, v, basis)});
  p.lengths = length_distributions(fd.form_entries);
  return p;
}

std::string format_fits(std::span<const FitResult> fits) {
  std::string out = "# model\tvariant\tselected\tr_squared\tn_points\tparams\n";
  for (const auto& f : fits) {
    std::string params;
    for (const auto& [k, v] : f.params) {
      if (!params.empty()) params += ';';
      params += k + "=" + tsv::format_real(v);
    }
    out += std::string(to_string(f.model)) + '\t' + (f.variant.empty() ? "-" : f.variant) + '\t' +
           (f.selected ? "yes" : "no") + '\t' +
           tsv::format_real(f.r_squared) + '\t' + std::to_string(f.n_points) + '\t' + params + '\n';
  }
  return out;
}

std::string format_plot_data(std::span<const RankFreqPoint> points) {
  std::string out = "# rank\tfreq\tlog_rank\tlog_freq\n";
  for (const auto& p : points)
    out += tsv::format_real(p.rank) + '\t' + tsv::format_real(p.freq) + '\t' +
           tsv::format_real(std::log(p.rank)) + '\t' + tsv::format_real(std::log(p.freq)) + '\n';
  return out;
}

}  // namespace lexfreq
