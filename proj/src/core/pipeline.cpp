#include "core/pipeline.hpp"

#include <algorithm>
#include <future>
#include <map>

#include <json.hpp>

#include "core/error.hpp"
#include "core/tsv.hpp"

namespace lexfreq {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json length_json(const LengthDistributions& d) {
  json j;
  json syl = json::object(), pho = json::object(), mean = json::object();
  for (const auto& [k, v] : d.syllables) syl[std::to_string(k)] = v;
  for (const auto& [k, v] : d.phonemes) pho[std::to_string(k)] = v;
  for (const auto& [k, v] : d.mean_constituent) mean[std::to_string(k)] = v;
  j["syllables"] = syl;
  j["phonemes"] = pho;
  j["mean_phonemes_per_syllable"] = mean;
  j["syllable_method"] = "vowel-letter count (approximation)";
  return j;
}

json script_json(const ScriptCounts& c) {
  json j;
  for (auto s : {Script::cyrillic, Script::latin, Script::digit, Script::mixed})
    j[to_string(s)] = c[static_cast<std::size_t>(s)];
  return j;
}

void write_lists(const fs::path& dir, const FrequencyDictionary& fd, const StatProfile* profile,
                 std::optional<std::size_t> particles, std::vector<std::string>& warnings) {
  const auto lemmas = format_lemma_ranks(fd);
  const auto forms = format_form_ranks(fd);
  const auto alpha = format_alpha_index(fd);
  tsv::write_file(dir / kLemmaRankFile, lemmas);
  tsv::write_file(dir / kFormRankFile, forms);
  tsv::write_file(dir / kAlphaFile, alpha);
  if (!profile) return;
  const std::vector<std::pair<std::string, std::string>> digests = {
      {kLemmaRankFile, fnv1a_hex(lemmas)}, {kFormRankFile, fnv1a_hex(forms)}, {kAlphaFile, fnv1a_hex(alpha)}};
  tsv::write_file(dir / kProfileFile, format_profile(*profile, fd, digests, particles));
  const auto fits = fit_all(fd, *profile, warnings);
  tsv::write_file(dir / kFitsFile, format_fits(fits));
  const auto basis = profile->basis;
  tsv::write_file(dir / kPlotFile, format_plot_data(rank_frequency_points(fd, basis)));
}

void remove_if_present(const fs::path& p) {
  std::error_code ec;
  fs::remove(p, ec);
}

}  // namespace

Session::Session(RunConfig config) : config_(std::move(config)) {}

void Session::load() {
  docs_.clear();
  for (const auto& entry : load_manifest(config_.manifest)) {
    auto doc = load_document(entry.path, config_.profile.value_or(entry.profile), entry.doc_id);
    doc.metadata = entry.metadata;
    if (auto it = entry.metadata.find("title"); it != entry.metadata.end()) doc.title = it->second;
    docs_.push_back(std::move(doc));
  }
  lexicon_ = load_lexicon(config_.lexicon);
  if (config_.default_variants) lexicon_.add_default_variant_groups();
  if (config_.paradigms) add_paradigms(lexicon_, load_paradigms(*config_.paradigms));
  log_ = config_.decision_log ? load_decision_log(*config_.decision_log) : std::vector<Decision>{};
  loaded_ = true;
}

void Session::run() {
  if (!loaded_) load();
  warnings_.clear();
  TokenizerOptions base_options;
  base_options.accent_keep = lexicon_.accented_forms();

  std::vector<std::future<LemmatizeResult>> jobs;
  jobs.reserve(docs_.size());
  for (const auto& doc : docs_) {
    jobs.push_back(std::async(std::launch::async, [&, this] {
      TokenizerOptions options = base_options;
      options.profile = doc.profile;
      const auto tokens = tokenize(clean_document(doc, config_.notes), options);
      return lemmatize_stream(tokens, lexicon_, config_.kwic_width);
    }));
  }
  tokens_.clear();
  for (auto& job : jobs) {
    auto part = job.get();
    for (auto& note : part.notes) warnings_.push_back(std::move(note));
    std::move(part.tokens.begin(), part.tokens.end(), std::back_inserter(tokens_));
  }
  occurrences_.clear();
  for (const auto& t : tokens_) occurrences_[{t.token.doc_id, t.token.char_offset}] = t.form_key;

  auto report = apply_decisions(tokens_, log_, lexicon_);
  for (auto& w : report.warnings) warnings_.push_back(std::move(w));
  rebuild_queue();
}

void Session::rebuild_queue() {
  queue_ = build_queue(tokens_, lexicon_, config_.kwic_width);
}

Progress Session::progress() const {
  Progress p;
  p.total = tokens_.size();
  p.pending = static_cast<std::size_t>(std::count_if(
      tokens_.begin(), tokens_.end(), [](const LemmatizedToken& t) { return !t.lemma; }));
  p.resolved = p.total - p.pending;
  p.queue_items = queue_.size();
  return p;
}

std::vector<KwicHit> Session::kwic(std::string_view form, std::size_t width) const {
  const auto key = lexicon_.canonicalize_variant(normalize_form(form, nullptr));
  std::vector<KwicHit> hits;
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    const auto& t = tokens_[i];
    if (t.form_key != key && t.lookup_key != key) continue;
    hits.push_back({{t.token.doc_id, t.token.char_offset}, kwic_at(tokens_, i, width)});
  }
  return hits;
}

void Session::post_decision(Decision decision) {
  if (decision.timestamp.empty()) decision.timestamp = utc_timestamp();
  Lexicon updated = lexicon_;
  updated.record_decision(decision, &occurrences_);
  if (config_.decision_log) append_decision(*config_.decision_log, decision);
  lexicon_ = std::move(updated);
  log_.push_back(decision);
  auto report = apply_decisions(tokens_, std::span(&decision, 1), lexicon_);
  for (auto& w : report.warnings) warnings_.push_back(std::move(w));
  rebuild_queue();
}

void Session::rerun() { run(); }

std::size_t Session::import_decisions(const fs::path& path) {
  if (tokens_.empty() && occurrences_.empty()) run();
  auto decisions = load_decision_log(path);
  Lexicon probe = lexicon_;
  for (auto& d : decisions) {
    probe.record_decision(d, &occurrences_);
    d.form_key = probe.decision_log().back().form_key;
  }
  Lexicon on_disk = load_lexicon(config_.lexicon);
  for (const auto& d : decisions) on_disk.record_decision(d);
  for (const auto& d : decisions)
    if (config_.decision_log) append_decision(*config_.decision_log, d);
  save_lexicon(on_disk, config_.lexicon);
  lexicon_ = std::move(probe);
  log_.insert(log_.end(), decisions.begin(), decisions.end());
  return decisions.size();
}

void Session::write_queue(const fs::path& path) const {
  std::string out = "# doc_id\toffset\tform\tcandidates\tleft\tkeyword\tright\n";
  for (const auto& item : queue_) out += format_queue_row(item) + '\n';
  tsv::write_file(path, out);
}

BuildSummary Session::build() {
  load();
  run();
  const fs::path& dir = config_.out_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io, "cannot create " + dir.string() + ": " + ec.message());

  BuildSummary summary;
  summary.warnings = warnings_;
  const auto progress = this->progress();
  summary.pending = progress.pending;
  summary.N = tokens_.size();

  write_queue(dir / kQueueFile);
  if (config_.emit_tokens) {
    std::string out = "# doc_id\toffset\tsurface\tnorm\tscript\tsense_tag\tflags\n";
    for (const auto& t : tokens_) out += format_token_row(t.token) + '\n';
    tsv::write_file(dir / kTokensFile, out);
  }

  const std::size_t particles = static_cast<std::size_t>(std::count_if(
      tokens_.begin(), tokens_.end(), [](const LemmatizedToken& t) { return t.token.standalone_particle; }));
  const bool any_first_edition = std::any_of(docs_.begin(), docs_.end(), [](const SourceDocument& d) {
    return d.profile == OrthographyProfile::first_edition;
  });
  const auto particle_count = any_first_edition ? std::optional<std::size_t>(particles) : std::nullopt;

  if (summary.pending == 0 || config_.allow_pending) {
    const auto fd = build_dictionary(tokens_, config_.allow_pending);
    summary.V_form = fd.form_entries.size();
    summary.V_lemma = fd.lemma_entries.size();
    std::optional<StatProfile> profile;
    if (fd.N > 0) {
      profile = compute_profile(fd, config_.K,
                                config_.form_based_indices ? IndexBasis::form : IndexBasis::lemma);
    } else {
      summary.warnings.push_back("empty corpus: no profile or fits written");
      for (const char* f : {kProfileFile, kFitsFile, kPlotFile}) remove_if_present(dir / f);
    }
    write_lists(dir, fd, profile ? &*profile : nullptr, particle_count, summary.warnings);
    summary.lemma_lists_written = true;
  } else {
    FrequencyDictionary forms_only;
    forms_only.N = tokens_.size();
    forms_only.form_entries = assign_ranks(count_forms(tokens_));
    summary.V_form = forms_only.form_entries.size();
    tsv::write_file(dir / kFormRankFile, format_form_ranks(forms_only));
    for (const char* f : {kLemmaRankFile, kAlphaFile, kProfileFile, kFitsFile, kPlotFile})
      remove_if_present(dir / f);
  }
  return summary;
}

std::string format_profile(const StatProfile& p, const FrequencyDictionary& fd,
                           const std::vector<std::pair<std::string, std::string>>& digests,
                           std::optional<std::size_t> standalone_particles) {
  json j;
  j["N"] = p.N;
  j["V_lemma"] = p.V_lemma;
  j["V_form"] = p.V_form;
  j["hapax_lemma"] = p.hapax_lemma;
  j["hapax_form"] = p.hapax_form;
  j["K"] = p.K;
  j["index_basis"] = p.basis == IndexBasis::lemma ? "lemma" : "form";
  j["high_freq_count"] = p.high_freq_count;
  j["richness"] = p.richness;
  j["exclusivity"] = p.exclusivity;
  j["concentration"] = p.concentration;
  j["exclusivity_per_V"] = p.exclusivity_per_v;
  j["concentration_per_V"] = p.concentration_per_v;
  j["tokens_per_form"] = p.tokens_per_form;
  json cov = json::array();
  for (const auto& c : p.coverage) cov.push_back({{"cutoff", c.cutoff}, {"coverage", c.coverage}});
  j["coverage"] = cov;
  j["lengths"] = length_json(p.lengths);
  j["script_breakdown"] = {{"tokens", script_json(fd.by_script.tokens)},
                           {"forms", script_json(fd.by_script.forms)},
                           {"lemmas", script_json(fd.by_script.lemmas)}};
  json dig = json::object();
  for (const auto& [name, hex] : digests) dig[name] = "fnv1a64:" + hex;
  j["list_digests"] = dig;
  if (standalone_particles) j["standalone_particles"] = *standalone_particles;
  return j.dump(2) + "\n";
}

std::vector<FitResult> fit_all(const FrequencyDictionary& fd, const StatProfile& profile,
                               std::vector<std::string>& warnings) {
  std::vector<FitResult> fits;
  const auto points = rank_frequency_points(fd, profile.basis);
  auto attempt = [&](const char* what, auto&& fn) {
    try {
      fits.push_back(fn());
    } catch (const ConvergenceError& e) {
      warnings.push_back(std::string(what) + ": " + e.what() + " (best-so-far reported)");
      fits.push_back(e.best_so_far());
    } catch (const Error& e) {
      warnings.push_back(std::string(what) + " not fitted: " + e.what());
    }
  };
  attempt("zipf", [&] { return fit_zipf(points); });
  attempt("zipf_mandelbrot", [&] { return fit_zipf_mandelbrot(points); });
  try {
    for (auto& f : fit_menzerath_variants(menzerath_points(profile.lengths))) fits.push_back(std::move(f));
  } catch (const Error& e) {
    warnings.push_back(std::string("menzerath not fitted: ") + e.what());
  }
  return fits;
}

std::string format_comparison(const std::vector<std::string>& names,
                              const std::vector<StatProfile>& profiles,
                              const std::vector<std::vector<FitResult>>& fits) {
  std::string out = "metric";
  for (const auto& n : names) out += '\t' + n;
  out += '\n';
  auto row = [&](const std::string& metric, auto&& value) {
    out += metric;
    for (std::size_t i = 0; i < profiles.size(); ++i) out += '\t' + value(i);
    out += '\n';
  };
  auto fixed = [](double v) { return tsv::format_fixed(v, 6); };
  row("N", [&](std::size_t i) { return std::to_string(profiles[i].N); });
  row("V_lemma", [&](std::size_t i) { return std::to_string(profiles[i].V_lemma); });
  row("V_form", [&](std::size_t i) { return std::to_string(profiles[i].V_form); });
  row("hapax_lemma", [&](std::size_t i) { return std::to_string(profiles[i].hapax_lemma); });
  row("high_freq_count", [&](std::size_t i) { return std::to_string(profiles[i].high_freq_count); });
  row("richness", [&](std::size_t i) { return fixed(profiles[i].richness); });
  row("exclusivity", [&](std::size_t i) { return fixed(profiles[i].exclusivity); });
  row("concentration", [&](std::size_t i) { return fixed(profiles[i].concentration); });
  row("tokens_per_form", [&](std::size_t i) { return fixed(profiles[i].tokens_per_form); });
  const std::vector<std::pair<FitModel, std::vector<const char*>>> params{
      {FitModel::zipf, {"a"}},
      {FitModel::zipf_mandelbrot, {"a", "b"}},
      {FitModel::menzerath, {"A", "b", "c"}}};
  for (const auto& [model, names_of] : params) {
    for (const char* param : names_of) {
      row(std::string(to_string(model)) + "." + param, [&](std::size_t i) -> std::string {
        for (const auto& f : fits[i])
          if (f.model == model && f.selected) return tsv::format_real(f.param(param));
        return "-";
      });
    }
  }
  return out;
}

StatsResult run_stats(const std::vector<fs::path>& list_dirs, const fs::path& out_dir,
                      std::size_t K, IndexBasis basis) {
  if (list_dirs.empty()) throw Error(ErrorCode::invalid_argument, "no list directories given");
  StatsResult result;
  std::map<std::string, int> seen;
  for (const auto& dir : list_dirs) {
    auto name = fs::absolute(dir).lexically_normal().filename().string();
    if (name.empty()) name = fs::absolute(dir).lexically_normal().parent_path().filename().string();
    if (name.empty()) name = "corpus";
    if (int n = seen[name]++; n > 0) name += "_" + std::to_string(n + 1);
    const auto fd = read_dictionary(dir);
    auto profile = compute_profile(fd, K, basis);
    auto fits = fit_all(fd, profile, result.warnings);
    const fs::path target = list_dirs.size() == 1 ? out_dir : out_dir / name;
    std::error_code ec;
    fs::create_directories(target, ec);
    if (ec) throw Error(ErrorCode::io, "cannot create " + target.string() + ": " + ec.message());
    const std::vector<std::pair<std::string, std::string>> digests = {
        {kLemmaRankFile, fnv1a_hex(format_lemma_ranks(fd))},
        {kFormRankFile, fnv1a_hex(format_form_ranks(fd))},
        {kAlphaFile, fnv1a_hex(format_alpha_index(fd))}};
    tsv::write_file(target / kProfileFile, format_profile(profile, fd, digests));
    tsv::write_file(target / kFitsFile, format_fits(fits));
    tsv::write_file(target / kPlotFile, format_plot_data(rank_frequency_points(fd, basis)));
    result.names.push_back(name);
    result.profiles.push_back(std::move(profile));
    result.fits.push_back(std::move(fits));
  }
  if (list_dirs.size() > 1)
    tsv::write_file(out_dir / kComparisonFile,
                    format_comparison(result.names, result.profiles, result.fits));
  return result;
}

}  // namespace lexfreq
