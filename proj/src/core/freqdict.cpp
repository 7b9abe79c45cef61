#include "core/freqdict.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "core/error.hpp"
#include "core/tsv.hpp"
#include "core/utf8.hpp"

namespace lexfreq {

namespace {

constexpr std::u32string_view kUkrainianAlphabet = U"абвгґдеєжзиіїйклмнопрстуфхцчшщьюя";

std::vector<std::pair<int, char32_t>> collation_key(std::string_view text) {
  std::vector<std::pair<int, char32_t>> key;
  for (char32_t c : utf8::decode(text)) {
    if (utf8::is_apostrophe(c) || utf8::is_hyphen(c) || utf8::is_combining_mark(c)) continue;
    c = utf8::to_lower(c);
    if (utf8::is_digit(c)) {
      key.emplace_back(0, c);
    } else if (auto pos = kUkrainianAlphabet.find(c); pos != std::u32string_view::npos) {
      key.emplace_back(1, static_cast<char32_t>(pos));
    } else if (utf8::is_cyrillic_letter(c)) {
      key.emplace_back(1, static_cast<char32_t>(0x100 + c));
    } else if (utf8::is_latin_letter(c)) {
      key.emplace_back(2, c);
    } else {
      key.emplace_back(3, c);
    }
  }
  return key;
}

std::string rel(double value) { return tsv::format_fixed(value, 6); }

std::uint64_t parse_count(const std::string& s, const std::string& where) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw Error(ErrorCode::format, where + "bad count '" + s + "'");
  return std::stoull(s);
}

std::optional<std::string> opt(const std::vector<std::string>& f, std::size_t i) {
  if (i < f.size() && !f[i].empty()) return f[i];
  return std::nullopt;
}

template <typename Row>
void check_ranks(const std::vector<Row>& rows, std::string_view source) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].rank != i + 1)
      throw Error(ErrorCode::format, std::string(source) + ": ranks are not consecutive at row " +
                                         std::to_string(i + 1));
    if (i > 0 && rows[i].abs_freq > rows[i - 1].abs_freq)
      throw Error(ErrorCode::format, std::string(source) + ": frequencies increase at rank " +
                                         std::to_string(i + 1));
  }
}

}  // namespace

std::string LemmaKey::display() const {
  return disambiguator ? lemma + " (" + *disambiguator + ")" : lemma;
}

FormCounts count_forms(std::span<const Token> tokens, const Lexicon* variants) {
  FormCounts counts;
  for (const auto& t : tokens)
    ++counts[variants ? variants->canonicalize_variant(t.norm) : t.norm];
  return counts;
}

FormCounts count_forms(std::span<const LemmatizedToken> tokens) {
  FormCounts counts;
  for (const auto& t : tokens) ++counts[t.form_key];
  return counts;
}

LemmaCounts count_lemmas(std::span<const LemmatizedToken> tokens, bool allow_pending) {
  const auto pending = static_cast<std::size_t>(std::count_if(
      tokens.begin(), tokens.end(), [](const auto& t) { return !t.lemma.has_value(); }));
  if (pending && !allow_pending)
    throw Error(ErrorCode::pending, std::to_string(pending) + " token(s) still pending lemmatization");
  LemmaCounts counts;
  for (const auto& t : tokens) {
    LemmaKey key = t.lemma ? LemmaKey::of(*t.lemma)
                           : LemmaKey{normalize_lemma(t.form_key), Pos::other, kPendingMark, std::nullopt};
    auto& c = counts[key];
    ++c.freq;
    c.forms.insert(t.form_key);
  }
  return counts;
}

void merge(FormCounts& into, const FormCounts& from) {
  for (const auto& [k, v] : from) into[k] += v;
}

void merge(LemmaCounts& into, const LemmaCounts& from) {
  for (const auto& [k, v] : from) {
    auto& c = into[k];
    c.freq += v.freq;
    c.forms.insert(v.forms.begin(), v.forms.end());
  }
}

std::vector<RankedForm> assign_ranks(const FormCounts& counts) {
  std::uint64_t n = 0;
  for (const auto& [_, f] : counts) n += f;
  std::vector<RankedForm> out;
  out.reserve(counts.size());
  for (const auto& [form, f] : counts) out.push_back({0, form, f, n ? double(f) / double(n) : 0.0});
  // std::map iteration is already code point order (UTF-8 byte order).
  std::stable_sort(out.begin(), out.end(),
                   [](const RankedForm& a, const RankedForm& b) { return a.abs_freq > b.abs_freq; });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = i + 1;
  return out;
}

std::vector<RankedLemma> assign_ranks(const LemmaCounts& counts) {
  std::uint64_t n = 0;
  for (const auto& [_, c] : counts) n += c.freq;
  std::vector<RankedLemma> out;
  out.reserve(counts.size());
  for (const auto& [key, c] : counts)
    out.push_back({0, key, c.freq, n ? double(c.freq) / double(n) : 0.0, c.forms.size()});
  std::stable_sort(out.begin(), out.end(),
                   [](const RankedLemma& a, const RankedLemma& b) { return a.abs_freq > b.abs_freq; });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = i + 1;
  return out;
}

bool alphabetical_less(std::string_view a, std::string_view b) {
  const auto ka = collation_key(a);
  const auto kb = collation_key(b);
  if (ka != kb) return ka < kb;
  return a < b;
}

FrequencyDictionary dictionary_from_lists(std::vector<RankedLemma> lemmas,
                                          std::vector<RankedForm> forms) {
  FrequencyDictionary fd;
  for (const auto& f : forms) fd.N += f.abs_freq;
  fd.lemma_entries = std::move(lemmas);
  fd.form_entries = std::move(forms);
  fd.alpha_index = fd.lemma_entries;
  std::stable_sort(fd.alpha_index.begin(), fd.alpha_index.end(),
                   [](const RankedLemma& x, const RankedLemma& y) {
                     if (x.key.lemma != y.key.lemma) return alphabetical_less(x.key.lemma, y.key.lemma);
                     return x.key < y.key;
                   });
  for (const auto& f : fd.form_entries)
    fd.by_script.forms[static_cast<std::size_t>(classify_script(f.form))] += 1;
  for (const auto& l : fd.lemma_entries)
    fd.by_script.lemmas[static_cast<std::size_t>(classify_script(l.key.lemma))] += 1;
  for (const auto& f : fd.form_entries)
    fd.by_script.tokens[static_cast<std::size_t>(classify_script(f.form))] += f.abs_freq;
  return fd;
}

FrequencyDictionary build_dictionary(std::span<const LemmatizedToken> lemmatized, bool allow_pending) {
  auto lemmas = assign_ranks(count_lemmas(lemmatized, allow_pending));
  auto forms = assign_ranks(count_forms(lemmatized));
  auto fd = dictionary_from_lists(std::move(lemmas), std::move(forms));
  fd.by_script.tokens = {};
  for (const auto& t : lemmatized) fd.by_script.tokens[static_cast<std::size_t>(t.token.script)] += 1;
  return fd;
}

std::string render_headword(const LemmaKey& key) { return key.lemma; }

std::string format_lemma_ranks(const FrequencyDictionary& fd) {
  std::string out = "# rank\theadword\tpos\tdisamb\tabs\trel\tn_forms\tlanguage\n";
  for (const auto& e : fd.lemma_entries)
    out += std::to_string(e.rank) + '\t' + render_headword(e.key) + '\t' + to_string(e.key.pos) +
           '\t' + e.key.disambiguator.value_or("") + '\t' + std::to_string(e.abs_freq) + '\t' +
           rel(e.rel_freq) + '\t' + std::to_string(e.distinct_forms) + '\t' +
           e.key.language.value_or("") + '\n';
  return out;
}

std::string format_form_ranks(const FrequencyDictionary& fd) {
  std::string out = "# rank\tform\tabs\trel\n";
  for (const auto& e : fd.form_entries)
    out += std::to_string(e.rank) + '\t' + e.form + '\t' + std::to_string(e.abs_freq) + '\t' +
           rel(e.rel_freq) + '\n';
  return out;
}

std::string format_alpha_index(const FrequencyDictionary& fd) {
  std::string out = "# headword\tpos\tdisamb\tabs\trel\tn_forms\tlanguage\n";
  for (const auto& e : fd.alpha_index)
    out += render_headword(e.key) + '\t' + to_string(e.key.pos) + '\t' +
           e.key.disambiguator.value_or("") + '\t' + std::to_string(e.abs_freq) + '\t' +
           rel(e.rel_freq) + '\t' + std::to_string(e.distinct_forms) + '\t' +
           e.key.language.value_or("") + '\n';
  return out;
}

std::vector<RankedLemma> parse_lemma_ranks(std::string_view content, std::string_view source) {
  std::vector<RankedLemma> rows;
  std::size_t lineno = 0;
  for (const auto& line : tsv::lines(content)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto where = std::string(source) + ":" + std::to_string(lineno) + ": ";
    const auto f = tsv::split(line);
    if (f.size() < 7 || f[1].empty()) throw Error(ErrorCode::format, where + "expected 7 fields");
    RankedLemma r;
    r.rank = parse_count(f[0], where);
    try {
      r.key = {f[1], parse_pos(f[2]), opt(f, 3), opt(f, 7)};
    } catch (const Error& e) {
      throw Error(ErrorCode::format, where + e.what());
    }
    r.abs_freq = parse_count(f[4], where);
    r.distinct_forms = parse_count(f[6], where);
    rows.push_back(std::move(r));
  }
  check_ranks(rows, source);
  std::uint64_t n = 0;
  for (const auto& r : rows) n += r.abs_freq;
  for (auto& r : rows) r.rel_freq = n ? double(r.abs_freq) / double(n) : 0.0;
  return rows;
}

std::vector<RankedForm> parse_form_ranks(std::string_view content, std::string_view source) {
  std::vector<RankedForm> rows;
  std::size_t lineno = 0;
  for (const auto& line : tsv::lines(content)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto where = std::string(source) + ":" + std::to_string(lineno) + ": ";
    const auto f = tsv::split(line);
    if (f.size() < 3 || f[1].empty()) throw Error(ErrorCode::format, where + "expected 4 fields");
    rows.push_back({parse_count(f[0], where), f[1], parse_count(f[2], where), 0.0});
  }
  check_ranks(rows, source);
  std::uint64_t n = 0;
  for (const auto& r : rows) n += r.abs_freq;
  for (auto& r : rows) r.rel_freq = n ? double(r.abs_freq) / double(n) : 0.0;
  return rows;
}

FrequencyDictionary read_dictionary(const std::filesystem::path& dir) {
  const auto lp = dir / kLemmaRankFile;
  const auto fp = dir / kFormRankFile;
  auto lemmas = parse_lemma_ranks(tsv::read_file(lp), lp.string());
  auto forms = parse_form_ranks(tsv::read_file(fp), fp.string());
  std::uint64_t nl = 0, nf = 0;
  for (const auto& l : lemmas) nl += l.abs_freq;
  for (const auto& f : forms) nf += f.abs_freq;
  if (nl != nf)
    throw Error(ErrorCode::format, dir.string() + ": lemma total " + std::to_string(nl) +
                                       " differs from form total " + std::to_string(nf));
  return dictionary_from_lists(std::move(lemmas), std::move(forms));
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace lexfreq
