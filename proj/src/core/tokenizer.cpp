#include "core/tokenizer.hpp"

#include "core/utf8.hpp"

namespace lexfreq {

const char* to_string(Script script) noexcept {
  switch (script) {
    case Script::cyrillic: return "cyrillic";
    case Script::latin: return "latin";
    case Script::digit: return "digit";
    case Script::mixed: return "mixed";
  }
  return "mixed";
}

const char* to_string(Enclitic particle) noexcept {
  switch (particle) {
    case Enclitic::bo: return "бо";
    case Enclitic::no: return "но";
    case Enclitic::taky: return "таки";
    case Enclitic::to: return "то";
  }
  return "";
}

namespace {

bool is_joiner(char32_t c) { return utf8::is_apostrophe(c) || utf8::is_hyphen(c); }

bool is_word_body(char32_t c) {
  return utf8::is_letter(c) || utf8::is_combining_mark(c) || is_joiner(c);
}

std::u32string fold(std::u32string_view surface, bool keep_stress) {
  std::u32string out;
  out.reserve(surface.size());
  for (char32_t c : surface) {
    if (utf8::is_stress_accent(c) && !keep_stress) continue;
    if (utf8::is_apostrophe(c)) c = utf8::kApostrophe;
    else if (utf8::is_hyphen(c)) c = utf8::kHyphen;
    out.push_back(utf8::to_lower(c));
  }
  return out;
}

}  // namespace

std::string normalize_form(std::string_view surface,
                           const std::unordered_set<std::string>* accent_keep) {
  const auto text = utf8::decode(surface);
  if (accent_keep && !accent_keep->empty()) {
    auto accented = utf8::encode(fold(text, true));
    if (accent_keep->contains(accented)) return accented;
  }
  return utf8::encode(fold(text, false));
}

Script classify_script(std::string_view surface) {
  bool any_letter = false, all_cyr = true, all_lat = true, any_digit = false;
  for (char32_t c : utf8::decode(surface)) {
    if (utf8::is_digit(c)) {
      any_digit = true;
    } else if (utf8::is_letter(c)) {
      any_letter = true;
      all_cyr = all_cyr && utf8::is_cyrillic_letter(c);
      all_lat = all_lat && utf8::is_latin_letter(c);
    }
  }
  if (any_digit) return any_letter ? Script::mixed : Script::digit;
  if (!any_letter) return Script::mixed;
  if (all_cyr) return Script::cyrillic;
  if (all_lat) return Script::latin;
  return Script::mixed;
}

std::vector<Token> tokenize(const CleanText& clean, const TokenizerOptions& options) {
  const std::u32string& text = clean.text;
  std::vector<Token> tokens;
  const auto* keep = options.accent_keep.empty() ? nullptr : &options.accent_keep;

  auto emit = [&](std::size_t begin, std::size_t end) {
    Token t;
    const auto span = std::u32string_view(text).substr(begin, end - begin);
    t.surface = utf8::encode(span);
    t.norm = normalize_form(t.surface, keep);
    t.script = classify_script(t.surface);
    t.doc_id = clean.provenance;
    t.char_offset = begin;
    t.char_length = end - begin;
    for (char32_t c : span) t.hyphenated = t.hyphenated || utf8::is_hyphen(c);
    t.standalone_particle = options.profile == OrthographyProfile::first_edition &&
                            (t.norm == "ся" || t.norm == "сь");
    tokens.push_back(std::move(t));
  };

  std::size_t i = 0;
  while (i < text.size()) {
    const char32_t c = text[i];
    if (utf8::is_digit(c)) {
      std::size_t j = i;
      while (j < text.size() && utf8::is_digit(text[j])) ++j;
      emit(i, j);
      i = j;
    } else if (is_word_body(c)) {
      std::size_t j = i;
      while (j < text.size() && is_word_body(text[j])) ++j;
      std::size_t begin = i, end = j;
      while (begin < end && (is_joiner(text[begin]) || utf8::is_combining_mark(text[begin])))
        ++begin;
      while (end > begin && is_joiner(text[end - 1])) --end;
      if (begin < end) emit(begin, end);
      i = j;
    } else {
      ++i;
    }
  }

  // Attach each sense tag to the last token overlapping its range.
  std::size_t t = 0;
  for (const auto& ann : clean.annotations) {
    while (t < tokens.size() && tokens[t].char_offset < ann.end) ++t;
    if (t == 0) continue;
    auto& tok = tokens[t - 1];
    if (tok.char_offset + tok.char_length > ann.begin) tok.sense_tag = ann.tag;
  }
  return tokens;
}

std::optional<EncliticSplit> detect_hyphen_enclitic(const Token& token) {
  if (!token.hyphenated) return std::nullopt;
  static const std::pair<std::string_view, Enclitic> kParticles[] = {
      {"-бо", Enclitic::bo}, {"-но", Enclitic::no},
      {"-таки", Enclitic::taky}, {"-то", Enclitic::to}};
  const std::string_view norm = token.norm;
  for (const auto& [suffix, particle] : kParticles) {
    if (norm.size() > suffix.size() && norm.ends_with(suffix)) {
      auto base = norm.substr(0, norm.size() - suffix.size());
      if (base.ends_with('-') || base.ends_with('\'')) continue;
      return EncliticSplit{std::string(base), particle};
    }
  }
  return std::nullopt;
}

ScriptCounts count_script_classes(std::span<const Token> tokens) {
  ScriptCounts counts{};
  for (const auto& t : tokens) ++counts[static_cast<std::size_t>(t.script)];
  return counts;
}

std::string format_token_row(const Token& t) {
  std::string flags;
  if (t.hyphenated) flags += "hyphenated";
  if (t.standalone_particle) flags += flags.empty() ? "standalone_particle" : ",standalone_particle";
  std::string row = t.doc_id;
  row += '\t';
  row += std::to_string(t.char_offset);
  row += '\t';
  row += t.surface;
  row += '\t';
  row += t.norm;
  row += '\t';
  row += to_string(t.script);
  row += '\t';
  row += t.sense_tag.value_or("");
  row += '\t';
  row += flags;
  return row;
}

}  // namespace lexfreq
