#include "core/ingest.hpp"

#include "core/error.hpp"
#include "core/tsv.hpp"
#include "core/utf8.hpp"

namespace lexfreq {

const char* to_string(OrthographyProfile profile) noexcept {
  return profile == OrthographyProfile::first_edition ? "first_edition"
                                                      : "modern_edition";
}

OrthographyProfile parse_profile(std::string_view name) {
  if (name == "modern_edition" || name == "modern") return OrthographyProfile::modern_edition;
  if (name == "first_edition" || name == "first") return OrthographyProfile::first_edition;
  throw Error(ErrorCode::invalid_argument,
              "unknown orthography profile '" + std::string(name) + "'");
}

namespace {

std::string normalize_newlines(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == '\r') {
      out.push_back('\n');
      if (i + 1 < raw.size() && raw[i + 1] == '\n') ++i;
    } else {
      out.push_back(raw[i]);
    }
  }
  return out;
}

bool is_word_char(char32_t c) {
  return utf8::is_letter(c) || utf8::is_digit(c) || utf8::is_apostrophe(c) ||
         utf8::is_hyphen(c) || utf8::is_combining_mark(c);
}

std::string at(std::size_t pos) { return " at character " + std::to_string(pos); }

}  // namespace

SourceDocument make_document(std::string doc_id, std::string_view raw_utf8,
                             OrthographyProfile profile) {
  utf8::decode(raw_utf8);  // validation only
  SourceDocument doc;
  doc.doc_id = std::move(doc_id);
  doc.title = doc.doc_id;
  doc.raw_text = normalize_newlines(raw_utf8);
  doc.profile = profile;
  return doc;
}

SourceDocument load_document(const std::filesystem::path& path,
                             OrthographyProfile profile, std::string doc_id) {
  const std::string bytes = tsv::read_file(path);
  if (doc_id.empty()) doc_id = path.stem().string();
  try {
    return make_document(std::move(doc_id), bytes, profile);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::u32string strip_editorial_notes(std::u32string_view raw,
                                     const NoteMarkers& markers) {
  if (markers.open.empty() || markers.close.empty())
    throw Error(ErrorCode::invalid_argument, "note markers must be non-empty");
  std::u32string out;
  out.reserve(raw.size());
  std::size_t depth = 0;
  std::size_t opened_at = 0;
  std::size_t i = 0;
  while (i < raw.size()) {
    if (raw.substr(i, markers.open.size()) == markers.open) {
      if (depth == 0) opened_at = i;
      ++depth;
      i += markers.open.size();
    } else if (raw.substr(i, markers.close.size()) == markers.close) {
      if (depth == 0)
        throw Error(ErrorCode::syntax, "unbalanced note delimiter" + at(i));
      --depth;
      i += markers.close.size();
    } else {
      if (depth == 0) out.push_back(raw[i]);
      ++i;
    }
  }
  if (depth != 0)
    throw Error(ErrorCode::syntax, "unterminated note" + at(opened_at));
  return out;
}

std::u32string expand_bracketed_abbreviations(std::u32string_view text) {
  std::u32string out;
  out.reserve(text.size());
  bool open = false;
  std::size_t opened_at = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char32_t c = text[i];
    if (c == U'[') {
      if (open) throw Error(ErrorCode::syntax, "nested bracket expansion" + at(i));
      open = true;
      opened_at = i;
    } else if (c == U']') {
      if (!open) throw Error(ErrorCode::syntax, "unbalanced ']'" + at(i));
      open = false;
    } else {
      out.push_back(c);
    }
  }
  if (open) throw Error(ErrorCode::syntax, "unterminated '['" + at(opened_at));
  return out;
}

CleanText parse_sense_annotations(std::u32string_view text, std::string provenance) {
  CleanText clean;
  clean.provenance = std::move(provenance);
  clean.text.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const char32_t c = text[i];
    if (c != U'{') {
      clean.text.push_back(c);
      ++i;
      continue;
    }
    const auto close = text.find(U'}', i + 1);
    const auto nested = text.find(U'{', i + 1);
    if (close == std::u32string_view::npos || (nested != std::u32string_view::npos && nested < close))
      throw Error(ErrorCode::syntax, "unterminated '{'" + at(i));
    const std::size_t end = clean.text.size();
    std::size_t begin = end;
    while (begin > 0 && is_word_char(clean.text[begin - 1])) --begin;
    if (begin == end)
      throw Error(ErrorCode::syntax, "sense tag without a preceding word" + at(i));
    if (!clean.annotations.empty() && clean.annotations.back().end > begin)
      throw Error(ErrorCode::syntax, "second sense tag on one word" + at(i));
    std::string tag = utf8::encode(text.substr(i + 1, close - i - 1));
    if (tag.empty()) throw Error(ErrorCode::syntax, "empty sense tag" + at(i));
    clean.annotations.push_back({begin, end, std::move(tag)});
    i = close + 1;
  }
  return clean;
}

CleanText clean_document(const SourceDocument& doc, const NoteMarkers& markers) {
  const std::u32string raw = utf8::decode(doc.raw_text);
  try {
    return parse_sense_annotations(
        expand_bracketed_abbreviations(strip_editorial_notes(raw, markers)), doc.doc_id);
  } catch (const Error& e) {
    throw Error(e.code(), doc.doc_id + ": " + e.what());
  }
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
  const auto content = tsv::read_file(path);
  const auto base = path.parent_path();
  std::vector<ManifestEntry> out;
  std::size_t lineno = 0;
  for (const auto& line : tsv::lines(content)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto fields = tsv::split(line);
    const auto where = path.string() + ":" + std::to_string(lineno);
    if (fields.size() < 2 || fields[0].empty() || fields[1].empty())
      throw Error(ErrorCode::format, where + ": expected id and path");
    ManifestEntry entry;
    entry.doc_id = fields[0];
    entry.path = fields[1];
    if (entry.path.is_relative()) entry.path = base / entry.path;
    if (fields.size() > 2 && !fields[2].empty()) {
      try {
        entry.profile = parse_profile(fields[2]);
      } catch (const Error& e) {
        throw Error(ErrorCode::format, where + ": " + e.what());
      }
    }
    if (fields.size() > 3) {
      for (const auto& kv : tsv::split(fields[3], ';')) {
        if (kv.empty()) continue;
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
          throw Error(ErrorCode::format, where + ": metadata item '" + kv + "' lacks '='");
        entry.metadata[kv.substr(0, eq)] = kv.substr(eq + 1);
      }
    }
    for (const auto& prior : out)
      if (prior.doc_id == entry.doc_id)
        throw Error(ErrorCode::format, where + ": duplicate document id " + entry.doc_id);
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace lexfreq
