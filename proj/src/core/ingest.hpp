#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace lexfreq {

/// Spelling conventions of the edition a text was taken from. The first
/// edition writes the reflexive particle "ся" as a separate word.
enum class OrthographyProfile { modern_edition, first_edition };

const char* to_string(OrthographyProfile profile) noexcept;
OrthographyProfile parse_profile(std::string_view name);

struct SourceDocument {
  std::string doc_id;
  std::string title;
  std::string raw_text;  // UTF-8, LF newlines
  OrthographyProfile profile = OrthographyProfile::modern_edition;
  std::map<std::string, std::string> metadata;
};

/// Footnote delimiters of a corpus package.
struct NoteMarkers {
  std::u32string open = U"⟦";
  std::u32string close = U"⟧";
};

/// Half-open range [begin, end) in code points of CleanText::text.
struct SenseAnnotation {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string tag;

  bool operator==(const SenseAnnotation&) const = default;
};

struct CleanText {
  std::u32string text;
  std::vector<SenseAnnotation> annotations;
  std::string provenance;
};

/// Reads a UTF-8 file, normalizing CRLF and lone CR to LF. The doc id
/// defaults to the file stem.
SourceDocument load_document(const std::filesystem::path& path,
                             OrthographyProfile profile,
                             std::string doc_id = {});

SourceDocument make_document(std::string doc_id, std::string_view raw_utf8,
                             OrthographyProfile profile);

/// Removes every delimited footnote body, including the delimiters.
/// Nested notes are removed with their parent.
std::u32string strip_editorial_notes(std::u32string_view raw,
                                     const NoteMarkers& markers = {});

/// "КС[ЬОНДЗ]" -> "КСЬОНДЗ". Nested or unbalanced brackets are errors.
std::u32string expand_bracketed_abbreviations(std::u32string_view text);

/// Extracts inline word{tag} annotations. The annotated range is the run of
/// word characters immediately before the opening brace.
CleanText parse_sense_annotations(std::u32string_view text,
                                  std::string provenance = {});

/// Full ingest: notes, bracket expansions, then sense annotations.
CleanText clean_document(const SourceDocument& doc,
                         const NoteMarkers& markers = {});

struct ManifestEntry {
  std::string doc_id;
  std::filesystem::path path;  // resolved against the manifest directory
  OrthographyProfile profile = OrthographyProfile::modern_edition;
  std::map<std::string, std::string> metadata;
};

/// TSV: id, path, profile, metadata ("key=value;key=value"). Blank lines and
/// lines starting with '#' are skipped.
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);

}  // namespace lexfreq
