#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "core/ingest.hpp"
#include "core/lemmatizer.hpp"
#include "core/lexicon.hpp"
#include "core/tokenizer.hpp"
#include "core/utf8.hpp"

namespace testing {

inline std::filesystem::path source_dir() { return LEXFREQ_SOURCE_DIR; }
inline std::filesystem::path minicorpus() { return source_dir() / "data" / "minicorpus"; }
inline std::filesystem::path golden(const std::string& name) {
  return source_dir() / "tests" / "golden" / name;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << content;
}

// Fresh directory under the system temp dir, removed on destruction.
struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path = std::filesystem::temp_directory_path() /
           ("lexfreq-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::filesystem::path operator/(const std::string& name) const { return path / name; }
};

inline std::vector<lexfreq::Token> tokens_of(
    const std::string& text,
    lexfreq::OrthographyProfile profile = lexfreq::OrthographyProfile::modern_edition,
    const std::string& doc_id = "d") {
  auto doc = lexfreq::make_document(doc_id, text, profile);
  lexfreq::TokenizerOptions opts;
  opts.profile = profile;
  return lexfreq::tokenize(lexfreq::clean_document(doc), opts);
}

inline std::vector<std::string> surfaces(const std::vector<lexfreq::Token>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) out.push_back(t.surface);
  return out;
}

inline std::u32string u32(const std::string& s) { return lexfreq::utf8::decode(s); }
inline std::string u8(const std::u32string& s) { return lexfreq::utf8::encode(s); }

}  // namespace testing
