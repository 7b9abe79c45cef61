#include "core/lexicon.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <ctime>

#include "core/error.hpp"
#include "core/tokenizer.hpp"
#include "core/tsv.hpp"
#include "core/utf8.hpp"

namespace lexfreq {

namespace {

constexpr const char* kPosNames[] = {
    "noun",     "noun_pl_tantum", "adjective",   "pronoun",      "numeral",
    "verb",     "participle",     "adverb",      "preposition",  "conjunction",
    "particle", "interjection",   "abbreviation", "foreign",     "other"};

// Lower-case and unify apostrophes/hyphens, keeping stress marks.
std::string normalize_key(std::string_view form) {
  std::u32string out;
  for (char32_t c : utf8::decode(form)) {
    if (utf8::is_apostrophe(c)) c = utf8::kApostrophe;
    else if (utf8::is_hyphen(c)) c = utf8::kHyphen;
    out.push_back(utf8::to_lower(c));
  }
  return utf8::encode(out);
}

std::optional<std::string> opt_field(const std::vector<std::string>& f, std::size_t i) {
  if (i < f.size() && !f[i].empty()) return f[i];
  return std::nullopt;
}

Candidate checked(Candidate c) {
  if (c.lemma.empty()) throw Error(ErrorCode::invalid_argument, "candidate lemma is empty");
  tsv::require_plain_field(c.lemma, "lemma");
  if (c.disambiguator && c.disambiguator->empty()) c.disambiguator.reset();
  if (c.language && c.language->empty()) c.language.reset();
  if (c.disambiguator) tsv::require_plain_field(*c.disambiguator, "disambiguator");
  if (c.language) tsv::require_plain_field(*c.language, "language");
  if (c.pos == Pos::foreign && !c.language)
    throw Error(ErrorCode::invalid_argument,
                "foreign candidate " + c.lemma + " needs a language code");
  c.lemma = normalize_lemma(c.lemma);
  return c;
}

void sort_by_priority(std::vector<RankedCandidate>& cands) {
  std::stable_sort(cands.begin(), cands.end(),
                   [](const RankedCandidate& a, const RankedCandidate& b) {
                     return a.priority > b.priority;
                   });
}

std::string fields_of(const Candidate& c) {
  return c.lemma + '\t' + to_string(c.pos) + '\t' + c.disambiguator.value_or("") + '\t' +
         c.language.value_or("");
}

}  // namespace

const char* to_string(Pos pos) noexcept { return kPosNames[static_cast<int>(pos)]; }

Pos parse_pos(std::string_view name) {
  for (int i = 0; i < static_cast<int>(std::size(kPosNames)); ++i)
    if (name == kPosNames[i]) return static_cast<Pos>(i);
  throw Error(ErrorCode::invalid_argument, "unknown part of speech '" + std::string(name) + "'");
}

bool strips_enclitic(Pos pos) noexcept {
  switch (pos) {
    case Pos::noun:
    case Pos::noun_pl_tantum:
    case Pos::adjective:
    case Pos::pronoun:
    case Pos::numeral:
    case Pos::verb:
    case Pos::participle:
      return true;
    default:
      return false;
  }
}

std::string Candidate::display() const {
  return disambiguator ? lemma + " (" + *disambiguator + ")" : lemma;
}

std::string normalize_lemma(std::string_view lemma) {
  const auto text = utf8::decode(lemma);
  const bool cyrillic = std::any_of(text.begin(), text.end(), utf8::is_cyrillic_letter);
  return cyrillic ? utf8::encode(utf8::upper(text)) : std::string(lemma);
}

const char* to_string(VariantKind kind) noexcept {
  return kind == VariantKind::euphonic ? "euphonic" : "orthographic";
}

const char* to_string(DecisionScope scope) noexcept {
  return scope == DecisionScope::global ? "global" : "occurrence";
}

DecisionScope parse_scope(std::string_view name) {
  if (name == "global") return DecisionScope::global;
  if (name == "occurrence") return DecisionScope::occurrence;
  throw Error(ErrorCode::invalid_argument, "unknown decision scope '" + std::string(name) + "'");
}

std::vector<VariantGroup> default_variant_groups() {
  using K = VariantKind;
  return {
      {"ся", {"ся", "сь"}, K::euphonic},
      {"іти", {"іти", "йти"}, K::euphonic},
      {"щоб", {"щоб", "щоби"}, K::euphonic},
      {"і", {"і", "й"}, K::euphonic},
      {"же", {"ж", "же"}, K::euphonic},
      {"би", {"б", "би"}, K::euphonic},
      {"в", {"у", "в"}, K::euphonic},
      {"з", {"з", "із", "зі", "зо"}, K::euphonic},
      {"під", {"під", "підо"}, K::euphonic},
      {"весь", {"весь", "увесь", "ввесь"}, K::euphonic},
      {"всякий", {"всякий", "усякий"}, K::euphonic},
      {"тільки", {"тільки", "тілько"}, K::orthographic},
      {"скільки", {"скільки", "скілько"}, K::orthographic},
      {"ледве", {"ледве", "ледво"}, K::orthographic},
      {"трохи", {"трохи", "троха"}, K::orthographic},
  };
}

void Lexicon::add(std::string_view form_key, Candidate candidate, int priority) {
  const auto raw = normalize_key(form_key);
  if (raw.empty()) throw Error(ErrorCode::invalid_argument, "empty form key");
  tsv::require_plain_field(raw, "form key");
  const auto key = canonicalize_variant(raw);
  candidate = checked(std::move(candidate));
  auto& entry = entries_[key];
  entry.form_key = key;
  auto it = std::find_if(entry.candidates.begin(), entry.candidates.end(),
                         [&](const RankedCandidate& rc) { return rc.candidate == candidate; });
  if (it == entry.candidates.end()) {
    entry.candidates.push_back({std::move(candidate), priority});
  } else {
    it->priority = std::max(it->priority, priority);
  }
  sort_by_priority(entry.candidates);
}

void Lexicon::add_variant_group(VariantGroup group) {
  group.head = normalize_key(group.head);
  std::set<std::string> members;
  for (const auto& m : group.members) members.insert(normalize_key(m));
  members.insert(group.head);
  group.members = std::move(members);
  for (const auto& m : group.members)
    if (member_to_group_.contains(m))
      throw Error(ErrorCode::invalid_argument,
                  "variant '" + m + "' already belongs to group '" +
                      groups_[member_to_group_.find(m)->second].head + "'");
  for (const auto& m : group.members) member_to_group_.emplace(m, groups_.size());
  groups_.push_back(std::move(group));
  // Rows already filed under a member now belong to the head.
  const auto& g = groups_.back();
  for (const auto& m : g.members) {
    if (m == g.head) continue;
    auto it = entries_.find(m);
    if (it == entries_.end()) continue;
    auto moved = std::move(it->second.candidates);
    entries_.erase(it);
    for (auto& rc : moved) add(g.head, std::move(rc.candidate), rc.priority);
  }
}

void Lexicon::add_default_variant_groups() {
  for (auto& g : default_variant_groups()) {
    const bool clash = std::any_of(g.members.begin(), g.members.end(),
                                   [&](const std::string& m) { return member_to_group_.contains(m); });
    if (!clash) add_variant_group(std::move(g));
  }
}

std::string Lexicon::canonicalize_variant(std::string_view form) const {
  const auto it = member_to_group_.find(form);
  if (it != member_to_group_.end()) return groups_[it->second].head;
  return std::string(form);
}

const LexiconEntry* Lexicon::find(std::string_view form_key) const {
  const auto key = normalize_key(form_key);
  auto it = entries_.find(canonicalize_variant(key));
  if (it == entries_.end()) it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<Candidate> Lexicon::lookup(std::string_view form_key) const {
  std::vector<Candidate> out;
  if (const auto* entry = find(form_key))
    for (const auto& rc : entry->candidates) out.push_back(rc.candidate);
  return out;
}

std::optional<Candidate> Lexicon::preferred(std::string_view form_key) const {
  const auto* entry = find(form_key);
  if (!entry || entry->candidates.empty()) return std::nullopt;
  const auto& c = entry->candidates;
  if (c.size() == 1 || c[0].priority > c[1].priority) return c[0].candidate;
  return std::nullopt;
}

bool Lexicon::preferred_by_priority(std::string_view form_key) const {
  const auto* entry = find(form_key);
  return entry && entry->candidates.size() > 1 &&
         entry->candidates[0].priority > entry->candidates[1].priority;
}

std::optional<Candidate> Lexicon::occurrence_binding(const Occurrence& at) const {
  const auto it = bindings_.find(at);
  if (it == bindings_.end()) return std::nullopt;
  return it->second.second;
}

void Lexicon::record_decision(const Decision& decision, const OccurrenceIndex* known) {
  if ((decision.scope == DecisionScope::occurrence) != decision.occurrence.has_value())
    throw Error(ErrorCode::invalid_argument,
                "occurrence must be given exactly for occurrence-scoped decisions");
  tsv::require_plain_field(decision.annotator, "annotator");
  Candidate chosen = checked(decision.chosen);
  const auto raw_key = normalize_key(decision.form_key);
  if (raw_key.empty()) throw Error(ErrorCode::invalid_argument, "decision without form key");
  const auto key = canonicalize_variant(raw_key);

  if (decision.scope == DecisionScope::occurrence) {
    const auto& at = *decision.occurrence;
    tsv::require_plain_field(at.doc_id, "doc_id");
    if (known) {
      const auto it = known->find(at);
      if (it == known->end() || canonicalize_variant(normalize_key(it->second)) != key)
        throw Error(ErrorCode::not_found, "no occurrence of '" + raw_key + "' at " + at.doc_id +
                                              ":" + std::to_string(at.char_offset));
    }
    bindings_[at] = {key, chosen};
  } else {
    const LexiconEntry* existing = find(key);
    const std::string entry_key = existing ? existing->form_key : key;
    auto& entry = entries_[entry_key];
    entry.form_key = entry_key;
    int top_other = 0;
    bool already_top = false;
    for (std::size_t i = 0; i < entry.candidates.size(); ++i) {
      const auto& rc = entry.candidates[i];
      if (rc.candidate == chosen) {
        already_top = i == 0 && (entry.candidates.size() == 1 ||
                                 rc.priority > entry.candidates[1].priority);
      } else {
        top_other = std::max(top_other, rc.priority);
      }
    }
    if (!already_top) {
      auto it = std::find_if(entry.candidates.begin(), entry.candidates.end(),
                             [&](const RankedCandidate& rc) { return rc.candidate == chosen; });
      if (it == entry.candidates.end())
        entry.candidates.push_back({chosen, top_other + 1});
      else
        it->priority = top_other + 1;
      sort_by_priority(entry.candidates);
    }
  }
  Decision logged = decision;
  logged.form_key = key;
  logged.chosen = std::move(chosen);
  log_.push_back(std::move(logged));
}

std::unordered_set<std::string> Lexicon::accented_forms() const {
  std::unordered_set<std::string> out;
  for (const auto& [key, entry] : entries_)
    for (char32_t c : utf8::decode(key))
      if (utf8::is_stress_accent(c)) {
        out.insert(key);
        break;
      }
  return out;
}

bool Lexicon::operator==(const Lexicon& other) const {
  return entries_ == other.entries_ && groups_ == other.groups_ && bindings_ == other.bindings_;
}

Lexicon parse_lexicon(std::string_view content, std::string_view source) {
  Lexicon lex;
  std::size_t lineno = 0;
  for (const auto& line : tsv::lines(content)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto where = std::string(source) + ":" + std::to_string(lineno) + ": ";
    const auto f = tsv::split(line);
    try {
      if (f[0] == "@variant") {
        if (f.size() < 4) throw Error(ErrorCode::format, "@variant needs kind, head, members");
        VariantGroup g;
        if (f[1] == "euphonic") g.kind = VariantKind::euphonic;
        else if (f[1] == "orthographic") g.kind = VariantKind::orthographic;
        else throw Error(ErrorCode::format, "unknown variant kind '" + f[1] + "'");
        g.head = f[2];
        for (auto& m : tsv::split(f[3], '|'))
          if (!m.empty()) g.members.insert(m);
        lex.add_variant_group(std::move(g));
      } else if (f[0] == "@occurrence") {
        if (f.size() < 6) throw Error(ErrorCode::format, "@occurrence needs doc, offset, form, lemma, pos");
        Decision d;
        d.scope = DecisionScope::occurrence;
        d.occurrence = Occurrence{f[1], static_cast<std::size_t>(std::stoull(f[2]))};
        d.form_key = f[3];
        d.chosen = {f[4], parse_pos(f[5]), opt_field(f, 6), opt_field(f, 7)};
        lex.record_decision(d);
      } else {
        if (f.size() < 3)
          throw Error(ErrorCode::format, "expected at least 3 fields, got " + std::to_string(f.size()));
        int priority = 0;
        if (f.size() > 5 && !f[5].empty()) priority = std::stoi(f[5]);
        lex.add(f[0], Candidate{f[1], parse_pos(f[2]), opt_field(f, 3), opt_field(f, 4)}, priority);
      }
    } catch (const Error& e) {
      throw Error(ErrorCode::format, where + e.what());
    } catch (const std::logic_error& e) {  // stoi/stoull
      throw Error(ErrorCode::format, where + "bad number");
    }
  }
  return lex;
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  return parse_lexicon(tsv::read_file(path), path.string());
}

std::string serialize_lexicon(const Lexicon& lex) {
  std::string out = "# form_key\tlemma\tpos\tdisambiguator\tlanguage\tpriority\n";
  for (const auto& g : lex.variant_groups()) {
    std::vector<std::string> members(g.members.begin(), g.members.end());
    out += "@variant\t" + std::string(to_string(g.kind)) + '\t' + g.head + '\t' +
           tsv::join(members, '|') + '\n';
  }
  for (const auto& [key, entry] : lex.entries())
    for (const auto& rc : entry.candidates)
      out += key + '\t' + fields_of(rc.candidate) + '\t' + std::to_string(rc.priority) + '\n';
  for (const auto& [at, bound] : lex.occurrence_bindings())
    out += "@occurrence\t" + at.doc_id + '\t' + std::to_string(at.char_offset) + '\t' +
           bound.first + '\t' + fields_of(bound.second) + '\n';
  return out;
}

void save_lexicon(const Lexicon& lex, const std::filesystem::path& path) {
  const auto tmp = path.string() + ".tmp";
  tsv::write_file(tmp, serialize_lexicon(lex));
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::io, "cannot replace " + path.string() + ": " + ec.message());
}

std::string format_decision(const Decision& d) {
  tsv::require_plain_field(d.timestamp, "timestamp");
  tsv::require_plain_field(d.annotator, "annotator");
  std::string doc, offset;
  if (d.occurrence) {
    tsv::require_plain_field(d.occurrence->doc_id, "doc_id");
    doc = d.occurrence->doc_id;
    offset = std::to_string(d.occurrence->char_offset);
  }
  return d.timestamp + '\t' + d.annotator + '\t' + to_string(d.scope) + '\t' + doc + '\t' +
         offset + '\t' + d.form_key + '\t' + fields_of(d.chosen);
}

Decision parse_decision(std::string_view line, std::size_t lineno) {
  const auto f = tsv::split(line);
  const auto where = "decision line " + std::to_string(lineno) + ": ";
  if (f.size() < 8)
    throw Error(ErrorCode::format, where + "expected at least 8 fields, got " + std::to_string(f.size()));
  try {
    Decision d;
    d.timestamp = f[0];
    d.annotator = f[1];
    d.scope = parse_scope(f[2]);
    if (!f[3].empty() || !f[4].empty()) {
      if (f[3].empty() || f[4].empty()) throw Error(ErrorCode::format, "partial occurrence");
      d.occurrence = Occurrence{f[3], static_cast<std::size_t>(std::stoull(f[4]))};
    }
    if ((d.scope == DecisionScope::occurrence) != d.occurrence.has_value())
      throw Error(ErrorCode::format, "occurrence given for wrong scope");
    d.form_key = f[5];
    if (d.form_key.empty()) throw Error(ErrorCode::format, "empty form key");
    d.chosen = {f[6], parse_pos(f[7]), opt_field(f, 8), opt_field(f, 9)};
    d.chosen = checked(d.chosen);
    return d;
  } catch (const Error& e) {
    throw Error(ErrorCode::format, where + e.what());
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::format, where + "bad offset");
  }
}

std::vector<Decision> load_decision_log(const std::filesystem::path& path) {
  std::vector<Decision> out;
  if (!std::filesystem::exists(path)) return out;
  std::size_t lineno = 0;
  for (const auto& line : tsv::lines(tsv::read_file(path))) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    try {
      out.push_back(parse_decision(line, lineno));
    } catch (const Error& e) {
      throw Error(e.code(), path.string() + ": " + e.what());
    }
  }
  return out;
}

void append_decision(const std::filesystem::path& path, const Decision& decision) {
  const std::string line = format_decision(decision) + '\n';
  const int fd = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (fd < 0) throw Error(ErrorCode::io, "cannot open " + path.string() + ": " + std::strerror(errno));
  const auto written = ::write(fd, line.data(), line.size());
  const bool ok = written == static_cast<ssize_t>(line.size()) && ::fsync(fd) == 0;
  const int saved = errno;
  ::close(fd);
  if (!ok) throw Error(ErrorCode::io, "cannot append to " + path.string() + ": " + std::strerror(saved));
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace lexfreq
