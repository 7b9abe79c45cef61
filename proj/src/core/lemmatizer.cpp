#include "core/lemmatizer.hpp"

#include <algorithm>
#include <map>

#include "core/error.hpp"
#include "core/tsv.hpp"
#include "core/utf8.hpp"

namespace lexfreq {

const char* to_string(Resolution r) noexcept {
  switch (r) {
    case Resolution::lexicon_unique: return "lexicon_unique";
    case Resolution::sense_annotation: return "sense_annotation";
    case Resolution::human_decision: return "human_decision";
    case Resolution::self_lemma: return "self_lemma";
    case Resolution::self_lemma_unknown: return "self_lemma_unknown";
    case Resolution::pending: return "pending";
  }
  return "pending";
}

namespace {

const FeatureSet kParadigmFlags = {"pluralia_tantum", "person_class", "suppletive"};

struct CellQuery {
  FeatureSet required;
  FeatureSet excluded;
  FeatureSet preferred;
};

bool has(const FeatureSet& set, const char* tag) { return set.contains(tag); }

const ParadigmRow* select_cell(const Paradigm& p, const CellQuery& q) {
  const ParadigmRow* best = nullptr;
  std::size_t best_score = 0;
  for (const auto& row : p.rows) {
    const bool ok =
        std::all_of(q.required.begin(), q.required.end(), [&](auto& t) { return row.features.contains(t); }) &&
        std::none_of(q.excluded.begin(), q.excluded.end(), [&](auto& t) { return row.features.contains(t); });
    if (!ok) continue;
    const auto score = static_cast<std::size_t>(std::count_if(
        q.preferred.begin(), q.preferred.end(), [&](auto& t) { return row.features.contains(t); }));
    if (!best || score > best_score) {
      best = &row;
      best_score = score;
    }
  }
  return best;
}

std::string lower_key(std::string_view form) { return normalize_form(form, nullptr); }

bool is_invariable(Pos pos) {
  switch (pos) {
    case Pos::preposition:
    case Pos::conjunction:
    case Pos::particle:
    case Pos::interjection:
    case Pos::abbreviation:
      return true;
    default:
      return false;
  }
}

template <typename Surface>
KwicLine kwic_impl(std::size_t count, std::size_t index, std::size_t width, Surface&& at) {
  // at(i) -> pair<const std::string& doc_id, const std::string& surface>
  KwicLine line;
  const auto& doc = at(index).first;
  line.keyword = at(index).second;
  std::size_t lo = index;
  while (lo > 0 && index - lo < width && at(lo - 1).first == doc) --lo;
  for (std::size_t i = lo; i < index; ++i) {
    if (!line.left.empty()) line.left += ' ';
    line.left += at(i).second;
  }
  for (std::size_t i = index + 1; i < count && i - index <= width && at(i).first == doc; ++i) {
    if (!line.right.empty()) line.right += ' ';
    line.right += at(i).second;
  }
  return line;
}

std::string serialize_candidates(const std::vector<Candidate>& cands) {
  std::string out;
  for (const auto& c : cands) {
    if (!out.empty()) out += ';';
    out += c.lemma + '|' + to_string(c.pos) + '|' + c.disambiguator.value_or("") + '|' +
           c.language.value_or("");
  }
  return out;
}

}  // namespace

std::string reduce_by_scheme(std::string_view form, Pos pos, const FeatureSet& features,
                             const Paradigm& paradigm) {
  const auto key = lower_key(form);
  const bool member = std::any_of(paradigm.rows.begin(), paradigm.rows.end(),
                                  [&](const ParadigmRow& r) { return lower_key(r.form) == key; });
  if (!member)
    throw Error(ErrorCode::invalid_argument,
                "form '" + key + "' is not in paradigm '" + paradigm.id + "'");
  if (is_invariable(pos)) return normalize_lemma(key);

  const bool suppletive = has(paradigm.flags, "suppletive");
  CellQuery q;
  switch (pos) {
    case Pos::noun:
      if (has(paradigm.flags, "pluralia_tantum") ||
          (has(paradigm.flags, "person_class") && has(features, "pl")))
        q.required = {"nom", "pl"};
      else
        q.required = {"nom", "sg"};
      break;
    case Pos::noun_pl_tantum:
      q.required = {"nom", "pl"};
      break;
    case Pos::adjective:
    case Pos::participle:
      q.required = {"nom", "sg", "masc"};
      if (suppletive) q.required.insert("comp");
      else q.excluded = {"comp", "superl"};
      break;
    case Pos::adverb:
      if (suppletive) q.required = {"comp"};
      else q.excluded = {"comp", "superl"};
      break;
    case Pos::pronoun:
    case Pos::numeral:
      q.required = {"nom"};
      q.preferred = {"sg", "masc"};
      break;
    case Pos::verb:
      q.required = {"inf"};
      break;
    default:
      throw Error(ErrorCode::invalid_argument,
                  std::string("no reduction scheme for part of speech '") + to_string(pos) +
                      "' (form '" + key + "')");
  }
  const auto* cell = select_cell(paradigm, q);
  if (!cell)
    throw Error(ErrorCode::invalid_argument, "paradigm '" + paradigm.id +
                                                 "' has no dictionary-form cell for '" + key + "'");
  return normalize_lemma(lower_key(cell->form));
}

std::vector<Paradigm> parse_paradigms(std::string_view content, std::string_view source) {
  std::vector<Paradigm> out;
  std::map<std::string, std::size_t> index;
  std::size_t lineno = 0;
  for (const auto& line : tsv::lines(content)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto where = std::string(source) + ":" + std::to_string(lineno) + ": ";
    const auto f = tsv::split(line);
    if (f.size() < 4 || f[0].empty() || f[2].empty())
      throw Error(ErrorCode::format, where + "expected paradigm_id, pos, form, features");
    Pos pos;
    try {
      pos = parse_pos(f[1]);
    } catch (const Error& e) {
      throw Error(ErrorCode::format, where + e.what());
    }
    auto [it, fresh] = index.emplace(f[0], out.size());
    if (fresh) {
      Paradigm p;
      p.id = f[0];
      p.pos = pos;
      out.push_back(std::move(p));
    }
    auto& p = out[it->second];
    if (p.pos != pos) throw Error(ErrorCode::format, where + "paradigm '" + p.id + "' changes pos");
    if (f.size() > 4 && !f[4].empty()) {
      if (p.disambiguator && *p.disambiguator != f[4])
        throw Error(ErrorCode::format, where + "paradigm '" + p.id + "' changes disambiguator");
      p.disambiguator = f[4];
    }
    ParadigmRow row{f[2], {}};
    for (auto& tag : tsv::split(f[3], ','))
      if (!tag.empty()) {
        if (kParadigmFlags.contains(tag)) p.flags.insert(tag);
        else row.features.insert(tag);
      }
    p.rows.push_back(std::move(row));
  }
  for (const auto& p : out) {
    if (!has(p.flags, "suppletive")) continue;
    for (const auto& r : p.rows)
      if (!has(r.features, "comp") && !has(r.features, "superl"))
        throw Error(ErrorCode::format, std::string(source) + ": suppletive paradigm '" + p.id +
                                           "' holds positive-degree form '" + r.form + "'");
  }
  return out;
}

std::vector<Paradigm> load_paradigms(const std::filesystem::path& path) {
  return parse_paradigms(tsv::read_file(path), path.string());
}

void add_paradigms(Lexicon& lexicon, std::span<const Paradigm> paradigms) {
  for (const auto& p : paradigms)
    for (const auto& row : p.rows)
      lexicon.add(row.form, Candidate{reduce_by_scheme(row.form, p.pos, row.features, p), p.pos,
                                      p.disambiguator, std::nullopt});
}

EncliticResolution strip_enclitic_if_content_word(const Token& token, const Lexicon& lexicon) {
  EncliticResolution res;
  res.effective_key = lexicon.canonicalize_variant(token.norm);
  res.split = detect_hyphen_enclitic(token);
  if (!res.split || lexicon.find(res.effective_key)) return res;

  const auto base_key = lexicon.canonicalize_variant(res.split->base);
  const auto base = lexicon.lookup(base_key);
  if (std::any_of(base.begin(), base.end(), [](const Candidate& c) { return strips_enclitic(c.pos); })) {
    res.effective_key = base_key;
    res.particle_stripped = true;
  } else if (auto pref = lexicon.preferred(base_key)) {
    Candidate kept = *pref;
    kept.lemma = normalize_lemma(kept.lemma + "-" + to_string(res.split->particle));
    res.kept_particle_lemma = std::move(kept);
  }
  return res;
}

LemmatizeResult lemmatize_stream(std::span<const Token> tokens, const Lexicon& lexicon,
                                 std::size_t kwic_width) {
  LemmatizeResult result;
  result.tokens.reserve(tokens.size());
  for (const auto& token : tokens) {
    LemmatizedToken lt;
    lt.token = token;
    lt.form_key = lexicon.canonicalize_variant(token.norm);
    lt.lookup_key = lt.form_key;

    if (token.script == Script::digit) {
      lt.lemma = Candidate{token.surface, Pos::numeral, std::nullopt, std::nullopt};
      lt.resolution = Resolution::self_lemma;
      result.tokens.push_back(std::move(lt));
      continue;
    }

    const auto enclitic = strip_enclitic_if_content_word(token, lexicon);
    lt.lookup_key = enclitic.effective_key;

    if (auto bound = lexicon.occurrence_binding({token.doc_id, token.char_offset})) {
      lt.lemma = std::move(bound);
      lt.resolution = Resolution::human_decision;
    } else if (token.sense_tag) {
      const auto cands = lexicon.lookup(lt.lookup_key);
      auto hit = std::find_if(cands.begin(), cands.end(), [&](const Candidate& c) {
        return c.disambiguator == token.sense_tag;
      });
      if (hit != cands.end()) {
        lt.lemma = *hit;
      } else {
        Candidate authored{cands.empty() ? normalize_lemma(lt.lookup_key) : cands.front().lemma,
                           cands.empty() ? Pos::other : cands.front().pos, token.sense_tag,
                           cands.empty() ? std::nullopt : cands.front().language};
        result.notes.push_back("authored candidate " + authored.display() + " for '" +
                               lt.lookup_key + "' at " + token.doc_id + ":" +
                               std::to_string(token.char_offset));
        lt.lemma = std::move(authored);
      }
      lt.resolution = Resolution::sense_annotation;
    } else if (auto pref = lexicon.preferred(lt.lookup_key)) {
      lt.resolution = pref->disambiguator == "?"                     ? Resolution::self_lemma_unknown
                      : lexicon.preferred_by_priority(lt.lookup_key) ? Resolution::human_decision
                                                                     : Resolution::lexicon_unique;
      lt.lemma = std::move(pref);
    } else if (enclitic.kept_particle_lemma) {
      lt.lemma = enclitic.kept_particle_lemma;
      lt.resolution = Resolution::lexicon_unique;
    }
    result.tokens.push_back(std::move(lt));
  }
  result.queue = build_queue(result.tokens, lexicon, kwic_width);
  return result;
}

ApplyReport apply_decisions(std::vector<LemmatizedToken>& tokens,
                            std::span<const Decision> decisions, const Lexicon& lexicon) {
  ApplyReport report;
  std::map<std::string, Candidate> global;
  std::map<Occurrence, std::pair<std::string, Candidate>> local;
  for (const auto& d : decisions) {
    const auto key = lexicon.canonicalize_variant(normalize_form(d.form_key, nullptr));
    if (d.scope == DecisionScope::global) {
      auto [it, fresh] = global.emplace(key, d.chosen);
      if (!fresh && !(it->second == d.chosen)) {
        report.warnings.push_back("conflicting global decisions for '" + key + "': " +
                                  it->second.display() + " replaced by " + d.chosen.display());
        it->second = d.chosen;
      }
    } else if (d.occurrence) {
      local[*d.occurrence] = {key, d.chosen};
    }
  }
  for (auto& lt : tokens) {
    if (lt.resolution != Resolution::pending) continue;
    const Occurrence at{lt.token.doc_id, lt.token.char_offset};
    if (auto it = local.find(at); it != local.end()) {
      if (it->second.first == lt.lookup_key || it->second.first == lt.form_key) {
        lt.lemma = it->second.second;
        lt.resolution = Resolution::human_decision;
        ++report.resolved;
        continue;
      }
      report.warnings.push_back("occurrence decision at " + at.doc_id + ":" +
                                std::to_string(at.char_offset) + " names '" + it->second.first +
                                "' but the token there is '" + lt.form_key + "'");
    }
    auto it = global.find(lt.lookup_key);
    if (it == global.end()) it = global.find(lt.form_key);
    if (it != global.end()) {
      lt.lemma = it->second;
      lt.resolution = Resolution::human_decision;
      ++report.resolved;
    }
  }
  return report;
}

std::vector<AmbiguityItem> build_queue(std::span<const LemmatizedToken> tokens,
                                       const Lexicon& lexicon, std::size_t kwic_width) {
  std::vector<AmbiguityItem> queue;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& lt = tokens[i];
    if (lt.resolution != Resolution::pending) continue;
    queue.push_back({{lt.token.doc_id, lt.token.char_offset},
                     lt.lookup_key,
                     lexicon.lookup(lt.lookup_key),
                     kwic_at(tokens, i, kwic_width)});
  }
  std::stable_sort(queue.begin(), queue.end(), [](const AmbiguityItem& a, const AmbiguityItem& b) {
    return a.occurrence < b.occurrence;
  });
  return queue;
}

KwicLine kwic_at(std::span<const Token> tokens, std::size_t index, std::size_t width) {
  return kwic_impl(tokens.size(), index, width, [&](std::size_t i) {
    return std::pair<const std::string&, const std::string&>(tokens[i].doc_id, tokens[i].surface);
  });
}

KwicLine kwic_at(std::span<const LemmatizedToken> tokens, std::size_t index, std::size_t width) {
  return kwic_impl(tokens.size(), index, width, [&](std::size_t i) {
    return std::pair<const std::string&, const std::string&>(tokens[i].token.doc_id,
                                                             tokens[i].token.surface);
  });
}

std::string format_queue_row(const AmbiguityItem& item) {
  return item.occurrence.doc_id + '\t' + std::to_string(item.occurrence.char_offset) + '\t' +
         item.form_key + '\t' + serialize_candidates(item.candidates) + '\t' + item.kwic.left +
         '\t' + item.kwic.keyword + '\t' + item.kwic.right;
}

}  // namespace lexfreq
