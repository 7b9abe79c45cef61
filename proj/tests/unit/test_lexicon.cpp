#include <doctest.h>

#include "core/error.hpp"
#include "support.hpp"

using namespace lexfreq;

namespace {

Lexicon small_lexicon() {
  return parse_lexicon(
      "# form_key\tlemma\tpos\tdisambiguator\tlanguage\tpriority\n"
      "адвокат\tАДВОКАТ\tnoun\n"
      "адвоката\tАДВОКАТ\tnoun\n"
      "адукат\tАДУКАТ\tnoun\n"
      "мати\tМАТИ\tnoun\tім.\n"
      "мати\tМАТИ\tverb\tдієсл.\n"
      "паня\tПАНЯ\tnoun\n"
      "паня\tПАНЯ\tnoun\tжін. І відм.\n"
      "maxima\tmaximus\tadjective\t\tla\n"
      "maxima\tmaximum\tnoun\t\tla\n"
      "тільки\tТІЛЬКИ\tparticle\n"
      "@variant\torthographic\tказета\tказета\n");
}

Decision global(const std::string& key, Candidate c) {
  Decision d;
  d.form_key = key;
  d.chosen = std::move(c);
  d.annotator = "t";
  d.timestamp = "2026-01-01T00:00:00Z";
  return d;
}

}  // namespace

TEST_CASE("lookup") {
  auto lex = small_lexicon();
  auto a = lex.lookup("адвоката");
  REQUIRE(a.size() == 1);
  CHECK(a[0] == Candidate{"АДВОКАТ", Pos::noun, {}, {}});

  auto m = lex.lookup("мати");
  REQUIRE(m.size() == 2);
  CHECK(m[0].pos == Pos::noun);
  CHECK(m[1].pos == Pos::verb);
  CHECK_FALSE(lex.preferred("мати").has_value());

  CHECK(lex.lookup("xyzzy").empty());
  CHECK(lex.lookup("Адвоката").size() == 1);
}

TEST_CASE("canonicalize_variant") {
  Lexicon lex;
  lex.add_default_variant_groups();
  CHECK(lex.canonicalize_variant("усякий") == "всякий");
  CHECK(lex.canonicalize_variant("тілько") == "тільки");
  CHECK(lex.canonicalize_variant("казета") == "казета");
  CHECK(lex.canonicalize_variant("газета") == "газета");
  CHECK(lex.canonicalize_variant("адукат") == "адукат");
  CHECK(lex.canonicalize_variant("й") == "і");
  CHECK(lex.canonicalize_variant("у") == "в");
  CHECK(lex.canonicalize_variant("із") == "з");
}

TEST_CASE("canonicalize_variant is idempotent and total") {
  Lexicon lex;
  lex.add_default_variant_groups();
  std::vector<std::string> probe{"", "x", "адвокат", "адукат", "казета"};
  for (const auto& g : lex.variant_groups())
    for (const auto& m : g.members) probe.push_back(m);
  for (const auto& f : probe) {
    const auto once = lex.canonicalize_variant(f);
    CHECK(lex.canonicalize_variant(once) == once);
  }
}

TEST_CASE("variant groups keep speech-characterizing forms apart") {
  auto lex = small_lexicon();
  lex.add_default_variant_groups();
  CHECK(lex.lookup("тілько").at(0).lemma == "ТІЛЬКИ");
  CHECK(lex.lookup("адукат").at(0).lemma == "АДУКАТ");
  CHECK(lex.lookup("адвокат").at(0).lemma == "АДВОКАТ");
}

TEST_CASE("variant group clashes are rejected") {
  Lexicon lex;
  lex.add_variant_group({"тільки", {"тілько"}, VariantKind::orthographic});
  CHECK_THROWS_AS(lex.add_variant_group({"тілько", {"тільки"}, VariantKind::orthographic}), Error);
}

TEST_CASE("priority resolves homographs") {
  auto lex = parse_lexicon("лиса\tЛИС\tnoun\t\t\t1\nлиса\tЛИС\tnoun\tім'я\n");
  REQUIRE(lex.preferred("лиса").has_value());
  CHECK_FALSE(lex.preferred("лиса")->disambiguator.has_value());
  CHECK(lex.preferred_by_priority("лиса"));
}

TEST_CASE("global decision makes lookup resolve uniquely") {
  auto lex = small_lexicon();
  CHECK_FALSE(lex.preferred("паня").has_value());
  const Candidate chosen{"ПАНЯ", Pos::noun, "жін. І відм.", {}};
  lex.record_decision(global("паня", chosen));
  CHECK(lex.lookup("паня").front() == chosen);
  REQUIRE(lex.preferred("паня").has_value());
  CHECK(*lex.preferred("паня") == chosen);

  auto again = lex;
  again.record_decision(global("паня", chosen));
  CHECK(again == lex);
}

TEST_CASE("global decision through a variant lands on the head") {
  auto lex = small_lexicon();
  lex.add_default_variant_groups();
  lex.record_decision(global("тілько", {"ТІЛЬКИ", Pos::conjunction, {}, {}}));
  CHECK(lex.lookup("тільки").front().pos == Pos::conjunction);
}

TEST_CASE("occurrence decision binds one token") {
  auto lex = small_lexicon();
  OccurrenceIndex known{{{"doc1", 512}, "мати"}, {{"doc1", 600}, "мати"}};
  Decision d = global("мати", {"МАТИ", Pos::verb, "дієсл.", {}});
  d.scope = DecisionScope::occurrence;
  d.occurrence = Occurrence{"doc1", 512};
  lex.record_decision(d, &known);
  CHECK(lex.occurrence_binding({"doc1", 512})->pos == Pos::verb);
  CHECK_FALSE(lex.occurrence_binding({"doc1", 600}).has_value());
  CHECK_FALSE(lex.preferred("мати").has_value());

  Decision missing = d;
  missing.occurrence = Occurrence{"doc1", 9};
  try {
    lex.record_decision(missing, &known);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_found);
  }
  Decision wrong_form = d;
  wrong_form.form_key = "паня";
  CHECK_THROWS_AS(lex.record_decision(wrong_form, &known), Error);

  Decision no_place = d;
  no_place.occurrence.reset();
  CHECK_THROWS_AS(lex.record_decision(no_place), Error);
}

TEST_CASE("lexicon save/load round trip") {
  auto lex = small_lexicon();
  lex.add_default_variant_groups();
  OccurrenceIndex known{{{"doc1", 512}, "мати"}};
  Decision d = global("мати", {"МАТИ", Pos::verb, "дієсл.", {}});
  d.scope = DecisionScope::occurrence;
  d.occurrence = Occurrence{"doc1", 512};
  lex.record_decision(d, &known);

  testing::TempDir tmp("lex");
  save_lexicon(lex, tmp / "l.tsv");
  auto back = load_lexicon(tmp / "l.tsv");
  CHECK(back == lex);
  CHECK(serialize_lexicon(back) == serialize_lexicon(lex));
}

TEST_CASE("lexicon parse errors and empty files") {
  CHECK(parse_lexicon("").size() == 0);
  CHECK(parse_lexicon("# only a comment\n\n").size() == 0);
  try {
    parse_lexicon("адвокат\tАДВОКАТ\tnoun\nмати\tМАТИ\n", "lex.tsv");
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::format);
    CHECK(std::string(e.what()).find("2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_lexicon("а\tА\tnot_a_pos\n"), Error);
  CHECK_THROWS_AS(parse_lexicon("а\tА\tnoun\t\t\tx\n"), Error);

  testing::TempDir tmp("lex");
  testing::write_file(tmp / "empty.tsv", "");
  CHECK(load_lexicon(tmp / "empty.tsv").size() == 0);
}

TEST_CASE("bundled lexicon loads") {
  auto lex = load_lexicon(testing::minicorpus() / "lexicon.tsv");
  CHECK(lex.size() > 800);
  CHECK(lex.occurrence_bindings().size() == 5);
  CHECK(lex.lookup("мати").size() == 2);
}

TEST_CASE("decision log lines round trip") {
  Decision g = global("що", {"ЩО", Pos::conjunction, {}, {}});
  CHECK(parse_decision(format_decision(g)) == g);

  Decision o = global("maxima", {"maximum", Pos::noun, "pl.", "la"});
  o.scope = DecisionScope::occurrence;
  o.occurrence = Occurrence{"doc", 42};
  CHECK(parse_decision(format_decision(o)) == o);

  CHECK_THROWS_AS(parse_decision("2026\tx\tsideways\t\t\tа\tА\tnoun", 3), Error);
  CHECK_THROWS_AS(parse_decision("too\tfew", 3), Error);
}

TEST_CASE("append_decision and load_decision_log") {
  testing::TempDir tmp("log");
  const auto path = tmp / "decisions.tsv";
  Decision a = global("що", {"ЩО", Pos::conjunction, {}, {}});
  Decision b = global("хвалив", {"ХВАЛИТИ", Pos::verb, {}, {}});
  append_decision(path, a);
  append_decision(path, b);
  auto log = load_decision_log(path);
  REQUIRE(log.size() == 2);
  CHECK(log[0] == a);
  CHECK(log[1] == b);

  auto prepared = load_decision_log(testing::minicorpus() / "decisions_prepared.tsv");
  CHECK(prepared.size() == 4);
  CHECK(prepared[3].scope == DecisionScope::occurrence);
}

TEST_CASE("utc_timestamp shape") {
  const auto ts = utc_timestamp();
  CHECK(ts.size() == 20);
  CHECK(ts[10] == 'T');
  CHECK(ts.back() == 'Z');
}
