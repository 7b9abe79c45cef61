#include <doctest.h>

#include <httplib.h>
#include <json.hpp>
#include <sstream>
#include <thread>

#include "lexfreq.h"
#include "service/review_service.hpp"
#include "support.hpp"

using nlohmann::json;

namespace {

std::size_t log_lines(const std::filesystem::path& path) {
  std::size_t n = 0;
  std::istringstream in(testing::slurp(path));
  for (std::string line; std::getline(in, line);) n += !line.empty() && line[0] != '#';
  return n;
}

struct Running {
  testing::TempDir tmp{"service"};
  std::string manifest = (testing::minicorpus() / "manifest.tsv").string();
  std::string lexicon = (testing::minicorpus() / "lexicon_draft.tsv").string();
  std::string log = (tmp / "log.tsv").string();
  std::string out = (tmp / "out").string();
  lexfreq_session* session = nullptr;
  httplib::Server server;
  std::thread thread;
  int port = 0;

  Running() {
    lexfreq_options o;
    lexfreq_options_init(&o);
    o.manifest = manifest.c_str();
    o.lexicon = lexicon.c_str();
    o.decision_log = log.c_str();
    o.out_dir = out.c_str();
    REQUIRE(lexfreq_session_open(&o, &session) == LEXFREQ_OK);
    REQUIRE(lexfreq_session_run(session) == LEXFREQ_OK);
    lexfreq::service::ReviewService(session, 5).mount(server);
    port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~Running() {
    server.stop();
    thread.join();
    lexfreq_session_close(session);
  }
  httplib::Client client() const { return httplib::Client("127.0.0.1", port); }
};

json body_of(const httplib::Result& r) {
  REQUIRE(r);
  return json::parse(r->body);
}

}  // namespace

TEST_CASE("status mapping") {
  using lexfreq::service::http_status;
  CHECK(http_status(LEXFREQ_E_INVALID_ARGUMENT) == 400);
  CHECK(http_status(LEXFREQ_E_SYNTAX) == 400);
  CHECK(http_status(LEXFREQ_E_NOT_FOUND) == 404);
  CHECK(http_status(LEXFREQ_E_PENDING) == 409);
  CHECK(http_status(LEXFREQ_E_IO) == 500);
}

TEST_CASE("review service endpoints") {
  Running svc;
  auto cli = svc.client();

  auto progress = body_of(cli.Get("/api/progress"));
  const int pending = progress["pending"].get<int>();
  CHECK(pending > 20);
  CHECK(progress["total"] == 2031);

  auto page = cli.Get("/api/queue?limit=20");
  REQUIRE(page);
  CHECK(page->status == 200);
  CHECK(page->get_header_value("Content-Type").find("application/json") == 0);
  auto q = json::parse(page->body);
  REQUIRE(q["items"].size() == 20);
  CHECK(q["total"] == pending);
  CHECK(q["offset"] == 0);
  auto second = body_of(cli.Get("/api/queue?offset=20&limit=20"));
  CHECK(second["items"][0] != q["items"][0]);
  CHECK(body_of(cli.Get("/api/queue"))["items"].size() == 20);

  auto filtered = body_of(cli.Get("/api/queue?form=%D1%85%D0%B2%D0%B0%D0%BB%D0%B8%D0%B2&limit=1000"));
  CHECK(filtered["items"].size() > 0);
  for (const auto& it : filtered["items"]) CHECK(it["form_key"] == "хвалив");

  CHECK(cli.Get("/api/queue?limit=abc")->status == 400);

  auto kwic = cli.Get("/api/kwic?form=%D0%BC%D0%B0%D1%82%D0%B8&width=5");
  REQUIRE(kwic);
  CHECK(kwic->status == 200);
  std::string got = "# doc_id\toffset\tleft\tkeyword\tright\n";
  const auto lines = json::parse(kwic->body)["lines"];
  for (const auto& l : lines)
    got += l["doc_id"].get<std::string>() + "\t" + std::to_string(l["offset"].get<int>()) + "\t" +
           l["left"].get<std::string>() + "\t" + l["keyword"].get<std::string>() + "\t" +
           l["right"].get<std::string>() + "\n";
  CHECK(got == testing::slurp(testing::golden("minicorpus") / "kwic.tsv"));
  CHECK(cli.Get("/api/kwic")->status == 400);

  const auto item = filtered["items"][0];
  json decision = {{"form_key", item["form_key"]},
                   {"scope", "occurrence"},
                   {"occurrence", {{"doc_id", item["doc_id"]}, {"offset", item["offset"]}}},
                   {"lemma", "ХВАЛИТИ"},
                   {"pos", "verb"},
                   {"annotator", "tester"},
                   {"client_token", "abc"}};
  auto posted = cli.Post("/api/decision", decision.dump(), "application/json");
  REQUIRE(posted);
  CHECK(posted->status == 200);
  CHECK(log_lines(svc.log) == 1);
  CHECK(json::parse(posted->body)["progress"]["pending"] == pending - 1);

  auto replay = cli.Post("/api/decision", decision.dump(), "application/json");
  CHECK(replay->status == 200);
  CHECK(replay->body == posted->body);
  CHECK(log_lines(svc.log) == 1);

  auto bad_json = cli.Post("/api/decision", "{oops", "application/json");
  CHECK(bad_json->status == 400);
  CHECK(json::parse(bad_json->body).contains("error"));

  json bad_pos = decision;
  bad_pos.erase("client_token");
  bad_pos["pos"] = "sideways";
  CHECK(cli.Post("/api/decision", bad_pos.dump(), "application/json")->status == 400);

  json nowhere = decision;
  nowhere.erase("client_token");
  nowhere["occurrence"]["offset"] = 999999;
  CHECK(cli.Post("/api/decision", nowhere.dump(), "application/json")->status == 404);
  CHECK(log_lines(svc.log) == 1);

  json global = {{"form_key", "хвалив"}, {"scope", "global"}, {"lemma", "ХВАЛИТИ"}, {"pos", "verb"},
                 {"annotator", "tester"}};
  CHECK(cli.Post("/api/decision", global.dump(), "application/json")->status == 200);
  auto after = body_of(cli.Get("/api/queue?form=%D1%85%D0%B2%D0%B0%D0%BB%D0%B8%D0%B2"));
  CHECK(after["total"] == 0);
  CHECK(log_lines(svc.log) == 2);

  auto rerun = cli.Post("/api/rerun", "", "application/json");
  REQUIRE(rerun);
  CHECK(rerun->status == 200);
  CHECK(json::parse(rerun->body)["pending"] == body_of(cli.Get("/api/progress"))["pending"]);

  CHECK(cli.Get("/api/nothing")->status == 404);
}
