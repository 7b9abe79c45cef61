#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include "lexfreq.h"
#include "service/review_service.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitPending = 2;

struct ConfigFlags {
  std::string manifest, lexicon, decisions, paradigms, profile, out = "out";
  std::size_t K = 10;
  std::size_t kwic_width = 5;
  bool allow_pending = false;
  bool form_based = false;
  bool emit_tokens = false;
  bool no_default_variants = false;

  void attach(CLI::App* app) {
    app->add_option("-m,--manifest", manifest, "Corpus manifest (TSV)")->required();
    app->add_option("-l,--lexicon", lexicon, "Lexicon (TSV)")->required();
    app->add_option("-d,--decisions", decisions, "Decision log (TSV, appended to)");
    app->add_option("--paradigms", paradigms, "Paradigm table (TSV)");
    app->add_option("--profile", profile, "Orthography profile for every document")
        ->check(CLI::IsMember({"modern_edition", "first_edition", "modern", "first"}));
    app->add_option("-o,--out", out, "Output directory");
    app->add_option("-K,--threshold", K, "High-frequency threshold")->check(CLI::PositiveNumber);
    app->add_option("--kwic-width", kwic_width, "Context tokens per side");
    app->add_flag("--allow-pending", allow_pending, "Write lemma lists despite pending tokens");
    app->add_flag("--form-based", form_based, "Compute indices over wordforms");
    app->add_flag("--emit-tokens", emit_tokens, "Write the token stream");
    app->add_flag("--no-default-variants", no_default_variants, "Disable built-in variant groups");
  }

  lexfreq_options options() const {
    lexfreq_options o;
    lexfreq_options_init(&o);
    o.manifest = manifest.c_str();
    o.lexicon = lexicon.c_str();
    o.decision_log = decisions.empty() ? nullptr : decisions.c_str();
    o.paradigms = paradigms.empty() ? nullptr : paradigms.c_str();
    o.profile = profile.empty() ? nullptr : profile.c_str();
    o.out_dir = out.c_str();
    o.K = K;
    o.kwic_width = kwic_width;
    o.allow_pending = allow_pending;
    o.form_based_indices = form_based;
    o.emit_tokens = emit_tokens;
    o.default_variants = !no_default_variants;
    return o;
  }
};

int fail(const char* what) {
  std::fprintf(stderr, "lexfreq: %s: %s\n", what, lexfreq_last_error());
  return kExitError;
}

struct SessionHandle {
  lexfreq_session* s = nullptr;
  ~SessionHandle() { lexfreq_session_close(s); }
};

void print_warnings(const nlohmann::json& j) {
  if (j.contains("warnings"))
    for (const auto& w : j["warnings"]) std::fprintf(stderr, "warning: %s\n", w.get<std::string>().c_str());
}

int cmd_build(const ConfigFlags& f) {
  const auto o = f.options();
  SessionHandle h;
  if (lexfreq_session_open(&o, &h.s) != LEXFREQ_OK) return fail("build");
  char* out = nullptr;
  if (lexfreq_session_build(h.s, &out) != LEXFREQ_OK) return fail("build");
  const auto summary = nlohmann::json::parse(out);
  lexfreq_string_free(out);
  print_warnings(summary);
  std::printf("N=%llu V_form=%llu V_lemma=%llu pending=%llu\n",
              summary["N"].get<unsigned long long>(), summary["V_form"].get<unsigned long long>(),
              summary["V_lemma"].get<unsigned long long>(), summary["pending"].get<unsigned long long>());
  if (summary["pending"].get<std::size_t>() > 0) {
    std::printf("pending work: see %s\n", (std::filesystem::path(f.out) / "queue.tsv").string().c_str());
    return kExitPending;
  }
  return kExitOk;
}

int cmd_stats(const std::vector<std::string>& dirs, const std::string& out, std::size_t K,
              bool form_based) {
  std::vector<const char*> argv;
  for (const auto& d : dirs) argv.push_back(d.c_str());
  char* summary = nullptr;
  if (lexfreq_stats(argv.data(), argv.size(), out.c_str(), K, form_based, &summary) != LEXFREQ_OK)
    return fail("stats");
  const auto j = nlohmann::json::parse(summary);
  lexfreq_string_free(summary);
  print_warnings(j);
  for (const auto& c : j["corpora"])
    std::printf("%s: N=%llu V_lemma=%llu V_form=%llu\n", c["name"].get<std::string>().c_str(),
                c["N"].get<unsigned long long>(), c["V_lemma"].get<unsigned long long>(),
                c["V_form"].get<unsigned long long>());
  return kExitOk;
}

int cmd_export_queue(const ConfigFlags& f, const std::string& path) {
  const auto o = f.options();
  SessionHandle h;
  if (lexfreq_session_open(&o, &h.s) != LEXFREQ_OK) return fail("export-queue");
  if (lexfreq_session_export_queue(h.s, path.c_str()) != LEXFREQ_OK) return fail("export-queue");
  char* progress = nullptr;
  if (lexfreq_session_progress_json(h.s, &progress) != LEXFREQ_OK) return fail("export-queue");
  const auto j = nlohmann::json::parse(progress);
  lexfreq_string_free(progress);
  std::printf("queue items=%llu\n", j["queue_items"].get<unsigned long long>());
  return kExitOk;
}

int cmd_import(const ConfigFlags& f, const std::string& path) {
  const auto o = f.options();
  SessionHandle h;
  if (lexfreq_session_open(&o, &h.s) != LEXFREQ_OK) return fail("import-decisions");
  std::size_t n = 0;
  if (lexfreq_session_import_decisions(h.s, path.c_str(), &n) != LEXFREQ_OK)
    return fail("import-decisions");
  std::printf("imported %zu decision(s) into %s\n", n, f.lexicon.c_str());
  return kExitOk;
}

std::atomic<bool> stop_requested{false};

extern "C" void on_signal(int) { stop_requested = true; }

int cmd_serve(const ConfigFlags& f, const std::string& host, int port) {
  if (f.decisions.empty()) {
    std::fprintf(stderr, "lexfreq: serve: --decisions is required\n");
    return kExitError;
  }
  const auto queue = std::filesystem::path(f.out) / "queue.tsv";
  if (!std::filesystem::exists(queue)) {
    std::fprintf(stderr, "lexfreq: serve: %s not found; run build first\n", queue.string().c_str());
    return kExitError;
  }
  const auto o = f.options();
  SessionHandle h;
  if (lexfreq_session_open(&o, &h.s) != LEXFREQ_OK || lexfreq_session_run(h.s) != LEXFREQ_OK)
    return fail("serve");

  httplib::Server server;
  lexfreq::service::ReviewService(h.s, f.kwic_width).mount(server);
  int bound = port;
  if (port == 0) {
    bound = server.bind_to_any_port(host);
    if (bound < 0) bound = 0;
  } else if (!server.bind_to_port(host, port)) {
    bound = 0;
  }
  if (bound <= 0) {
    std::fprintf(stderr, "lexfreq: serve: cannot bind %s:%d (port busy?)\n", host.c_str(), port);
    return kExitError;
  }
  std::printf("listening on http://%s:%d\n", host.c_str(), bound);
  std::fflush(stdout);

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::thread watcher([&] {
    while (!stop_requested) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    server.stop();
  });
  const bool ok = server.listen_after_bind();
  stop_requested = true;
  watcher.join();
  return ok ? kExitOk : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frequency dictionary builder"};
  app.require_subcommand(1);
  app.set_version_flag("--version", lexfreq_version());

  ConfigFlags build_flags, serve_flags, export_flags, import_flags;

  auto* build = app.add_subcommand("build", "Lemmatize the corpus and write lists, profile and fits");
  build_flags.attach(build);

  std::vector<std::string> stats_dirs;
  std::string stats_out;
  std::size_t stats_K = 10;
  bool stats_form_based = false;
  auto* stats = app.add_subcommand("stats", "Profile and fits from existing list directories");
  stats->add_option("lists", stats_dirs, "Directories written by build")->required();
  stats->add_option("-o,--out", stats_out, "Output directory")->required();
  stats->add_option("-K,--threshold", stats_K, "High-frequency threshold")->check(CLI::PositiveNumber);
  stats->add_flag("--form-based", stats_form_based, "Compute indices over wordforms");

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Run the review service");
  serve_flags.attach(serve);
  serve->add_option("--host", host, "Bind address");
  serve->add_option("-p,--port", port, "Port (0 picks a free one)")->check(CLI::Range(0, 65535));

  std::string export_path;
  auto* exporter = app.add_subcommand("export-queue", "Write the ambiguity queue");
  export_flags.attach(exporter);
  exporter->add_option("--output", export_path, "Queue file")->required();

  std::string import_path;
  auto* importer = app.add_subcommand("import-decisions", "Merge a decision log into the lexicon");
  import_flags.attach(importer);
  importer->add_option("--from", import_path, "Decision log to import")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitError;
  }

  if (*build) return cmd_build(build_flags);
  if (*stats) return cmd_stats(stats_dirs, stats_out, stats_K, stats_form_based);
  if (*serve) return cmd_serve(serve_flags, host, port);
  if (*exporter) return cmd_export_queue(export_flags, export_path);
  if (*importer) return cmd_import(import_flags, import_path);
  return kExitError;
}
