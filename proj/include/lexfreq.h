#ifndef LEXFREQ_H
#define LEXFREQ_H

#include <stddef.h>

#if defined(_WIN32)
#  define LEXFREQ_API __declspec(dllexport)
#else
#  define LEXFREQ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lexfreq_status {
  LEXFREQ_OK = 0,
  LEXFREQ_E_IO,
  LEXFREQ_E_ENCODING,
  LEXFREQ_E_SYNTAX,
  LEXFREQ_E_FORMAT,
  LEXFREQ_E_INVALID_ARGUMENT,
  LEXFREQ_E_NOT_FOUND,
  LEXFREQ_E_PENDING,
  LEXFREQ_E_EMPTY_CORPUS,
  LEXFREQ_E_NUMERIC,
  LEXFREQ_E_CONVERGENCE,
  LEXFREQ_E_INTERNAL
} lexfreq_status;

/* Opaque. One session owns a corpus, lexicon and decision log. Queries may
   run concurrently with each other; mutating calls are serialized. */
typedef struct lexfreq_session lexfreq_session;

typedef struct lexfreq_options {
  const char* manifest;     /* required */
  const char* lexicon;      /* required */
  const char* decision_log; /* optional, NULL for none */
  const char* paradigms;    /* optional */
  const char* profile;      /* "modern_edition" | "first_edition" | NULL (per manifest) */
  const char* out_dir;      /* default "out" */
  size_t K;                 /* high-frequency threshold, default 10 */
  size_t kwic_width;        /* tokens per side, default 5 */
  int allow_pending;
  int form_based_indices;
  int emit_tokens;
  int default_variants;     /* built-in variant groups, default 1 */
} lexfreq_options;

LEXFREQ_API void lexfreq_options_init(lexfreq_options* options);

/* Message of the last failing call on this thread; never NULL. */
LEXFREQ_API const char* lexfreq_last_error(void);
LEXFREQ_API const char* lexfreq_status_name(lexfreq_status status);
LEXFREQ_API const char* lexfreq_version(void);

/* Strings returned through char** out-parameters are owned by the caller. */
LEXFREQ_API void lexfreq_string_free(char* s);

LEXFREQ_API lexfreq_status lexfreq_session_open(const lexfreq_options* options,
                                                lexfreq_session** out);
LEXFREQ_API void lexfreq_session_close(lexfreq_session* session);

/* Reads inputs, lemmatizes and writes every artifact. The summary is a JSON
   object {N, V_form, V_lemma, pending, lemma_lists_written, warnings}. */
LEXFREQ_API lexfreq_status lexfreq_session_build(lexfreq_session* session, char** summary_json);

/* Reads inputs and lemmatizes without writing anything. */
LEXFREQ_API lexfreq_status lexfreq_session_run(lexfreq_session* session);

LEXFREQ_API lexfreq_status lexfreq_session_export_queue(lexfreq_session* session, const char* path);

/* Validates and merges a decision log into the lexicon file. */
LEXFREQ_API lexfreq_status lexfreq_session_import_decisions(lexfreq_session* session,
                                                            const char* path, size_t* imported);

/* filter_json may be NULL or {"form": "...", "script": "...", "unknown_only": bool}. */
LEXFREQ_API lexfreq_status lexfreq_session_queue_json(lexfreq_session* session, size_t offset,
                                                      size_t limit, const char* filter_json,
                                                      char** out);
LEXFREQ_API lexfreq_status lexfreq_session_kwic_json(lexfreq_session* session, const char* form,
                                                     size_t width, char** out);
LEXFREQ_API lexfreq_status lexfreq_session_progress_json(lexfreq_session* session, char** out);

/* Body: {form_key, scope, occurrence?: {doc_id, offset}, lemma, pos,
   disambiguator?, language?, annotator, client_token?}. A repeated
   client_token returns the first response without recording again. */
LEXFREQ_API lexfreq_status lexfreq_session_post_decision_json(lexfreq_session* session,
                                                              const char* body, char** out);

/* Re-lemmatizes against the in-memory lexicon; returns progress JSON. */
LEXFREQ_API lexfreq_status lexfreq_session_rerun(lexfreq_session* session, char** out);

/* Profile and fits from list directories written by build. With more than
   one directory a comparison table is written as well. */
LEXFREQ_API lexfreq_status lexfreq_stats(const char* const* list_dirs, size_t count,
                                         const char* out_dir, size_t K, int form_based_indices,
                                         char** summary_json);

#ifdef __cplusplus
}
#endif

#endif
