/*
 * Licensed under the Apache License, Version 2.0 (the "License"); you may
 * not use this file except in compliance with the License. You may obtain
 * a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
 * WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
 * License for the specific language governing permissions and limitations
 * under the License.
 */

#ifndef ALTRANK_H
#define ALTRANK_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AltrankVoting {
  ALTRANK_VOTING_WINNERS_AND_LOSERS = 0,
  ALTRANK_VOTING_LOSERS = 1,
} AltrankVoting;

// Result of every fallible call.
typedef enum AltrankStatus {
  ALTRANK_STATUS_OK = 0,
  ALTRANK_STATUS_NULL_POINTER = 1,
  ALTRANK_STATUS_INVALID_UTF8 = 2,
  ALTRANK_STATUS_PARSE = 3,
  ALTRANK_STATUS_UNKNOWN_SCHEME = 4,
  ALTRANK_STATUS_EMPTY_CORPUS = 5,
  ALTRANK_STATUS_NOT_CONVERGED = 6,
  ALTRANK_STATUS_DEGENERATE_NETWORK = 7,
  ALTRANK_STATUS_INVALID_INPUT = 8,
  ALTRANK_STATUS_BUFFER_TOO_SMALL = 10,
  ALTRANK_STATUS_INSUFFICIENT_OVERLAP = 11,
  ALTRANK_STATUS_PANIC = 99,
} AltrankStatus;

typedef enum AltrankFormat {
  ALTRANK_FORMAT_CSV = 0,
  ALTRANK_FORMAT_JSONL = 1,
} AltrankFormat;

typedef enum AltrankCorrelation {
  ALTRANK_CORRELATION_PEARSON = 0,
  ALTRANK_CORRELATION_SPEARMAN = 1,
  ALTRANK_CORRELATION_KENDALL = 2,
} AltrankCorrelation;

// Parsed mention records.
typedef struct AltrankCorpus AltrankCorpus;

// One scheme's rating, aligned with its journal list.
typedef struct AltrankRating AltrankRating;

// Scheme evaluation settings. Start from [`altrank_options_default`].
typedef struct AltrankOptions {
  double damping;
  double tol;
  size_t max_iter;
  // Minimum shared authors for two journals to be compared; 0 and 1 both
  // mean any shared author.
  size_t min_authors;
  enum AltrankVoting voting;
} AltrankOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. Valid until the
// next failing call on the same thread.
const char *altrank_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *altrank_version(void);

struct AltrankOptions altrank_options_default(void);

// Parse `len` bytes of CSV or JSONL mention records into a corpus. Any
// malformed line fails the call.
//
// # Safety
// `data` must point to `len` readable bytes; `out` must be writable.
enum AltrankStatus altrank_corpus_from_text(const uint8_t *data,
                                            size_t len,
                                            enum AltrankFormat format,
                                            struct AltrankCorpus **out);

// # Safety
// `corpus` must be NULL or a handle from [`altrank_corpus_from_text`] not
// yet freed.
void altrank_corpus_free(struct AltrankCorpus *corpus);

// Number of records; 0 for NULL.
//
// # Safety
// `corpus` must be NULL or a live handle.
size_t altrank_corpus_record_count(const struct AltrankCorpus *corpus);

// Number of distinct journals; 0 for NULL.
//
// # Safety
// `corpus` must be NULL or a live handle.
size_t altrank_corpus_journal_count(const struct AltrankCorpus *corpus);

// Journal id at `index` in sorted order, or NULL when out of range. Owned
// by the corpus.
//
// # Safety
// `corpus` must be NULL or a live handle.
const char *altrank_corpus_journal_id(const struct AltrankCorpus *corpus, size_t index);

// Rate the corpus with one scheme label such as `bc`, `qpr`, `sh`,
// `s-psr` or `qh@blogs`. `options` may be NULL for defaults.
//
// # Safety
// `corpus` must be a live handle, `scheme` a NUL-terminated string,
// `options` NULL or readable, and `out` writable.
enum AltrankStatus altrank_rate(const struct AltrankCorpus *corpus,
                                const char *scheme,
                                const struct AltrankOptions *options,
                                struct AltrankRating **out);

// # Safety
// `rating` must be NULL or a handle from [`altrank_rate`] not yet freed.
void altrank_rating_free(struct AltrankRating *rating);

// Number of rated journals; 0 for NULL.
//
// # Safety
// `rating` must be NULL or a live handle.
size_t altrank_rating_len(const struct AltrankRating *rating);

// Scheme label, owned by the rating; NULL for NULL.
//
// # Safety
// `rating` must be NULL or a live handle.
const char *altrank_rating_scheme(const struct AltrankRating *rating);

// Journal id at `index`, owned by the rating; NULL when out of range.
//
// # Safety
// `rating` must be NULL or a live handle.
const char *altrank_rating_journal_id(const struct AltrankRating *rating, size_t index);

// Copy the scores, in journal-id order, into `buf` of capacity `cap`.
//
// # Safety
// `rating` must be a live handle and `buf` writable for `cap` doubles.
enum AltrankStatus altrank_rating_scores(const struct AltrankRating *rating,
                                         double *buf,
                                         size_t cap);

// Copy the ranks (1 = best, ties share the mean position) into `buf`.
//
// # Safety
// `rating` must be a live handle and `buf` writable for `cap` doubles.
enum AltrankStatus altrank_rating_ranks(const struct AltrankRating *rating,
                                        double *buf,
                                        size_t cap);

// Correlate two ratings over the journals both contain. A constant side
// yields 0, as in correlation matrices.
//
// # Safety
// `a` and `b` must be live handles and `out` writable.
enum AltrankStatus altrank_correlate(const struct AltrankRating *a,
                                     const struct AltrankRating *b,
                                     enum AltrankCorrelation method,
                                     double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ALTRANK_H */
