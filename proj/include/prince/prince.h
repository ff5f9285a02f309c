/*
 *   Copyright 2026 The prince authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to libprince. All functions are thread-safe on distinct
 * handles; a graph handle may be shared by readers. On failure a function
 * returns a non-zero prince_status and prince_last_error() describes it
 * (per thread). Node ids are the external ids used in graph files. */
#ifndef PRINCE_PRINCE_H
#define PRINCE_PRINCE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PRINCE_API __declspec(dllexport)
#else
#define PRINCE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum prince_status {
    PRINCE_OK = 0,
    PRINCE_ERR_INVALID_ARGUMENT,
    PRINCE_ERR_IO,
    PRINCE_ERR_PARSE,
    PRINCE_ERR_TYPE_CONFLICT,
    PRINCE_ERR_UNKNOWN_ENDPOINT,
    PRINCE_ERR_NEGATIVE_WEIGHT,
    PRINCE_ERR_DUPLICATE_EDGE,
    PRINCE_ERR_DUPLICATE_NODE,
    PRINCE_ERR_UNKNOWN_NODE,
    PRINCE_ERR_NON_STOCHASTIC_SIMILARITY,
    PRINCE_ERR_NOT_AN_ACTION,
    PRINCE_ERR_NOT_A_USER,
    PRINCE_ERR_NO_CONVERGENCE,
    PRINCE_ERR_CANDIDATE_IS_NEIGHBOR,
    PRINCE_ERR_NO_ACTIONS,
    PRINCE_ERR_NO_ELIGIBLE_ITEMS,
    PRINCE_ERR_TOO_MANY_ACTIONS,
    PRINCE_ERR_INFEASIBLE_PARAMS,
    PRINCE_ERR_INTERNAL
} prince_status;

typedef enum prince_method {
    PRINCE_METHOD_PRINCE = 0,
    PRINCE_METHOD_HC,
    PRINCE_METHOD_SP,
    PRINCE_METHOD_ORACLE
} prince_method;

typedef enum prince_score_mode {
    PRINCE_MODE_PRECOMPUTED = 0,
    PRINCE_MODE_DYNAMIC
} prince_score_mode;

typedef struct prince_graph prince_graph;
typedef struct prince_explanation prince_explanation;

typedef struct prince_config {
    double alpha;
    double beta;
    size_t k;
    double epsilon;
    double tie_tol;
    prince_score_mode score_mode;
    int scan_all_items;
    size_t max_oracle_actions;
} prince_config;

typedef struct prince_synth_params {
    size_t n_users;
    size_t n_items;
    size_t n_categories;
    size_t n_reviews;
    size_t min_actions;
    size_t max_actions;
    int follows_enabled;
    double similarity_edge_rate;
    uint64_t rng_seed;
} prince_synth_params;

typedef struct prince_scored_item {
    uint64_t item;
    double score;
} prince_scored_item;

typedef struct prince_benchmark_spec {
    const size_t* ks;
    size_t n_ks;
    const prince_method* methods;
    size_t n_methods;
    const prince_score_mode* modes;
    size_t n_modes;
    size_t max_users; /* 0: all users with actions */
    size_t jobs;
    prince_config config;
} prince_benchmark_spec;

PRINCE_API const char* prince_last_error(void);
PRINCE_API const char* prince_status_name(prince_status status);

PRINCE_API void prince_config_default(prince_config* cfg);
PRINCE_API void prince_synth_params_default(prince_synth_params* params);

PRINCE_API prince_status prince_graph_load(const char* path, prince_graph** out);
PRINCE_API prince_status prince_graph_parse(const char* text, size_t len, prince_graph** out);
PRINCE_API prince_status prince_graph_generate(const prince_synth_params* params,
                                               prince_graph** out);
PRINCE_API prince_status prince_graph_save(const prince_graph* g, const char* path);
/* Writes "key: value" statistics next to a saved graph. */
PRINCE_API prince_status prince_graph_save_stats(const prince_graph* g, const char* path);
PRINCE_API void prince_graph_free(prince_graph* g);

PRINCE_API size_t prince_graph_node_count(const prince_graph* g);
PRINCE_API size_t prince_graph_edge_count(const prince_graph* g);
/* Copies up to `cap` user ids; *count receives the total. */
PRINCE_API prince_status prince_graph_users(const prince_graph* g, uint64_t* out, size_t cap,
                                            size_t* count);

/* Top-k eligible items by PPR from `user`. Copies up to `cap` entries. */
PRINCE_API prince_status prince_recommend(const prince_graph* g, uint64_t user,
                                          const prince_config* cfg, prince_scored_item* out,
                                          size_t cap, size_t* count);

PRINCE_API prince_status prince_explain(const prince_graph* g, uint64_t user,
                                        prince_method method, const prince_config* cfg,
                                        prince_explanation** out);
PRINCE_API void prince_explanation_free(prince_explanation* e);

PRINCE_API int prince_explanation_found(const prince_explanation* e);
PRINCE_API int prince_explanation_verified(const prince_explanation* e);
PRINCE_API uint64_t prince_explanation_user(const prince_explanation* e);
PRINCE_API uint64_t prince_explanation_original_rec(const prince_explanation* e);
/* Returns 0 when there is no replacement. */
PRINCE_API int prince_explanation_replacement(const prince_explanation* e, uint64_t* item);
PRINCE_API size_t prince_explanation_size(const prince_explanation* e);
PRINCE_API size_t prince_explanation_action_count(const prince_explanation* e);
PRINCE_API uint64_t prince_explanation_action_target(const prince_explanation* e, size_t i);
PRINCE_API size_t prince_explanation_action_type_count(const prince_explanation* e, size_t i);
PRINCE_API const char* prince_explanation_action_type(const prince_explanation* e, size_t i,
                                                      size_t j);
PRINCE_API prince_method prince_explanation_method(const prince_explanation* e);
PRINCE_API prince_score_mode prince_explanation_score_mode(const prince_explanation* e);
PRINCE_API double prince_explanation_wall_time_ms(const prince_explanation* e);
PRINCE_API double prince_explanation_precompute_ms(const prince_explanation* e);

/* Runs the k-sweep and returns the TSV report in *tsv (free with
 * prince_string_free). Timing columns are zero when with_timing is 0. */
PRINCE_API prince_status prince_benchmark(const prince_graph* g, const prince_benchmark_spec* spec,
                                          int with_timing, char** tsv);
PRINCE_API void prince_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* PRINCE_PRINCE_H */
