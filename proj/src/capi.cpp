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

#include "prince/prince.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <sstream>
#include <string>

#include "prince/baselines.hpp"
#include "prince/benchmark.hpp"
#include "prince/corpus.hpp"
#include "prince/error.hpp"
#include "prince/explain.hpp"
#include "prince/oracle.hpp"

struct prince_graph {
    prince::HinGraph g;
};

struct prince_explanation {
    prince::Explanation e;
    const prince::HinGraph* g;
    std::vector<std::vector<std::string>> type_names;
};

namespace {

thread_local std::string last_error;

prince_status from_code(prince::ErrorCode code) {
    // ErrorCode and prince_status list the same errors in the same order.
    return static_cast<prince_status>(static_cast<int>(code) + 1);
}

template <class F>
prince_status guarded(F&& f) {
    try {
        f();
        last_error.clear();
        return PRINCE_OK;
    } catch (const prince::Error& e) {
        last_error = e.what();
        return from_code(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return PRINCE_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return PRINCE_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown error";
        return PRINCE_ERR_INTERNAL;
    }
}

void require(bool ok, const char* what) {
    if (!ok) throw prince::Error(prince::ErrorCode::InvalidArgument, what);
}

prince::ExplainConfig to_config(const prince_config* c) {
    prince::ExplainConfig cfg;
    if (c == nullptr) return cfg;
    cfg.alpha = c->alpha;
    cfg.beta = c->beta;
    cfg.k = c->k;
    cfg.epsilon = c->epsilon;
    cfg.tie_tol = c->tie_tol;
    cfg.score_mode = c->score_mode == PRINCE_MODE_DYNAMIC ? prince::ScoreMode::Dynamic
                                                          : prince::ScoreMode::Precomputed;
    cfg.scan_all_items = c->scan_all_items != 0;
    cfg.max_oracle_actions = c->max_oracle_actions;
    cfg.validate();
    return cfg;
}

prince::Method to_method(prince_method m) {
    switch (m) {
        case PRINCE_METHOD_PRINCE: return prince::Method::Prince;
        case PRINCE_METHOD_HC: return prince::Method::HighestContributions;
        case PRINCE_METHOD_SP: return prince::Method::ShortestPaths;
        case PRINCE_METHOD_ORACLE: return prince::Method::Oracle;
    }
    throw prince::Error(prince::ErrorCode::InvalidArgument, "unknown method");
}

}  // namespace

extern "C" {

const char* prince_last_error(void) { return last_error.c_str(); }

const char* prince_status_name(prince_status status) {
    if (status == PRINCE_OK) return "Ok";
    if (status == PRINCE_ERR_INTERNAL) return "Internal";
    if (status > PRINCE_OK && status < PRINCE_ERR_INTERNAL) {
        return prince::to_string(static_cast<prince::ErrorCode>(status - 1)).data();
    }
    return "Unknown";
}

void prince_config_default(prince_config* cfg) {
    if (cfg == nullptr) return;
    const prince::ExplainConfig d;
    cfg->alpha = d.alpha;
    cfg->beta = d.beta;
    cfg->k = d.k;
    cfg->epsilon = d.epsilon;
    cfg->tie_tol = d.tie_tol;
    cfg->score_mode = PRINCE_MODE_PRECOMPUTED;
    cfg->scan_all_items = 0;
    cfg->max_oracle_actions = d.max_oracle_actions;
}

void prince_synth_params_default(prince_synth_params* params) {
    if (params == nullptr) return;
    const prince::SynthParams d;
    params->n_users = d.n_users;
    params->n_items = d.n_items;
    params->n_categories = d.n_categories;
    params->n_reviews = d.n_reviews;
    params->min_actions = d.min_actions;
    params->max_actions = d.max_actions;
    params->follows_enabled = d.follows_enabled ? 1 : 0;
    params->similarity_edge_rate = d.similarity_edge_rate;
    params->rng_seed = d.rng_seed;
}

prince_status prince_graph_load(const char* path, prince_graph** out) {
    return guarded([&] {
        require(path != nullptr && out != nullptr, "null argument");
        *out = new prince_graph{prince::load_graph(path)};
    });
}

prince_status prince_graph_parse(const char* text, size_t len, prince_graph** out) {
    return guarded([&] {
        require((text != nullptr || len == 0) && out != nullptr, "null argument");
        std::istringstream in(std::string(text == nullptr ? "" : text, len));
        *out = new prince_graph{prince::parse_graph(in)};
    });
}

prince_status prince_graph_generate(const prince_synth_params* params, prince_graph** out) {
    return guarded([&] {
        require(params != nullptr && out != nullptr, "null argument");
        prince::SynthParams p;
        p.n_users = params->n_users;
        p.n_items = params->n_items;
        p.n_categories = params->n_categories;
        p.n_reviews = params->n_reviews;
        p.min_actions = params->min_actions;
        p.max_actions = params->max_actions;
        p.follows_enabled = params->follows_enabled != 0;
        p.similarity_edge_rate = params->similarity_edge_rate;
        p.rng_seed = params->rng_seed;
        *out = new prince_graph{prince::generate_synth(p)};
    });
}

prince_status prince_graph_save(const prince_graph* g, const char* path) {
    return guarded([&] {
        require(g != nullptr && path != nullptr, "null argument");
        prince::save_graph(g->g, path);
    });
}

prince_status prince_graph_save_stats(const prince_graph* g, const char* path) {
    return guarded([&] {
        require(g != nullptr && path != nullptr, "null argument");
        prince::write_stats(g->g, path);
    });
}

void prince_graph_free(prince_graph* g) { delete g; }

size_t prince_graph_node_count(const prince_graph* g) { return g ? g->g.node_count() : 0; }
size_t prince_graph_edge_count(const prince_graph* g) { return g ? g->g.edge_count() : 0; }

prince_status prince_graph_users(const prince_graph* g, uint64_t* out, size_t cap,
                                 size_t* count) {
    return guarded([&] {
        require(g != nullptr && count != nullptr && (out != nullptr || cap == 0),
                "null argument");
        const auto users = g->g.users();
        *count = users.size();
        for (size_t i = 0; i < users.size() && i < cap; ++i) out[i] = g->g.external_id(users[i]);
    });
}

prince_status prince_recommend(const prince_graph* g, uint64_t user, const prince_config* cfg,
                               prince_scored_item* out, size_t cap, size_t* count) {
    return guarded([&] {
        require(g != nullptr && count != nullptr && (out != nullptr || cap == 0),
                "null argument");
        const prince::ExplainConfig c = to_config(cfg);
        const prince::NodeId u = g->g.node(user);
        const prince::UserContext ctx = prince::make_user_context(g->g, u, c);
        const auto top = prince::top_k_items(ctx.view, u, c.k, c.alpha, c.tie_tol, c.power_tol);
        *count = top.size();
        for (size_t i = 0; i < top.size() && i < cap; ++i) {
            out[i] = {g->g.external_id(top[i].item), top[i].score};
        }
    });
}

prince_status prince_explain(const prince_graph* g, uint64_t user, prince_method method,
                             const prince_config* cfg, prince_explanation** out) {
    return guarded([&] {
        require(g != nullptr && out != nullptr, "null argument");
        const prince::ExplainConfig c = to_config(cfg);
        const prince::NodeId u = g->g.node(user);
        prince::Explanation e;
        switch (to_method(method)) {
            case prince::Method::Prince: e = prince::explain(g->g, u, c); break;
            case prince::Method::HighestContributions: e = prince::explain_hc(g->g, u, c); break;
            case prince::Method::ShortestPaths: e = prince::explain_sp(g->g, u, c); break;
            case prince::Method::Oracle: e = prince::brute_force_explain(g->g, u, c); break;
        }
        auto* h = new prince_explanation{std::move(e), &g->g, {}};
        for (const auto& a : h->e.actions) {
            auto& names = h->type_names.emplace_back();
            for (const auto& t : a.types) names.emplace_back(t.name());
        }
        *out = h;
    });
}

void prince_explanation_free(prince_explanation* e) { delete e; }

int prince_explanation_found(const prince_explanation* e) {
    return e && e->e.status == prince::ExplanationStatus::Found ? 1 : 0;
}
int prince_explanation_verified(const prince_explanation* e) {
    return e && e->e.verified ? 1 : 0;
}
uint64_t prince_explanation_user(const prince_explanation* e) {
    return e ? e->g->external_id(e->e.user) : 0;
}
uint64_t prince_explanation_original_rec(const prince_explanation* e) {
    return e ? e->g->external_id(e->e.original_rec) : 0;
}
int prince_explanation_replacement(const prince_explanation* e, uint64_t* item) {
    if (!e || !e->e.replacement) return 0;
    if (item) *item = e->g->external_id(*e->e.replacement);
    return 1;
}
size_t prince_explanation_size(const prince_explanation* e) { return e ? e->e.size() : 0; }
size_t prince_explanation_action_count(const prince_explanation* e) {
    return e ? e->e.action_count : 0;
}
uint64_t prince_explanation_action_target(const prince_explanation* e, size_t i) {
    if (!e || i >= e->e.actions.size()) return 0;
    return e->g->external_id(e->e.actions[i].target);
}
size_t prince_explanation_action_type_count(const prince_explanation* e, size_t i) {
    if (!e || i >= e->type_names.size()) return 0;
    return e->type_names[i].size();
}
const char* prince_explanation_action_type(const prince_explanation* e, size_t i, size_t j) {
    if (!e || i >= e->type_names.size() || j >= e->type_names[i].size()) return nullptr;
    return e->type_names[i][j].c_str();
}
prince_method prince_explanation_method(const prince_explanation* e) {
    if (!e) return PRINCE_METHOD_PRINCE;
    return static_cast<prince_method>(static_cast<int>(e->e.method));
}
prince_score_mode prince_explanation_score_mode(const prince_explanation* e) {
    return e && e->e.score_mode == prince::ScoreMode::Dynamic ? PRINCE_MODE_DYNAMIC
                                                               : PRINCE_MODE_PRECOMPUTED;
}
double prince_explanation_wall_time_ms(const prince_explanation* e) {
    return e ? e->e.wall_time_ms : 0.0;
}
double prince_explanation_precompute_ms(const prince_explanation* e) {
    return e ? e->e.precompute_ms : 0.0;
}

prince_status prince_benchmark(const prince_graph* g, const prince_benchmark_spec* spec,
                               int with_timing, char** tsv) {
    return guarded([&] {
        require(g != nullptr && spec != nullptr && tsv != nullptr, "null argument");
        prince::BenchmarkSpec s;
        s.base = to_config(&spec->config);
        if (spec->n_ks > 0) {
            require(spec->ks != nullptr, "null k list");
            s.ks.assign(spec->ks, spec->ks + spec->n_ks);
        }
        if (spec->n_methods > 0) {
            require(spec->methods != nullptr, "null method list");
            s.methods.clear();
            for (size_t i = 0; i < spec->n_methods; ++i) s.methods.push_back(to_method(spec->methods[i]));
        }
        if (spec->n_modes > 0) {
            require(spec->modes != nullptr, "null mode list");
            s.modes.clear();
            for (size_t i = 0; i < spec->n_modes; ++i) {
                s.modes.push_back(spec->modes[i] == PRINCE_MODE_DYNAMIC
                                      ? prince::ScoreMode::Dynamic
                                      : prince::ScoreMode::Precomputed);
            }
        }
        for (size_t k : s.ks) require(k >= 1, "k must be at least 1");
        s.max_users = spec->max_users;
        s.jobs = spec->jobs == 0 ? 1 : spec->jobs;
        const std::string text = prince::format_tsv(prince::run_benchmark(g->g, s), with_timing != 0);
        char* buf = static_cast<char*>(std::malloc(text.size() + 1));
        if (buf == nullptr) throw std::bad_alloc();
        std::memcpy(buf, text.c_str(), text.size() + 1);
        *tsv = buf;
    });
}

void prince_string_free(char* s) { std::free(s); }

}  // extern "C"
