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

// prince: command-line front end over the C API.
//
//   prince recommend --graph g.tsv --seed-user 3 --k 5
//   prince explain   --graph g.tsv --seed-user 3 --method prince --mode dynamic
//   prince benchmark --rng-seed 1 --jobs 4 --out report.tsv
//   prince generate  --rng-seed 7 --out corpus.tsv
//
// Exit codes: 0 ok, 1 internal error, 2 bad input.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "prince/prince.h"

namespace {

struct Failure {
    int exit_code;
    std::string message;
};

void check(prince_status s) {
    if (s == PRINCE_OK) return;
    const bool internal = s == PRINCE_ERR_INTERNAL || s == PRINCE_ERR_NO_CONVERGENCE;
    throw Failure{internal ? 1 : 2,
                  std::string(prince_status_name(s)) + ": " + prince_last_error()};
}

using GraphPtr = std::unique_ptr<prince_graph, decltype(&prince_graph_free)>;
using ExplanationPtr = std::unique_ptr<prince_explanation, decltype(&prince_explanation_free)>;

struct Options {
    std::string graph;
    uint64_t user = 0;
    double alpha = 0.0;
    double beta = 0.0;
    size_t k = 0;
    double epsilon = 0.0;
    double tie_tol = 0.0;
    std::string mode = "precomputed";
    std::string method = "prince";
    bool scan_all = false;
    bool no_timing = false;
    std::string out;
    size_t jobs = 1;
    size_t max_users = 0;
    std::vector<size_t> ks{3, 5, 10, 15, 20};
    std::vector<std::string> methods{"prince", "hc", "sp"};
    std::vector<std::string> modes{"precomputed", "dynamic"};
    prince_synth_params synth{};
};

prince_score_mode parse_mode(const std::string& m) {
    if (m == "precomputed") return PRINCE_MODE_PRECOMPUTED;
    if (m == "dynamic") return PRINCE_MODE_DYNAMIC;
    throw Failure{2, "unknown mode '" + m + "'"};
}

prince_method parse_method(const std::string& m) {
    if (m == "prince") return PRINCE_METHOD_PRINCE;
    if (m == "hc") return PRINCE_METHOD_HC;
    if (m == "sp") return PRINCE_METHOD_SP;
    if (m == "oracle") return PRINCE_METHOD_ORACLE;
    throw Failure{2, "unknown method '" + m + "'"};
}

const char* method_name(prince_method m) {
    switch (m) {
        case PRINCE_METHOD_PRINCE: return "prince";
        case PRINCE_METHOD_HC: return "hc";
        case PRINCE_METHOD_SP: return "sp";
        case PRINCE_METHOD_ORACLE: return "oracle";
    }
    return "unknown";
}

prince_config make_config(const Options& o) {
    prince_config cfg;
    prince_config_default(&cfg);
    cfg.alpha = o.alpha;
    cfg.beta = o.beta;
    cfg.k = o.k;
    cfg.epsilon = o.epsilon;
    cfg.tie_tol = o.tie_tol;
    cfg.score_mode = parse_mode(o.mode);
    cfg.scan_all_items = o.scan_all ? 1 : 0;
    return cfg;
}

GraphPtr load(const Options& o) {
    prince_graph* g = nullptr;
    check(prince_graph_load(o.graph.c_str(), &g));
    return {g, prince_graph_free};
}

GraphPtr generate(const Options& o) {
    prince_graph* g = nullptr;
    check(prince_graph_generate(&o.synth, &g));
    return {g, prince_graph_free};
}

// Writes to --out when given, otherwise to stdout.
void emit(const Options& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out);
    f << text;
    if (!f) throw Failure{1, "cannot write " + o.out};
}

std::string format_score(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void run_recommend(const Options& o) {
    const GraphPtr g = load(o);
    const prince_config cfg = make_config(o);
    std::vector<prince_scored_item> top(o.k);
    size_t n = 0;
    check(prince_recommend(g.get(), o.user, &cfg, top.data(), top.size(), &n));
    std::string text;
    for (size_t i = 0; i < n && i < top.size(); ++i) {
        text += std::to_string(i + 1) + '\t' + std::to_string(top[i].item) + '\t' +
                format_score(top[i].score) + '\n';
    }
    emit(o, text);
}

void run_explain(const Options& o) {
    const GraphPtr g = load(o);
    const prince_config cfg = make_config(o);
    const prince_method method = parse_method(o.method);
    prince_explanation* raw = nullptr;
    check(prince_explain(g.get(), o.user, method, &cfg, &raw));
    const ExplanationPtr e(raw, prince_explanation_free);

    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["user"] = prince_explanation_user(e.get());
    j["method"] = method_name(method);
    j["status"] = prince_explanation_found(e.get()) ? "found" : "no_counterfactual";
    j["original_rec"] = prince_explanation_original_rec(e.get());
    uint64_t rep = 0;
    if (prince_explanation_replacement(e.get(), &rep)) {
        j["replacement"] = rep;
    } else {
        j["replacement"] = nullptr;
    }
    auto actions = nlohmann::ordered_json::array();
    for (size_t i = 0; i < prince_explanation_size(e.get()); ++i) {
        nlohmann::ordered_json a;
        a["target"] = prince_explanation_action_target(e.get(), i);
        auto types = nlohmann::ordered_json::array();
        for (size_t t = 0; t < prince_explanation_action_type_count(e.get(), i); ++t) {
            types.push_back(prince_explanation_action_type(e.get(), i, t));
        }
        a["edge_types"] = std::move(types);
        actions.push_back(std::move(a));
    }
    j["actions"] = std::move(actions);
    j["size"] = prince_explanation_size(e.get());
    j["wall_time_ms"] = o.no_timing ? 0.0 : prince_explanation_wall_time_ms(e.get());
    j["score_mode"] = prince_explanation_score_mode(e.get()) == PRINCE_MODE_DYNAMIC
                          ? "dynamic"
                          : "precomputed";
    emit(o, j.dump() + '\n');
}

void run_benchmark(const Options& o) {
    const GraphPtr g = o.graph.empty() ? generate(o) : load(o);
    std::vector<prince_method> methods;
    for (const auto& m : o.methods) methods.push_back(parse_method(m));
    std::vector<prince_score_mode> modes;
    for (const auto& m : o.modes) modes.push_back(parse_mode(m));
    prince_benchmark_spec spec{};
    spec.ks = o.ks.data();
    spec.n_ks = o.ks.size();
    spec.methods = methods.data();
    spec.n_methods = methods.size();
    spec.modes = modes.data();
    spec.n_modes = modes.size();
    spec.max_users = o.max_users;
    spec.jobs = o.jobs;
    spec.config = make_config(o);
    char* tsv = nullptr;
    check(prince_benchmark(g.get(), &spec, o.no_timing ? 0 : 1, &tsv));
    const std::string text(tsv);
    prince_string_free(tsv);
    emit(o, text);
}

void run_generate(const Options& o) {
    const GraphPtr g = generate(o);
    if (o.out.empty()) throw Failure{2, "generate needs --out"};
    check(prince_graph_save(g.get(), o.out.c_str()));
    check(prince_graph_save_stats(g.get(), (o.out + ".stats").c_str()));
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    prince_config defaults;
    prince_config_default(&defaults);
    o.alpha = defaults.alpha;
    o.beta = defaults.beta;
    o.k = defaults.k;
    o.epsilon = defaults.epsilon;
    o.tie_tol = defaults.tie_tol;
    prince_synth_params_default(&o.synth);

    CLI::App app{"Counterfactual explanations for PageRank recommendations"};
    app.require_subcommand(1);

    auto add_model = [&](CLI::App* cmd) {
        cmd->add_option("--alpha", o.alpha, "teleport probability")->capture_default_str();
        cmd->add_option("--beta", o.beta, "weight of graph edges vs. similarity")
            ->capture_default_str();
        cmd->add_option("--k", o.k, "top-k size")->capture_default_str();
        cmd->add_option("--epsilon", o.epsilon, "reverse push residual threshold")
            ->capture_default_str();
        cmd->add_option("--tie-tol", o.tie_tol, "scores closer than this tie")
            ->capture_default_str();
    };
    auto add_synth = [&](CLI::App* cmd) {
        cmd->add_option("--rng-seed", o.synth.rng_seed, "generator seed")->capture_default_str();
        cmd->add_option("--users", o.synth.n_users)->capture_default_str();
        cmd->add_option("--items", o.synth.n_items)->capture_default_str();
        cmd->add_option("--categories", o.synth.n_categories)->capture_default_str();
        cmd->add_option("--reviews", o.synth.n_reviews)->capture_default_str();
        cmd->add_option("--min-actions", o.synth.min_actions)->capture_default_str();
        cmd->add_option("--max-actions", o.synth.max_actions)->capture_default_str();
        cmd->add_flag("--follows", o.synth.follows_enabled, "add user-user follows edges");
        cmd->add_option("--similarity-rate", o.synth.similarity_edge_rate)
            ->capture_default_str();
    };

    auto* rec = app.add_subcommand("recommend", "top-k items for a user");
    rec->add_option("--graph", o.graph, "edge list")->required();
    rec->add_option("--seed-user", o.user, "user id")->required();
    rec->add_option("--out", o.out, "output file");
    add_model(rec);

    auto* exp = app.add_subcommand("explain", "explain a user's top recommendation");
    exp->add_option("--graph", o.graph, "edge list")->required();
    exp->add_option("--seed-user", o.user, "user id")->required();
    exp->add_option("--method", o.method, "prince, hc, sp or oracle")->capture_default_str();
    exp->add_option("--mode", o.mode, "precomputed or dynamic")->capture_default_str();
    exp->add_flag("--scan-all", o.scan_all, "consider every eligible item as a replacement");
    exp->add_flag("--no-timing", o.no_timing, "report wall_time_ms as 0");
    exp->add_option("--out", o.out, "output file");
    add_model(exp);

    auto* bench = app.add_subcommand("benchmark", "k-sweep over all users");
    bench->add_option("--graph", o.graph, "edge list (default: generate one)");
    bench->add_option("--ks", o.ks, "k values")->delimiter(',');
    bench->add_option("--methods", o.methods, "methods")->delimiter(',');
    bench->add_option("--modes", o.modes, "score modes")->delimiter(',');
    bench->add_option("--jobs", o.jobs, "worker threads")->capture_default_str();
    bench->add_option("--max-users", o.max_users, "0 means all");
    bench->add_flag("--scan-all", o.scan_all);
    bench->add_flag("--no-timing", o.no_timing, "zero the timing column");
    bench->add_option("--out", o.out, "output file");
    add_model(bench);
    add_synth(bench);

    auto* gen = app.add_subcommand("generate", "write a synthetic corpus");
    gen->add_option("--out", o.out, "edge list path; stats go to <out>.stats")->required();
    add_synth(gen);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*rec) run_recommend(o);
        if (*exp) run_explain(o);
        if (*bench) run_benchmark(o);
        if (*gen) run_generate(o);
    } catch (const Failure& f) {
        std::cerr << "prince: " << f.message << '\n';
        return f.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "prince: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
