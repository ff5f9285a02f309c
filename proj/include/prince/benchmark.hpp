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


#ifndef PRINCE_BENCHMARK_HPP
#define PRINCE_BENCHMARK_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "prince/corpus.hpp"
#include "prince/explain.hpp"

namespace prince {

struct BenchmarkSpec {
    std::vector<std::size_t> ks{3, 5, 10, 15, 20};
    std::vector<Method> methods{Method::Prince, Method::HighestContributions,
                                Method::ShortestPaths};
    std::vector<ScoreMode> modes{ScoreMode::Precomputed, ScoreMode::Dynamic};
    ExplainConfig base;
    /// 0 means every user with at least one action.
    std::size_t max_users = 0;
    std::size_t jobs = 1;
};

/// One explanation run. `error` is non-empty when the instance was skipped
/// (e.g. no eligible items).
struct InstanceResult {
    Method method;
    std::size_t k;
    std::optional<ScoreMode> mode;  // empty for baselines
    NodeId user;
    Explanation explanation;
    std::string error;
};

struct BenchmarkRow {
    Method method;
    std::size_t k;
    std::optional<ScoreMode> mode;
    std::size_t instances;
    double mean_size;  // NoCounterfactual counts as |A|
    double std_size;
    double success_rate;
    double mean_wall_ms;
};

struct BenchmarkReport {
    std::vector<InstanceResult> instances;
    std::vector<BenchmarkRow> rows;  // method, k, mode order of BenchmarkSpec
};

/// Baselines do not depend on the score mode, so they run once per k and
/// report mode "na".
BenchmarkReport run_benchmark(const HinGraph& g, const BenchmarkSpec& spec);

/// TSV with a schema_version comment line; wall times are zeroed when
/// `with_timing` is false so output is byte-identical across runs.
std::string format_tsv(const BenchmarkReport& report, bool with_timing);

}  // namespace prince

#endif  // PRINCE_BENCHMARK_HPP
