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


#ifndef PRINCE_CORPUS_HPP
#define PRINCE_CORPUS_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "prince/graph.hpp"

namespace prince {

/// Tab-separated edge list, one edge per line:
///   src_id  dst_id  src_type  dst_type  edge_type  weight
/// Lines starting with '#' are comments. Throws ParseError, TypeConflict
/// and the build_graph errors.
HinGraph load_graph(const std::filesystem::path& path);
HinGraph parse_graph(std::istream& in);

/// Writes every edge in (src, dst, type) order with shortest round-trip
/// weights, so load_graph(save_graph(g)) reproduces g exactly (isolated
/// nodes cannot be represented).
void save_graph(const HinGraph& g, const std::filesystem::path& path);
void write_graph(const HinGraph& g, std::ostream& out);

/// "key: value" lines: node/edge totals and per-type counts.
std::string graph_stats(const HinGraph& g);
void write_stats(const HinGraph& g, const std::filesystem::path& path);

struct SynthParams {
    std::size_t n_users = 100;
    std::size_t n_items = 2000;
    std::size_t n_categories = 43;
    std::size_t n_reviews = 2148;
    std::size_t min_actions = 10;
    std::size_t max_actions = 100;
    bool follows_enabled = false;
    /// Expected similarity edges per review node.
    double similarity_edge_rate = 0.0033;
    std::uint64_t rng_seed = 1;
};

/// Review-site HIN: users rate items (bidirectional), some ratings carry a
/// review node (user<->review, item<->review), items belong to categories
/// drawn from a power law, optional directed follows between users, and
/// review-review similarity edges. Weakly connected. Deterministic in
/// rng_seed. Throws InfeasibleParams.
HinGraph generate_synth(const SynthParams& params);

}  // namespace prince

#endif  // PRINCE_CORPUS_HPP
