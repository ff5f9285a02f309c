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


#ifndef PRINCE_BASELINES_HPP
#define PRINCE_BASELINES_HPP

#include <span>
#include <vector>

#include "prince/explain.hpp"

namespace prince {

/// Highest Contributions: repeatedly deletes the action with the largest
/// W(u, n_i) * PPR(n_i, rec) until rec is outranked. Throws NoActions.
Explanation explain_hc(const HinGraph& g, NodeId user, const ExplainConfig& cfg = {});

/// Shortest Paths: repeatedly deletes the first edge of a shortest u -> rec
/// path (hop count, smallest first hop on ties). Throws NoActions.
Explanation explain_sp(const HinGraph& g, NodeId user, const ExplainConfig& cfg = {});

/// Both baselines delete actions in an order that depends only on rec, so
/// one pass serves every pool size: element j equals the single-k call with
/// cfg.k = ks[j]. Wall time for each k is the time until that k was settled.
std::vector<Explanation> explain_hc_sweep(const HinGraph& g, NodeId user,
                                          const ExplainConfig& cfg,
                                          std::span<const std::size_t> ks);
std::vector<Explanation> explain_sp_sweep(const HinGraph& g, NodeId user,
                                          const ExplainConfig& cfg,
                                          std::span<const std::size_t> ks);

}  // namespace prince

#endif  // PRINCE_BASELINES_HPP
