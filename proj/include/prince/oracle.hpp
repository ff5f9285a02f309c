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


#ifndef PRINCE_ORACLE_HPP
#define PRINCE_ORACLE_HPP

#include <cstddef>

#include "prince/explain.hpp"

namespace prince {

inline constexpr double kExactTol = 1e-14;

/// Reference PPR: power iteration with extended-precision accumulation to
/// L1 tolerance 1e-14. Throws NoConvergence.
PprEstimate exact_ppr(const TransitionView& view, NodeId seed, double alpha = kDefaultAlpha,
                      double tol = kExactTol);

/// Enumerates action subsets by increasing size, then lexicographically, and
/// returns the first whose removal lets a candidate outrank rec.
/// Throws NoActions, TooManyActions (|A| > max_actions).
Explanation brute_force_explain(const HinGraph& g, NodeId user, const ExplainConfig& cfg,
                                std::size_t max_actions);
inline Explanation brute_force_explain(const HinGraph& g, NodeId user,
                                       const ExplainConfig& cfg = {}) {
    return brute_force_explain(g, user, cfg, cfg.max_oracle_actions);
}

}  // namespace prince

#endif  // PRINCE_ORACLE_HPP
