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


#ifndef PRINCE_PPR_HPP
#define PRINCE_PPR_HPP

#include <cstddef>
#include <deque>
#include <span>
#include <vector>

#include "prince/transition.hpp"

namespace prince {

enum class PprDirection { Forward, Reverse };
enum class PprMethod { PowerIteration, ReversePush };

/// Forward estimates hold PPR(anchor, v) for every v; reverse estimates
/// hold PPR(v, anchor). Dense, indexed by NodeId.
struct PprEstimate {
    std::vector<double> scores;
    NodeId anchor = 0;
    PprDirection direction = PprDirection::Forward;
    PprMethod method = PprMethod::PowerIteration;
    double epsilon = 0.0;
    std::size_t iterations = 0;

    double operator[](NodeId v) const { return scores[v]; }
};

inline constexpr double kDefaultAlpha = 0.15;
inline constexpr double kDefaultPowerTol = 1e-12;
inline constexpr double kDefaultEpsilon = 1e-8;
inline constexpr std::size_t kDefaultMaxIters = 100000;

/// Power iteration on PPR(s,.) = alpha e_s + (1 - alpha) PPR(s,.) W until the
/// L1 distance to the fixed point is below `tol`. Throws NoConvergence.
PprEstimate ppr_power(const TransitionView& view, NodeId seed, double alpha = kDefaultAlpha,
                      double tol = kDefaultPowerTol, std::size_t max_iters = kDefaultMaxIters);

/**
 * Reverse local push state for one target t.
 *
 * Invariant: for every source s,
 *   PPR(s, t) = estimate(s) + sum_v PPR(s, v) * residual(v),
 * so |PPR(s, t) - estimate(s)| <= max_v |residual(v)| < epsilon once quiescent.
 */
class PushState {
public:
    PushState(TransitionView view, NodeId target, double alpha, double epsilon);

    const TransitionView& view() const noexcept { return view_; }
    NodeId target() const noexcept { return target_; }
    double alpha() const noexcept { return alpha_; }
    double epsilon() const noexcept { return epsilon_; }
    double estimate(NodeId s) const { return estimates_[s]; }
    double residual(NodeId v) const { return residuals_[v]; }
    std::span<const double> estimates() const noexcept { return estimates_; }
    std::span<const double> residuals() const noexcept { return residuals_; }
    double max_abs_residual() const;
    std::size_t push_count() const noexcept { return pushes_; }
    /// True when the last update fell back to a full recompute.
    bool recomputed() const noexcept { return recomputed_; }

    PprEstimate to_estimate() const;

private:
    friend PushState ppr_reverse_push(const TransitionView&, NodeId, double, double);
    friend PushState push_update_remove_actions(PushState, NodeId, std::span<const NodeId>);

    void seed_queue();
    void drain();

    TransitionView view_;
    NodeId target_;
    double alpha_;
    double epsilon_;
    std::vector<double> estimates_;
    std::vector<double> residuals_;
    std::deque<NodeId> queue_;
    std::vector<char> queued_;
    std::size_t pushes_ = 0;
    bool recomputed_ = false;
};

/// Estimates PPR(s, target) for all s with additive error below epsilon.
PushState ppr_reverse_push(const TransitionView& view, NodeId target,
                           double alpha = kDefaultAlpha, double epsilon = kDefaultEpsilon);

/// Moves a quiescent state to remove_actions_view(state.view(), user, removed)
/// by re-injecting residual on the user's row and pushing again. Falls back to
/// a fresh push when the re-injected residual exceeds 0.5. Throws NotAnAction.
PushState push_update_remove_actions(PushState state, NodeId user,
                                     std::span<const NodeId> removed);

struct ScoredItem {
    NodeId item;
    double score;
};

/// Orders indices by descending value; values within `tie_tol` of their
/// neighbor in that order form a tie group, ordered by ascending id.
std::vector<std::size_t> ranked_order(std::span<const double> values,
                                      std::span<const NodeId> ids, double tie_tol);

/// Items that are not out-neighbors of `user` in the base graph, ranked by
/// PPR(user, .). Throws NotAUser.
std::vector<ScoredItem> top_k_items(const TransitionView& view, NodeId user, std::size_t k,
                                    double alpha = kDefaultAlpha, double tie_tol = 0.0,
                                    double tol = kDefaultPowerTol);

/// Same ranking computed from an existing forward estimate.
std::vector<ScoredItem> rank_items(const HinGraph& g, const PprEstimate& forward, NodeId user,
                                   std::size_t k, double tie_tol);

}  // namespace prince

#endif  // PRINCE_PPR_HPP
