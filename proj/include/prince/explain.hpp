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


#ifndef PRINCE_EXPLAIN_HPP
#define PRINCE_EXPLAIN_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "prince/graph.hpp"
#include "prince/ppr.hpp"
#include "prince/transition.hpp"

namespace prince {

enum class ScoreMode { Precomputed, Dynamic };
enum class Method { Prince, HighestContributions, ShortestPaths, Oracle };
enum class ExplanationStatus { Found, NoCounterfactual };

std::string_view to_string(ScoreMode mode) noexcept;
std::string_view to_string(Method method) noexcept;
std::string_view to_string(ExplanationStatus status) noexcept;

struct ExplainConfig {
    double alpha = kDefaultAlpha;
    double beta = 0.5;
    /// Candidate pool is ranks 2..k of the original top-k.
    std::size_t k = 5;
    double epsilon = kDefaultEpsilon;
    /// "Outranks" means exceeds by more than this.
    double tie_tol = 1e-10;
    ScoreMode score_mode = ScoreMode::Precomputed;
    /// Use every eligible item as a candidate instead of the top-k pool.
    bool scan_all_items = false;
    /// HC recomputes contributions after each deletion; false freezes them.
    bool hc_recompute = true;
    std::size_t max_oracle_actions = 15;
    double power_tol = kDefaultPowerTol;
    std::size_t max_iters = kDefaultMaxIters;
    SimilaritySpec similarity;

    /// Throws InvalidArgument.
    void validate() const;
};

/// Everything the explainers share about one seed user: the original view
/// (anchored at the user), the action set, and W(u, n_i) per action.
struct UserContext {
    const HinGraph* graph = nullptr;
    NodeId user = 0;
    TransitionView view;
    ActionSet actions;
    std::vector<double> weights;

    /// View with every action of the user removed (G \ A).
    TransitionView without_all_actions() const;
    TransitionView without(std::span<const NodeId> removed) const;
};

/// Throws NotAUser, InvalidArgument (non-identity similarity row on the user).
UserContext make_user_context(const HinGraph& g, NodeId user, const ExplainConfig& cfg);

struct CandidatePool {
    NodeId rec = 0;
    std::vector<NodeId> candidates;  // rank order, rec excluded
    std::vector<ScoredItem> ranking;  // rec followed by candidates
};

/// Top-1 item plus the replacement candidates. Throws NoEligibleItems.
CandidatePool candidate_pool(const UserContext& ctx, const ExplainConfig& cfg);

/// PPR(., t | A) per target t, i.e. scores on G \ A.
class ReverseScores {
public:
    void insert(NodeId target, PprEstimate estimate);
    const PprEstimate& at(NodeId target) const;
    bool contains(NodeId target) const { return by_target_.count(target) != 0; }
    /// Largest additive error bound over the stored estimates.
    double epsilon() const noexcept { return epsilon_; }

private:
    std::map<NodeId, PprEstimate> by_target_;
    double epsilon_ = 0.0;
};

/// Fresh reverse push per target on G \ A.
ReverseScores precompute_reverse_scores(const UserContext& ctx, std::span<const NodeId> targets,
                                        const ExplainConfig& cfg);
/// Reverse push per target on G, then a dynamic update removing all of A.
ReverseScores dynamic_reverse_scores(const UserContext& ctx, std::span<const NodeId> targets,
                                     const ExplainConfig& cfg);

struct ContributionDiff {
    NodeId neighbor;
    double weight;  // W(u, neighbor)
    double diff;    // weight * (PPR(neighbor, rec | A) - PPR(neighbor, rec_star | A))
};

/// One entry per action, descending by diff; near-equal diffs (within the
/// score error) are ordered by ascending neighbor. Throws CandidateIsNeighbor.
std::vector<ContributionDiff> contribution_diffs(const UserContext& ctx, NodeId rec,
                                                 NodeId rec_star, const ReverseScores& scores,
                                                 double tie_tol);

struct SwapResult {
    /// False is the NoSwap sentinel: even removing every action leaves rec ahead.
    bool swapped = false;
    std::vector<NodeId> removed;  // in removal order
    double initial_sum = 0.0;
    double final_sum = 0.0;
    std::size_t heap_pops = 0;
};

/// Smallest set of actions whose removal makes rec_star outrank rec,
/// using only scores on G \ A. Throws CandidateIsNeighbor.
SwapResult swap_order(const UserContext& ctx, NodeId rec, NodeId rec_star,
                      const ReverseScores& scores, double tie_tol);

struct CandidateReport {
    NodeId candidate;
    std::size_t rank;  // 2-based rank in the original ranking
    bool swapped;
    std::size_t swap_size;
    double initial_sum;
    double final_sum;
};

struct Explanation {
    NodeId user = 0;
    NodeId original_rec = 0;
    std::optional<NodeId> replacement;
    std::vector<Action> actions;
    ExplanationStatus status = ExplanationStatus::NoCounterfactual;
    Method method = Method::Prince;
    ScoreMode score_mode = ScoreMode::Precomputed;
    std::size_t action_count = 0;  // |A|
    bool verified = false;
    std::vector<CandidateReport> candidates;
    std::size_t swap_order_calls = 0;
    double wall_time_ms = 0.0;
    double precompute_ms = 0.0;

    std::size_t size() const noexcept { return actions.size(); }
    std::vector<NodeId> action_targets() const;
    /// Size with the NoCounterfactual sentinel A* = A.
    std::size_t sentinel_size() const noexcept {
        return status == ExplanationStatus::Found ? actions.size() : action_count;
    }
};

/// Minimum counterfactual explanation for the user's top-1 recommendation.
/// Throws NoActions, NoEligibleItems, NotAUser.
Explanation explain(const HinGraph& g, NodeId user, const ExplainConfig& cfg = {});

/// Runs the selection loop on already computed scores. Used by explain()
/// and by callers that manage their own score cache.
/// One scoring pass shared by several pool sizes: element j equals
/// explain() with cfg.k = ks[j]. Reported times count only the reverse
/// scores that pool actually needs.
std::vector<Explanation> explain_sweep(const HinGraph& g, NodeId user, const ExplainConfig& cfg,
                                       std::span<const std::size_t> ks);

Explanation explain_with_scores(const UserContext& ctx, const CandidatePool& pool,
                                const ReverseScores& scores, const ExplainConfig& cfg);

struct VerifyResult {
    bool counterfactual = false;
    double rec_score = 0.0;
    double rec_star_score = 0.0;
    std::optional<NodeId> top;  // best of `candidates` after removal
    double top_score = 0.0;
};

/// Recomputes PPR(u, .) on G \ subset by power iteration. True iff rec_star
/// beats rec by more than tie_tol and is the top of `candidates` (every
/// eligible item when empty).
VerifyResult verify_counterfactual(const UserContext& ctx, NodeId rec, NodeId rec_star,
                                   std::span<const NodeId> subset,
                                   std::span<const NodeId> candidates, const ExplainConfig& cfg);

struct Decomposition {
    double ppr_uu = 0.0;       // PPR(u, u | subset)
    double aggregation = 0.0;  // alpha^-1 (1-alpha) sum W(u,n_i|subset) PPR(n_i, rec | A)
    double product = 0.0;
};

/// PPR(u, rec | subset) assembled from PPR(u, u | subset) and scores on
/// G \ A. Throws CandidateIsNeighbor.
Decomposition decompose_ppr(const UserContext& ctx, NodeId rec, std::span<const NodeId> subset,
                            const ExplainConfig& cfg);

}  // namespace prince

#endif  // PRINCE_EXPLAIN_HPP
