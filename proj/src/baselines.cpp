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

#include "prince/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <string>

#include "prince/error.hpp"

namespace prince {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Setup {
    UserContext ctx;
    CandidatePool pool;  // for the largest k
};

Setup prepare(const HinGraph& g, NodeId user, const ExplainConfig& cfg,
              std::span<const std::size_t> ks) {
    UserContext ctx = make_user_context(g, user, cfg);
    if (ctx.actions.empty()) {
        throw Error(ErrorCode::NoActions, "user " + std::to_string(user) + " has no actions");
    }
    ExplainConfig widest = cfg;
    widest.k = ks.empty() ? cfg.k : *std::max_element(ks.begin(), ks.end());
    for (std::size_t k : ks) {
        if (k < 2 && !cfg.scan_all_items) {
            throw Error(ErrorCode::NoEligibleItems, "k = 1 leaves no replacement candidates");
        }
    }
    CandidatePool pool = candidate_pool(ctx, widest);
    return {std::move(ctx), std::move(pool)};
}

std::vector<NodeId> universe_for(const Setup& s, std::size_t k, const ExplainConfig& cfg) {
    const std::size_t n = cfg.scan_all_items ? s.pool.ranking.size()
                                             : std::min(k, s.pool.ranking.size());
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(s.pool.ranking[i].item);
    return out;
}

// Power iteration from the user that stops once the error bound settles
// whether some universe item beats rec by more than tie_tol.
bool displaced(const TransitionView& view, NodeId user, NodeId rec,
               const std::vector<NodeId>& universe, const ExplainConfig& cfg) {
    const double alpha = cfg.alpha;
    const std::size_t n = view.node_count();
    std::vector<double> x(n, 0.0);
    std::vector<double> y(n, 0.0);
    x[user] = 1.0;
    for (std::size_t iter = 0; iter < cfg.max_iters; ++iter) {
        std::fill(y.begin(), y.end(), 0.0);
        y[user] = alpha;
        for (NodeId v = 0; v < n; ++v) {
            if (x[v] == 0.0) continue;
            const double carry = (1.0 - alpha) * x[v];
            for (const auto& t : view.row(v)) y[t.node] += carry * t.prob;
        }
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) change += std::abs(y[i] - x[i]);
        x.swap(y);
        double gap = -1.0;
        for (NodeId i : universe) {
            if (i != rec) gap = std::max(gap, x[i] - x[rec]);
        }
        const double bound = (1.0 - alpha) / alpha * change;
        if (gap > cfg.tie_tol + 2.0 * bound) return true;
        if (gap < cfg.tie_tol - 2.0 * bound) return false;
        if (bound <= cfg.power_tol) return gap > cfg.tie_tol;
    }
    throw Error(ErrorCode::NoConvergence, "power iteration did not converge");
}

// Deletes actions in the order produced by `next` (nullopt stops) and
// settles each pool size the first time some item of its universe beats rec.
template <class Next>
std::vector<Explanation> run_deletions(const HinGraph& g, NodeId user, const ExplainConfig& cfg,
                                       std::span<const std::size_t> ks, Method method,
                                       Next&& next) {
    const Setup s = prepare(g, user, cfg, ks);
    const auto t0 = Clock::now();
    const NodeId rec = s.pool.rec;

    std::vector<Explanation> out(ks.size());
    std::vector<std::vector<NodeId>> universes;
    for (std::size_t j = 0; j < ks.size(); ++j) {
        out[j].user = user;
        out[j].original_rec = rec;
        out[j].method = method;
        out[j].score_mode = cfg.score_mode;
        out[j].action_count = s.ctx.actions.size();
        universes.push_back(universe_for(s, ks[j], cfg));
    }
    // Pending pool sizes, widest first: if the widest universe has no
    // winner, no narrower one does either.
    std::vector<std::size_t> pending(ks.size());
    for (std::size_t j = 0; j < ks.size(); ++j) pending[j] = j;
    std::stable_sort(pending.begin(), pending.end(), [&](std::size_t a, std::size_t b) {
        return universes[a].size() > universes[b].size();
    });

    std::vector<NodeId> removed;
    while (!pending.empty()) {
        const std::optional<NodeId> n = next(s.ctx, rec, removed);
        if (!n) break;
        removed.push_back(*n);
        const TransitionView view = s.ctx.without(removed);
        std::vector<std::size_t> still;
        bool settled_any = true;
        for (std::size_t j : pending) {
            if (!settled_any || !displaced(view, user, rec, universes[j], cfg)) {
                settled_any = false;
                still.push_back(j);
                continue;
            }
            const VerifyResult v =
                verify_counterfactual(s.ctx, rec, universes[j][1], removed, universes[j], cfg);
            if (!(v.top && *v.top != rec && v.top_score > v.rec_score + cfg.tie_tol)) {
                still.push_back(j);
                continue;
            }
            std::vector<NodeId> sorted = removed;
            std::sort(sorted.begin(), sorted.end());
            for (const auto& a : s.ctx.actions.actions) {
                if (std::binary_search(sorted.begin(), sorted.end(), a.target)) {
                    out[j].actions.push_back(a);
                }
            }
            out[j].status = ExplanationStatus::Found;
            out[j].replacement = v.top;
            out[j].verified = true;
            out[j].wall_time_ms = ms_since(t0);
        }
        pending = std::move(still);
    }
    const double total = ms_since(t0);
    for (std::size_t j : pending) out[j].wall_time_ms = total;
    return out;
}

// Highest Contributions: the remaining action with the largest
// W(u, n) * PPR(n, rec) on the current view, smallest id on ties.
struct HcOrder {
    const ExplainConfig& cfg;
    std::vector<double> frozen;

    std::optional<NodeId> operator()(const UserContext& ctx, NodeId rec,
                                     const std::vector<NodeId>& removed) {
        std::vector<NodeId> remaining;
        for (NodeId t : ctx.actions.targets()) {
            if (std::find(removed.begin(), removed.end(), t) == removed.end()) {
                remaining.push_back(t);
            }
        }
        if (remaining.empty()) return std::nullopt;
        std::vector<double> contribution;
        if (cfg.hc_recompute || frozen.empty()) {
            const TransitionView view = ctx.without(removed);
            const PushState push = ppr_reverse_push(view, rec, cfg.alpha, cfg.epsilon);
            contribution.assign(ctx.graph->node_count(), 0.0);
            for (NodeId n : remaining) contribution[n] = view.prob(ctx.user, n) * push.estimate(n);
            if (!cfg.hc_recompute) frozen = contribution;
        } else {
            contribution = frozen;
        }
        NodeId best = remaining.front();
        for (NodeId n : remaining) {
            if (contribution[n] > contribution[best]) best = n;
        }
        return best;
    }
};

// Shortest Paths: first hop of a shortest u -> rec path over graph edges.
// Only the user's own edges are ever removed, so hop distances to rec that
// avoid the user are computed once.
struct SpOrder {
    std::vector<std::size_t> dist;

    static constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

    std::optional<NodeId> operator()(const UserContext& ctx, NodeId rec,
                                     const std::vector<NodeId>& removed) {
        const HinGraph& g = *ctx.graph;
        if (dist.empty()) {
            dist.assign(g.node_count(), kUnreached);
            std::deque<NodeId> frontier{rec};
            dist[rec] = 0;
            while (!frontier.empty()) {
                const NodeId v = frontier.front();
                frontier.pop_front();
                for (const auto& e : g.in_edges(v)) {
                    if (e.weight <= 0.0 || e.source == ctx.user || dist[e.source] != kUnreached) {
                        continue;
                    }
                    dist[e.source] = dist[v] + 1;
                    frontier.push_back(e.source);
                }
            }
        }
        std::optional<NodeId> best;
        for (std::size_t i = 0; i < ctx.actions.size(); ++i) {
            const NodeId n = ctx.actions.actions[i].target;
            if (ctx.actions.actions[i].weight <= 0.0 || dist[n] == kUnreached) continue;
            if (std::find(removed.begin(), removed.end(), n) != removed.end()) continue;
            if (!best || dist[n] < dist[*best]) best = n;
        }
        return best;
    }
};

}  // namespace

std::vector<Explanation> explain_hc_sweep(const HinGraph& g, NodeId user,
                                          const ExplainConfig& cfg,
                                          std::span<const std::size_t> ks) {
    return run_deletions(g, user, cfg, ks, Method::HighestContributions, HcOrder{cfg, {}});
}

std::vector<Explanation> explain_sp_sweep(const HinGraph& g, NodeId user,
                                          const ExplainConfig& cfg,
                                          std::span<const std::size_t> ks) {
    return run_deletions(g, user, cfg, ks, Method::ShortestPaths, SpOrder{});
}

Explanation explain_hc(const HinGraph& g, NodeId user, const ExplainConfig& cfg) {
    const std::size_t k[] = {cfg.k};
    return std::move(explain_hc_sweep(g, user, cfg, k).front());
}

Explanation explain_sp(const HinGraph& g, NodeId user, const ExplainConfig& cfg) {
    const std::size_t k[] = {cfg.k};
    return std::move(explain_sp_sweep(g, user, cfg, k).front());
}

}  // namespace prince
