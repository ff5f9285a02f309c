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

#include "prince/explain.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "prince/error.hpp"

namespace prince {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void check_candidate(const UserContext& ctx, NodeId item) {
    const HinGraph& g = *ctx.graph;
    if (item >= g.node_count()) {
        throw Error(ErrorCode::UnknownNode, "node " + std::to_string(item) + " out of range");
    }
    if (item == ctx.user || ctx.actions.contains(item)) {
        throw Error(ErrorCode::CandidateIsNeighbor,
                    "node " + std::to_string(item) + " is the user or one of its out-neighbors");
    }
}

}  // namespace

std::string_view to_string(ScoreMode mode) noexcept {
    return mode == ScoreMode::Precomputed ? "precomputed" : "dynamic";
}

std::string_view to_string(Method method) noexcept {
    switch (method) {
        case Method::Prince: return "prince";
        case Method::HighestContributions: return "hc";
        case Method::ShortestPaths: return "sp";
        case Method::Oracle: return "oracle";
    }
    return "unknown";
}

std::string_view to_string(ExplanationStatus status) noexcept {
    return status == ExplanationStatus::Found ? "found" : "no_counterfactual";
}

void ExplainConfig::validate() const {
    auto bad = [](const char* what) { throw Error(ErrorCode::InvalidArgument, what); };
    if (!(alpha > 0.0 && alpha < 1.0)) bad("alpha must be in (0, 1)");
    if (!(beta >= 0.0 && beta <= 1.0)) bad("beta must be in [0, 1]");
    if (k < 1) bad("k must be at least 1");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) bad("epsilon must be positive");
    if (!(tie_tol >= 0.0) || !std::isfinite(tie_tol)) bad("tie tolerance must be >= 0");
    if (!(power_tol > 0.0)) bad("power tolerance must be positive");
    if (max_iters == 0) bad("max_iters must be positive");
}

std::vector<NodeId> Explanation::action_targets() const {
    std::vector<NodeId> out;
    out.reserve(actions.size());
    for (const auto& a : actions) out.push_back(a.target);
    return out;
}

TransitionView UserContext::without_all_actions() const {
    return without(actions.targets());
}

TransitionView UserContext::without(std::span<const NodeId> removed) const {
    return remove_actions_view(view, user, removed);
}

UserContext make_user_context(const HinGraph& g, NodeId user, const ExplainConfig& cfg) {
    cfg.validate();
    if (user >= g.node_count() || !g.is_user(user)) {
        throw Error(ErrorCode::NotAUser, "node " + std::to_string(user) + " is not a user");
    }
    if (const auto* row = cfg.similarity.row(user)) {
        if (!(row->size() == 1 && (*row)[0].node == user && (*row)[0].prob == 1.0)) {
            throw Error(ErrorCode::InvalidArgument,
                        "the seed user's similarity row must be the identity");
        }
    }
    UserContext ctx{&g, user, make_transition_view(g, cfg.beta, cfg.similarity, user),
                    user_actions(g, user), {}};
    ctx.weights.reserve(ctx.actions.size());
    for (const auto& a : ctx.actions.actions) ctx.weights.push_back(ctx.view.prob(user, a.target));
    return ctx;
}

CandidatePool candidate_pool(const UserContext& ctx, const ExplainConfig& cfg) {
    const std::size_t k = cfg.scan_all_items ? std::numeric_limits<std::size_t>::max() : cfg.k;
    CandidatePool pool;
    pool.ranking = top_k_items(ctx.view, ctx.user, k, cfg.alpha, cfg.tie_tol, cfg.power_tol);
    if (pool.ranking.empty()) {
        throw Error(ErrorCode::NoEligibleItems,
                    "user " + std::to_string(ctx.user) + " has no eligible items");
    }
    pool.rec = pool.ranking.front().item;
    for (std::size_t i = 1; i < pool.ranking.size(); ++i) {
        pool.candidates.push_back(pool.ranking[i].item);
    }
    if (pool.candidates.empty()) {
        throw Error(ErrorCode::NoEligibleItems,
                    "no replacement candidates for user " + std::to_string(ctx.user) +
                        " (pool is ranks 2.." + std::to_string(cfg.k) + ")");
    }
    return pool;
}

void ReverseScores::insert(NodeId target, PprEstimate estimate) {
    epsilon_ = std::max(epsilon_, estimate.epsilon);
    by_target_.insert_or_assign(target, std::move(estimate));
}

const PprEstimate& ReverseScores::at(NodeId target) const {
    auto it = by_target_.find(target);
    if (it == by_target_.end()) {
        throw Error(ErrorCode::InvalidArgument,
                    "no reverse scores for target " + std::to_string(target));
    }
    return it->second;
}

ReverseScores precompute_reverse_scores(const UserContext& ctx, std::span<const NodeId> targets,
                                        const ExplainConfig& cfg) {
    const TransitionView without = ctx.without_all_actions();
    ReverseScores scores;
    for (NodeId t : targets) {
        if (scores.contains(t)) continue;
        scores.insert(t, ppr_reverse_push(without, t, cfg.alpha, cfg.epsilon).to_estimate());
    }
    return scores;
}

ReverseScores dynamic_reverse_scores(const UserContext& ctx, std::span<const NodeId> targets,
                                     const ExplainConfig& cfg) {
    const std::vector<NodeId> all = ctx.actions.targets();
    ReverseScores scores;
    for (NodeId t : targets) {
        if (scores.contains(t)) continue;
        PushState state = ppr_reverse_push(ctx.view, t, cfg.alpha, cfg.epsilon);
        state = push_update_remove_actions(std::move(state), ctx.user, all);
        scores.insert(t, state.to_estimate());
    }
    return scores;
}

std::vector<ContributionDiff> contribution_diffs(const UserContext& ctx, NodeId rec,
                                                 NodeId rec_star, const ReverseScores& scores,
                                                 double tie_tol) {
    check_candidate(ctx, rec);
    check_candidate(ctx, rec_star);
    if (rec == rec_star) {
        throw Error(ErrorCode::InvalidArgument, "rec and rec_star must differ");
    }
    const auto& pr = scores.at(rec).scores;
    const auto& ps = scores.at(rec_star).scores;

    std::vector<ContributionDiff> diffs;
    std::vector<double> values;
    std::vector<NodeId> ids;
    double max_weight = 0.0;
    for (std::size_t i = 0; i < ctx.actions.size(); ++i) {
        const NodeId n = ctx.actions.actions[i].target;
        const double w = ctx.weights[i];
        diffs.push_back({n, w, w * (pr[n] - ps[n])});
        values.push_back(diffs.back().diff);
        ids.push_back(n);
        max_weight = std::max(max_weight, w);
    }
    // Each diff carries up to 2 eps w of push error, so two diffs closer than
    // twice that cannot be told apart.
    const double group = tie_tol + 4.0 * scores.epsilon() * max_weight;
    std::vector<ContributionDiff> sorted;
    sorted.reserve(diffs.size());
    for (std::size_t j : ranked_order(values, ids, group)) sorted.push_back(diffs[j]);
    return sorted;
}

SwapResult swap_order(const UserContext& ctx, NodeId rec, NodeId rec_star,
                      const ReverseScores& scores, double tie_tol) {
    const auto diffs = contribution_diffs(ctx, rec, rec_star, scores, tie_tol);
    const double eps = scores.epsilon();

    SwapResult result;
    double sum = 0.0;
    double weight_left = 0.0;
    for (const auto& d : diffs) {
        sum += d.diff;
        weight_left += d.weight;
    }
    result.initial_sum = sum;
    auto swapped = [&] { return sum < -(tie_tol + 2.0 * eps * weight_left); };

    std::size_t next = 0;
    while (!swapped() && next < diffs.size()) {
        sum -= diffs[next].diff;
        weight_left -= diffs[next].weight;
        result.removed.push_back(diffs[next].neighbor);
        ++next;
        ++result.heap_pops;
    }
    if (next == diffs.size()) {
        sum = 0.0;
        weight_left = 0.0;
    }
    result.final_sum = sum;
    result.swapped = swapped();
    return result;
}

namespace {

struct Selection {
    std::optional<NodeId> best;
    std::vector<NodeId> removed;
};

Selection select_minimum(const UserContext& ctx, const CandidatePool& pool,
                         const ReverseScores& scores, const ExplainConfig& cfg,
                         Explanation& ex) {
    Selection sel;
    const double eps = scores.epsilon();
    for (std::size_t i = 0; i < pool.candidates.size(); ++i) {
        const NodeId c = pool.candidates[i];
        SwapResult r = swap_order(ctx, pool.rec, c, scores, cfg.tie_tol);
        ++ex.swap_order_calls;
        ex.candidates.push_back(
            {c, i + 2, r.swapped, r.removed.size(), r.initial_sum, r.final_sum});
        if (!r.swapped) continue;
        bool take = !sel.best || r.removed.size() < sel.removed.size();
        if (!take && r.removed.size() == sel.removed.size()) {
            // Equal size: keep the incumbent unless c beats it after removing A^c.
            std::vector<NodeId> gone = r.removed;
            std::sort(gone.begin(), gone.end());
            const auto& pc = scores.at(c).scores;
            const auto& pb = scores.at(*sel.best).scores;
            double margin = 0.0;
            double weight_left = 0.0;
            for (std::size_t j = 0; j < ctx.actions.size(); ++j) {
                const NodeId n = ctx.actions.actions[j].target;
                if (std::binary_search(gone.begin(), gone.end(), n)) continue;
                margin += ctx.weights[j] * (pc[n] - pb[n]);
                weight_left += ctx.weights[j];
            }
            take = margin > cfg.tie_tol + 2.0 * eps * weight_left;
        }
        if (take) {
            sel.best = c;
            sel.removed = std::move(r.removed);
        }
    }
    return sel;
}

void finish(const UserContext& ctx, const CandidatePool& pool, const ExplainConfig& cfg,
            const Selection& sel, Explanation& ex) {
    if (!sel.best) {
        ex.status = ExplanationStatus::NoCounterfactual;
        return;
    }
    std::vector<NodeId> removed = sel.removed;
    std::sort(removed.begin(), removed.end());
    for (const auto& a : ctx.actions.actions) {
        if (std::binary_search(removed.begin(), removed.end(), a.target)) ex.actions.push_back(a);
    }
    ex.status = ExplanationStatus::Found;
    ex.replacement = sel.best;

    std::vector<NodeId> universe;
    for (const auto& s : pool.ranking) universe.push_back(s.item);
    const VerifyResult v =
        verify_counterfactual(ctx, pool.rec, *sel.best, removed, universe, cfg);
    if (v.counterfactual) {
        ex.verified = true;
    } else if (v.top && *v.top != pool.rec && v.top_score > v.rec_score + cfg.tie_tol) {
        // The recommendation still changes; report the item that actually wins.
        ex.verified = true;
        ex.replacement = v.top;
    }
}

}  // namespace

Explanation explain_with_scores(const UserContext& ctx, const CandidatePool& pool,
                                const ReverseScores& scores, const ExplainConfig& cfg) {
    Explanation ex;
    ex.user = ctx.user;
    ex.original_rec = pool.rec;
    ex.method = Method::Prince;
    ex.score_mode = cfg.score_mode;
    ex.action_count = ctx.actions.size();
    const auto t0 = Clock::now();
    const Selection sel = select_minimum(ctx, pool, scores, cfg, ex);
    ex.wall_time_ms = ms_since(t0);
    finish(ctx, pool, cfg, sel, ex);
    return ex;
}

Explanation explain(const HinGraph& g, NodeId user, const ExplainConfig& cfg) {
    const UserContext ctx = make_user_context(g, user, cfg);
    if (ctx.actions.empty()) {
        throw Error(ErrorCode::NoActions, "user " + std::to_string(user) + " has no actions");
    }
    const CandidatePool pool = candidate_pool(ctx, cfg);
    std::vector<NodeId> targets{pool.rec};
    targets.insert(targets.end(), pool.candidates.begin(), pool.candidates.end());

    const auto t0 = Clock::now();
    if (cfg.score_mode == ScoreMode::Precomputed) {
        const ReverseScores scores = precompute_reverse_scores(ctx, targets, cfg);
        const double pre = ms_since(t0);
        Explanation ex = explain_with_scores(ctx, pool, scores, cfg);
        ex.precompute_ms = pre;
        return ex;
    }
    const ReverseScores scores = dynamic_reverse_scores(ctx, targets, cfg);
    const double score_ms = ms_since(t0);
    Explanation ex = explain_with_scores(ctx, pool, scores, cfg);
    ex.wall_time_ms += score_ms;
    return ex;
}

std::vector<Explanation> explain_sweep(const HinGraph& g, NodeId user, const ExplainConfig& cfg,
                                       std::span<const std::size_t> ks) {
    const UserContext ctx = make_user_context(g, user, cfg);
    if (ctx.actions.empty()) {
        throw Error(ErrorCode::NoActions, "user " + std::to_string(user) + " has no actions");
    }
    ExplainConfig widest = cfg;
    for (std::size_t k : ks) {
        if (k < 2 && !cfg.scan_all_items) {
            throw Error(ErrorCode::NoEligibleItems, "k = 1 leaves no replacement candidates");
        }
    }
    if (!ks.empty()) widest.k = *std::max_element(ks.begin(), ks.end());
    const CandidatePool full = candidate_pool(ctx, widest);

    // Score every target of the widest pool once, timing each separately.
    const bool pre = cfg.score_mode == ScoreMode::Precomputed;
    const auto t0 = Clock::now();
    const TransitionView without = pre ? ctx.without_all_actions() : TransitionView{};
    const double shared_ms = ms_since(t0);
    const std::vector<NodeId> all = ctx.actions.targets();
    ReverseScores scores;
    std::vector<double> target_ms;
    for (const auto& s : full.ranking) {
        const auto t1 = Clock::now();
        if (pre) {
            scores.insert(s.item,
                          ppr_reverse_push(without, s.item, cfg.alpha, cfg.epsilon).to_estimate());
        } else {
            PushState state = ppr_reverse_push(ctx.view, s.item, cfg.alpha, cfg.epsilon);
            state = push_update_remove_actions(std::move(state), ctx.user, all);
            scores.insert(s.item, state.to_estimate());
        }
        target_ms.push_back(ms_since(t1));
    }

    std::vector<Explanation> out;
    for (std::size_t k : ks) {
        const std::size_t n = cfg.scan_all_items ? full.ranking.size()
                                                 : std::min(k, full.ranking.size());
        CandidatePool pool;
        pool.rec = full.rec;
        pool.ranking.assign(full.ranking.begin(), full.ranking.begin() + n);
        pool.candidates.assign(full.candidates.begin(), full.candidates.begin() + (n - 1));
        double score_ms = shared_ms;
        for (std::size_t i = 0; i < n; ++i) score_ms += target_ms[i];
        Explanation ex = explain_with_scores(ctx, pool, scores, cfg);
        if (pre) {
            ex.precompute_ms = score_ms;
        } else {
            ex.wall_time_ms += score_ms;
        }
        out.push_back(std::move(ex));
    }
    return out;
}

VerifyResult verify_counterfactual(const UserContext& ctx, NodeId rec, NodeId rec_star,
                                   std::span<const NodeId> subset,
                                   std::span<const NodeId> candidates, const ExplainConfig& cfg) {
    const TransitionView view = ctx.without(subset);
    const PprEstimate f = ppr_power(view, ctx.user, cfg.alpha, cfg.power_tol, cfg.max_iters);

    VerifyResult out;
    out.rec_score = f.scores.at(rec);
    out.rec_star_score = f.scores.at(rec_star);

    std::vector<NodeId> ids(candidates.begin(), candidates.end());
    if (ids.empty()) {
        for (NodeId i : ctx.graph->items()) {
            if (i != ctx.user && !ctx.actions.contains(i)) ids.push_back(i);
        }
    }
    std::vector<double> values;
    values.reserve(ids.size());
    for (NodeId i : ids) values.push_back(f.scores.at(i));
    const auto order = ranked_order(values, ids, cfg.tie_tol);
    if (!order.empty()) {
        out.top = ids[order.front()];
        out.top_score = values[order.front()];
    }
    out.counterfactual = out.top == rec_star && out.rec_star_score > out.rec_score + cfg.tie_tol;
    return out;
}

Decomposition decompose_ppr(const UserContext& ctx, NodeId rec, std::span<const NodeId> subset,
                            const ExplainConfig& cfg) {
    check_candidate(ctx, rec);
    const TransitionView sub = ctx.without(subset);
    const TransitionView none = ctx.without_all_actions();

    Decomposition d;
    d.ppr_uu = ppr_power(sub, ctx.user, cfg.alpha, cfg.power_tol, cfg.max_iters)[ctx.user];
    double agg = 0.0;
    for (const auto& a : ctx.actions.actions) {
        const double w = sub.prob(ctx.user, a.target);
        if (w == 0.0) continue;
        agg += w * ppr_power(none, a.target, cfg.alpha, cfg.power_tol, cfg.max_iters)[rec];
    }
    d.aggregation = (1.0 - cfg.alpha) / cfg.alpha * agg;
    d.product = d.ppr_uu * d.aggregation;
    return d;
}

}  // namespace prince
