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


#include "prince/ppr.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <string>

#include "prince/error.hpp"

namespace prince {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "alpha must be in (0, 1)");
    }
}

void check_node(const TransitionView& view, NodeId v) {
    if (v >= view.node_count()) {
        throw Error(ErrorCode::UnknownNode, "node " + std::to_string(v) + " out of range");
    }
}

}  // namespace

PprEstimate ppr_power(const TransitionView& view, NodeId seed, double alpha, double tol,
                      std::size_t max_iters) {
    check_alpha(alpha);
    check_node(view, seed);
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");

    const std::size_t n = view.node_count();
    std::vector<double> x(n, 0.0);
    std::vector<double> y(n, 0.0);
    x[seed] = 1.0;
    // ||x_k - x*|| <= (1-alpha)/alpha * ||x_k - x_{k-1}||
    const double stop = tol * alpha / (1.0 - alpha);

    for (std::size_t iter = 1; iter <= max_iters; ++iter) {
        std::fill(y.begin(), y.end(), 0.0);
        y[seed] = alpha;
        for (NodeId v = 0; v < n; ++v) {
            const double mass = x[v];
            if (mass == 0.0) continue;
            const double carry = (1.0 - alpha) * mass;
            for (const auto& t : view.row(v)) y[t.node] += carry * t.prob;
        }
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) change += std::abs(y[i] - x[i]);
        x.swap(y);
        if (change <= stop) {
            return {std::move(x), seed, PprDirection::Forward, PprMethod::PowerIteration, 0.0,
                    iter};
        }
    }
    throw Error(ErrorCode::NoConvergence,
                "power iteration did not converge in " + std::to_string(max_iters) +
                    " iterations");
}

PushState::PushState(TransitionView view, NodeId target, double alpha, double epsilon)
    : view_(std::move(view)),
      target_(target),
      alpha_(alpha),
      epsilon_(epsilon),
      estimates_(view_.node_count(), 0.0),
      residuals_(view_.node_count(), 0.0),
      queued_(view_.node_count(), 0) {}

double PushState::max_abs_residual() const {
    double m = 0.0;
    for (double r : residuals_) m = std::max(m, std::abs(r));
    return m;
}

PprEstimate PushState::to_estimate() const {
    return {estimates_, target_, PprDirection::Reverse, PprMethod::ReversePush, epsilon_,
            pushes_};
}

void PushState::seed_queue() {
    for (NodeId v = 0; v < residuals_.size(); ++v) {
        if (!queued_[v] && std::abs(residuals_[v]) >= epsilon_) {
            queued_[v] = 1;
            queue_.push_back(v);
        }
    }
}

void PushState::drain() {
    auto& fifo = queue_;
    const double keep = 1.0 - alpha_;
    while (!fifo.empty()) {
        const NodeId v = fifo.front();
        fifo.pop_front();
        queued_[v] = 0;
        const double r = residuals_[v];
        if (std::abs(r) < epsilon_) continue;
        // Pushing through the self-loop is a geometric series; fold it in.
        const double scale = 1.0 / (1.0 - keep * view_.prob(v, v));
        estimates_[v] += alpha_ * r * scale;
        residuals_[v] = 0.0;
        const double spread = keep * r * scale;
        view_.for_each_in(v, [&](NodeId w, double p) {
            if (w == v) return;
            residuals_[w] += spread * p;
            if (!queued_[w] && std::abs(residuals_[w]) >= epsilon_) {
                queued_[w] = 1;
                fifo.push_back(w);
            }
        });
        ++pushes_;
    }
}

PushState ppr_reverse_push(const TransitionView& view, NodeId target, double alpha,
                           double epsilon) {
    check_alpha(alpha);
    check_node(view, target);
    if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
    PushState state(view, target, alpha, epsilon);
    state.residuals_[target] = 1.0;
    state.seed_queue();
    state.drain();
    return state;
}

PushState push_update_remove_actions(PushState state, NodeId user,
                                     std::span<const NodeId> removed) {
    TransitionView next = remove_actions_view(state.view_, user, removed);
    state.recomputed_ = false;
    if (removed.empty()) return state;

    // alpha r(v) = alpha [v == t] + (1 - alpha) sum_w P(v, w) p(w) - p(v) holds
    // for every v; only row `user` of P changed.
    auto old_row = state.view_.row(user);
    auto new_row = next.row(user);
    double delta = 0.0;
    for (const auto& t : new_row) delta += t.prob * state.estimates_[t.node];
    for (const auto& t : old_row) delta -= t.prob * state.estimates_[t.node];
    delta *= (1.0 - state.alpha_) / state.alpha_;

    if (std::abs(delta) > 0.5) {
        PushState fresh = ppr_reverse_push(next, state.target_, state.alpha_, state.epsilon_);
        fresh.recomputed_ = true;
        return fresh;
    }
    state.view_ = std::move(next);
    state.residuals_[user] += delta;
    state.seed_queue();
    state.drain();
    return state;
}

std::vector<std::size_t> ranked_order(std::span<const double> values,
                                      std::span<const NodeId> ids, double tie_tol) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (values[a] != values[b]) return values[a] > values[b];
        return ids[a] < ids[b];
    });
    if (tie_tol <= 0.0) return order;
    std::size_t start = 0;
    for (std::size_t i = 1; i <= order.size(); ++i) {
        if (i == order.size() || values[order[i - 1]] - values[order[i]] > tie_tol) {
            std::sort(order.begin() + start, order.begin() + i,
                      [&](std::size_t a, std::size_t b) { return ids[a] < ids[b]; });
            start = i;
        }
    }
    return order;
}

std::vector<ScoredItem> rank_items(const HinGraph& g, const PprEstimate& forward, NodeId user,
                                   std::size_t k, double tie_tol) {
    std::vector<NodeId> ids;
    std::vector<double> values;
    for (NodeId i : g.items()) {
        if (i == user || g.has_edge(user, i)) continue;
        ids.push_back(i);
        values.push_back(forward.scores[i]);
    }
    auto order = ranked_order(values, ids, tie_tol);
    std::vector<ScoredItem> out;
    for (std::size_t j = 0; j < order.size() && out.size() < k; ++j) {
        out.push_back({ids[order[j]], values[order[j]]});
    }
    return out;
}

std::vector<ScoredItem> top_k_items(const TransitionView& view, NodeId user, std::size_t k,
                                    double alpha, double tie_tol, double tol) {
    const HinGraph& g = view.graph();
    if (user >= g.node_count() || !g.is_user(user)) {
        throw Error(ErrorCode::NotAUser, "node " + std::to_string(user) + " is not a user");
    }
    if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
    return rank_items(g, ppr_power(view, user, alpha, tol), user, k, tie_tol);
}

}  // namespace prince
