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

#include "prince/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "prince/error.hpp"

namespace prince {

PprEstimate exact_ppr(const TransitionView& view, NodeId seed, double alpha, double tol) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "alpha must be in (0, 1)");
    }
    if (seed >= view.node_count()) {
        throw Error(ErrorCode::UnknownNode, "node " + std::to_string(seed) + " out of range");
    }
    const std::size_t n = view.node_count();
    std::vector<long double> x(n, 0.0L);
    std::vector<long double> y(n, 0.0L);
    x[seed] = 1.0L;
    const long double a = alpha;
    const long double stop = static_cast<long double>(tol) * a / (1.0L - a);
    constexpr std::size_t kMaxIters = 1'000'000;
    for (std::size_t iter = 1; iter <= kMaxIters; ++iter) {
        std::fill(y.begin(), y.end(), 0.0L);
        y[seed] = a;
        for (NodeId v = 0; v < n; ++v) {
            if (x[v] == 0.0L) continue;
            const long double carry = (1.0L - a) * x[v];
            for (const auto& t : view.row(v)) y[t.node] += carry * t.prob;
        }
        long double change = 0.0L;
        for (std::size_t i = 0; i < n; ++i) change += std::fabs(y[i] - x[i]);
        x.swap(y);
        if (change <= stop) {
            return {std::vector<double>(x.begin(), x.end()), seed, PprDirection::Forward,
                    PprMethod::PowerIteration, 0.0, iter};
        }
    }
    throw Error(ErrorCode::NoConvergence, "exact PPR did not converge");
}

Explanation brute_force_explain(const HinGraph& g, NodeId user, const ExplainConfig& cfg,
                                std::size_t max_actions) {
    const UserContext ctx = make_user_context(g, user, cfg);
    const std::size_t m = ctx.actions.size();
    if (m == 0) {
        throw Error(ErrorCode::NoActions, "user " + std::to_string(user) + " has no actions");
    }
    if (m > max_actions) {
        throw Error(ErrorCode::TooManyActions, "user " + std::to_string(user) + " has " +
                                                   std::to_string(m) + " actions, limit is " +
                                                   std::to_string(max_actions));
    }
    const std::size_t k = cfg.scan_all_items ? g.node_count() : cfg.k;
    const auto ranking = rank_items(g, exact_ppr(ctx.view, user, cfg.alpha), user, k, cfg.tie_tol);
    if (ranking.size() < 2) {
        throw Error(ErrorCode::NoEligibleItems,
                    "no replacement candidates for user " + std::to_string(user));
    }

    Explanation ex;
    ex.user = user;
    ex.original_rec = ranking.front().item;
    ex.method = Method::Oracle;
    ex.action_count = m;
    std::vector<NodeId> ids;
    for (const auto& s : ranking) ids.push_back(s.item);
    const NodeId rec = ex.original_rec;

    const std::vector<NodeId> targets = ctx.actions.targets();
    std::vector<double> values(ids.size());
    for (std::size_t size = 1; size <= m; ++size) {
        std::vector<std::size_t> pick(size);
        std::iota(pick.begin(), pick.end(), 0);
        while (true) {
            std::vector<NodeId> subset;
            for (std::size_t i : pick) subset.push_back(targets[i]);
            const PprEstimate f = exact_ppr(ctx.without(subset), user, cfg.alpha);
            for (std::size_t i = 0; i < ids.size(); ++i) values[i] = f[ids[i]];
            const std::size_t top = ranked_order(values, ids, cfg.tie_tol).front();
            if (ids[top] != rec && values[top] > f[rec] + cfg.tie_tol) {
                ex.status = ExplanationStatus::Found;
                ex.replacement = ids[top];
                ex.verified = true;
                for (std::size_t i : pick) ex.actions.push_back(ctx.actions.actions[i]);
                return ex;
            }
            // Next combination in lexicographic order.
            std::size_t i = size;
            while (i > 0 && pick[i - 1] == m - size + i - 1) --i;
            if (i == 0) break;
            ++pick[i - 1];
            for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
        }
    }
    ex.status = ExplanationStatus::NoCounterfactual;
    return ex;
}

}  // namespace prince
