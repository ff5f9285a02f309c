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

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "prince/error.hpp"
#include "prince/oracle.hpp"
#include "prince/ppr.hpp"
#include "support.hpp"

using namespace prince;
using namespace prince::testing;

namespace {

constexpr double kAlpha = 0.15;
constexpr double kEps = 1e-8;

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST_CASE("single node with a self-loop keeps all mass") {
    const auto g = GraphBuilder{}.node(0, NK::User).node(1, NK::Item).edge(0, 0, EK::Follows).build();
    const auto tv = make_transition_view(g, 1.0);
    const auto p = ppr_power(tv, 0, kAlpha);
    CHECK(near(p[0], 1.0, 1e-12));
    CHECK(p[1] == 0.0);
}

TEST_CASE("two-node cycle matches the closed form") {
    const auto g = GraphBuilder{}.node(0, NK::User).node(1, NK::Item).both(0, 1, EK::Rated).build();
    const auto tv = make_transition_view(g, 1.0);
    const auto p = ppr_power(tv, 0, kAlpha);
    // PPR(u,u) = alpha / (1 - (1-alpha)^2) = 1 / (2 - alpha)
    CHECK(near(p[0], 1.0 / (2.0 - kAlpha), 1e-12));
    CHECK(near(p[0], 0.5405405405405405, 1e-12));
    CHECK(near(p[1], 0.4594594594594595, 1e-12));
    CHECK(p.direction == PprDirection::Forward);
    CHECK(p.method == PprMethod::PowerIteration);
}

TEST_CASE("power iteration agrees with a dense solve and sums to one") {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        const auto g = random_digraph(seed, 50, 0.08);
        const auto tv = make_transition_view(g, 0.5, {}, NodeId{0});
        const auto p = ppr_power(tv, 0, kAlpha);
        const auto d = dense_ppr(tv, 0, kAlpha);
        double l1 = 0.0;
        for (NodeId v = 0; v < g.node_count(); ++v) l1 += std::abs(p[v] - d[v]);
        CHECK(l1 <= 1e-11);
        CHECK(near(sum(p.scores), 1.0, 1e-12));
        CHECK(p[0] >= kAlpha);
    }
}

TEST_CASE("power iteration reports non-convergence") {
    const auto g = random_digraph(4, 30, 0.1);
    const auto tv = make_transition_view(g, 0.5);
    CHECK_THROWS_AS(ppr_power(tv, 0, kAlpha, 1e-12, 3), Error);
    CHECK_THROWS_AS(ppr_power(tv, 0, 1.0), Error);
}

TEST_CASE("forward recurrence holds node by node") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const auto g = random_hin(seed);
        const auto tv = make_transition_view(g, 0.5, {}, NodeId{0});
        const double tol = kDefaultPowerTol;
        const auto pu = ppr_power(tv, 0, kAlpha, tol);
        std::vector<PprEstimate> from;
        for (NodeId n = 0; n < g.node_count(); ++n) from.push_back(ppr_power(tv, n, kAlpha, tol));
        for (NodeId x = 0; x < g.node_count(); ++x) {
            double rhs = x == 0 ? kAlpha : 0.0;
            for (const auto& t : tv.row(0)) rhs += (1.0 - kAlpha) * t.prob * from[t.node][x];
            CHECK(near(pu[x], rhs, 10 * tol));
        }
    }
}

TEST_CASE("walk-sum partial sums increase towards PPR") {
    const auto g = random_digraph(11, 20, 0.2);
    const auto tv = make_transition_view(g, 0.5, {}, NodeId{0});
    const auto p = ppr_power(tv, 0, kAlpha);
    std::vector<double> walk(g.node_count(), 0.0);
    std::vector<double> partial(g.node_count(), 0.0);
    walk[0] = 1.0;
    double weight = kAlpha;
    for (int len = 0; len <= 50; ++len) {
        for (NodeId v = 0; v < g.node_count(); ++v) {
            const double next = partial[v] + weight * walk[v];
            CHECK(next >= partial[v]);
            CHECK(next <= p[v] + 1e-12);
            partial[v] = next;
        }
        std::vector<double> step(g.node_count(), 0.0);
        for (NodeId v = 0; v < g.node_count(); ++v) {
            for (const auto& t : tv.row(v)) step[t.node] += walk[v] * t.prob;
        }
        walk.swap(step);
        weight *= 1.0 - kAlpha;
    }
    const double tail = std::pow(1.0 - kAlpha, 51);
    for (NodeId v = 0; v < g.node_count(); ++v) CHECK(p[v] - partial[v] <= tail + 1e-12);
}

TEST_CASE("reverse push: unreachable sources and the teleport floor") {
    GraphBuilder b;
    b.node(0, NK::User).node(1, NK::Item).node(2, NK::Item);
    b.edge(0, 1, EK::Rated).edge(2, 2, EK::Other);
    const auto g = b.build();
    const auto tv = make_transition_view(g, 1.0);
    const auto s = ppr_reverse_push(tv, 1, kAlpha, kEps);
    CHECK(s.estimate(2) == 0.0);
    CHECK(s.estimate(1) >= kAlpha);
    CHECK(s.estimate(0) > 0.0);
    CHECK(s.max_abs_residual() < kEps);
    CHECK_THROWS_AS(ppr_reverse_push(tv, 1, kAlpha, 0.0), Error);
}

TEST_CASE("reverse push is within epsilon of power iteration for every source") {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        const auto g = random_digraph(seed, seed % 2 ? 100 : 50, 0.06);
        const auto tv = make_transition_view(g, 0.5, {}, NodeId{0});
        const NodeId target = static_cast<NodeId>(seed % g.node_count());
        const auto push = ppr_reverse_push(tv, target, kAlpha, kEps);
        CHECK(push.max_abs_residual() < kEps);
        double worst = 0.0;
        for (NodeId s = 0; s < g.node_count(); ++s) {
            const auto f = ppr_power(tv, s, kAlpha);
            worst = std::max(worst, std::abs(push.estimate(s) - f[target]));
        }
        CHECK(worst <= kEps);
        CHECK(push.estimate(target) >= kAlpha);
    }
}

TEST_CASE("push invariant holds after the self-loop fold") {
    const auto g = random_hin(21);
    const auto tv = make_transition_view(g, 0.5, {}, NodeId{0});
    const NodeId t = g.items()[0];
    const auto s = ppr_reverse_push(tv, t, kAlpha, 1e-6);
    for (NodeId v = 0; v < g.node_count(); ++v) {
        double rhs = (v == t ? kAlpha : 0.0) - s.estimate(v);
        for (const auto& e : tv.row(v)) rhs += (1.0 - kAlpha) * e.prob * s.estimate(e.node);
        CHECK(near(kAlpha * s.residual(v), rhs, 1e-14));
    }
}

TEST_CASE("dynamic update") {
    SUBCASE("empty removal leaves the state unchanged") {
        const auto g = random_hin(5);
        const auto tv = make_transition_view(g, 0.5, {}, NodeId{0});
        const auto s = ppr_reverse_push(tv, g.items()[0], kAlpha, kEps);
        const auto u = push_update_remove_actions(s, 0, {});
        CHECK(std::ranges::equal(u.estimates(), s.estimates()));
        CHECK(std::ranges::equal(u.residuals(), s.residuals()));
    }
    SUBCASE("cutting the only path drops the estimate to zero") {
        GraphBuilder b;
        b.node(0, NK::User).node(1, NK::Item).node(2, NK::Item).node(3, NK::Category);
        b.edge(0, 1, EK::Rated).edge(0, 2, EK::Rated).edge(1, 3, EK::BelongsTo);
        const auto g = b.build();
        const auto tv = make_transition_view(g, 1.0, {}, NodeId{0});
        const auto s = ppr_reverse_push(tv, 3, kAlpha, kEps);
        CHECK(s.estimate(0) > 0.1);
        const NodeId cut[] = {1};
        const auto u = push_update_remove_actions(s, 0, cut);
        CHECK(std::abs(u.estimate(0)) <= kEps);
    }
    SUBCASE("non-actions are rejected") {
        const auto g = random_hin(5);
        const auto tv = make_transition_view(g, 0.5, {}, NodeId{0});
        const auto s = ppr_reverse_push(tv, g.items()[0], kAlpha, kEps);
        const NodeId bad[] = {0};
        CHECK_THROWS_AS(push_update_remove_actions(s, 0, bad), Error);
    }
    SUBCASE("random removals agree with a fresh push within 2 epsilon") {
        std::mt19937_64 rng(7);
        for (std::uint64_t seed = 1; seed <= 30; ++seed) {
            const auto g = random_hin(seed);
            const auto tv = make_transition_view(g, 0.5, {}, NodeId{0});
            const auto actions = user_actions(g, 0).targets();
            std::vector<NodeId> removed;
            for (NodeId a : actions) {
                if (rng() % 2) removed.push_back(a);
            }
            const NodeId target = g.items()[rng() % g.items().size()];
            const auto updated =
                push_update_remove_actions(ppr_reverse_push(tv, target, kAlpha, kEps), 0, removed);
            const auto fresh =
                ppr_reverse_push(remove_actions_view(tv, 0, removed), target, kAlpha, kEps);
            CHECK(updated.max_abs_residual() < kEps);
            for (NodeId v = 0; v < g.node_count(); ++v) {
                CHECK(std::abs(updated.estimate(v) - fresh.estimate(v)) <= 2 * kEps);
            }
        }
    }
}

TEST_CASE("forward and reverse scores are dual") {
    const auto g = random_digraph(31, 60, 0.07);
    const auto tv = make_transition_view(g, 0.5, {}, NodeId{0});
    for (NodeId t : {NodeId{3}, NodeId{17}, NodeId{40}}) {
        const auto push = ppr_reverse_push(tv, t, kAlpha, kEps);
        for (NodeId s = 0; s < g.node_count(); s += 7) {
            CHECK(std::abs(ppr_power(tv, s, kAlpha)[t] - push.estimate(s)) <= kEps + 1e-12);
        }
    }
}

TEST_CASE("top_k_items") {
    SUBCASE("the only non-neighbor item") {
        GraphBuilder b;
        b.node(0, NK::User).node(1, NK::Item).node(2, NK::Item).node(3, NK::Category);
        b.both(0, 1, EK::Rated).both(1, 3, EK::BelongsTo).both(2, 3, EK::BelongsTo);
        const auto g = b.build();
        const auto top = top_k_items(make_transition_view(g, 0.5, {}, NodeId{0}), 0, 5, kAlpha);
        REQUIRE(top.size() == 1);
        CHECK(top[0].item == 2);
    }
    SUBCASE("rated items never appear and order matches a full sort") {
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const auto g = random_hin(seed);
            const auto tv = make_transition_view(g, 0.5, {}, NodeId{0});
            const auto top = top_k_items(tv, 0, 1000, kAlpha);
            const auto p = ppr_power(tv, 0, kAlpha);
            std::vector<NodeId> expect;
            for (NodeId i : g.items()) {
                if (!g.has_edge(0, i)) expect.push_back(i);
            }
            std::stable_sort(expect.begin(), expect.end(),
                             [&](NodeId a, NodeId b) { return p[a] > p[b]; });
            REQUIRE(top.size() == expect.size());
            for (std::size_t j = 0; j < top.size(); ++j) {
                CHECK(top[j].item == expect[j]);
                CHECK(!g.has_edge(0, top[j].item));
            }
            CHECK(top_k_items(tv, 0, 3, kAlpha).size() == std::min<std::size_t>(3, expect.size()));
        }
    }
    SUBCASE("ties go to the smaller id") {
        GraphBuilder b;
        b.node(0, NK::User).node(1, NK::Category).node(5, NK::Item).node(3, NK::Item);
        b.both(0, 1, EK::Other).both(1, 5, EK::BelongsTo).both(1, 3, EK::BelongsTo);
        const auto g = b.build();
        const auto top = top_k_items(make_transition_view(g, 0.5, {}, NodeId{0}), 0, 2, kAlpha,
                                     1e-10);
        REQUIRE(top.size() == 2);
        CHECK(g.external_id(top[0].item) == 3);
    }
    SUBCASE("errors") {
        const auto g = random_hin(2);
        const auto tv = make_transition_view(g, 0.5);
        CHECK_THROWS_AS(top_k_items(tv, g.items()[0], 3, kAlpha), Error);
        CHECK_THROWS_AS(top_k_items(tv, 0, 0, kAlpha), Error);
    }
}

TEST_CASE("ranked_order groups near ties by id") {
    const std::vector<double> v{0.5, 0.5 + 1e-12, 0.3, 0.7};
    const std::vector<NodeId> ids{9, 4, 1, 2};
    CHECK(ranked_order(v, ids, 1e-10) == std::vector<std::size_t>{3, 1, 0, 2});
    CHECK(ranked_order(v, ids, 0.0) == std::vector<std::size_t>{3, 1, 0, 2});
    const std::vector<NodeId> ids2{4, 9, 1, 2};
    CHECK(ranked_order(v, ids2, 1e-10) == std::vector<std::size_t>{3, 0, 1, 2});
}

TEST_CASE("exact_ppr is reference grade") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto g = random_hin(seed);
        const auto tv = make_transition_view(g, 0.5, {}, NodeId{0});
        const auto e = exact_ppr(tv, 0);
        const auto p = ppr_power(tv, 0, kAlpha, 1e-12);
        double l1 = 0.0;
        for (NodeId v = 0; v < g.node_count(); ++v) l1 += std::abs(e[v] - p[v]);
        CHECK(l1 <= 1e-11);
        CHECK(near(sum(e.scores), 1.0, 1e-12));
        CHECK(e[0] >= kAlpha);
    }
}
