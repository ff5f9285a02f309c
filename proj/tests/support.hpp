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

// Shared fixtures for the test binaries: small hand-built HINs, random HIN
// generators and a dense linear-solve PPR reference.
#ifndef PRINCE_TESTS_SUPPORT_HPP
#define PRINCE_TESTS_SUPPORT_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "prince/explain.hpp"
#include "prince/graph.hpp"
#include "prince/transition.hpp"

namespace prince::testing {

using NK = NodeType::Kind;
using EK = EdgeType::Kind;

// Incremental builder keyed by external id.
struct GraphBuilder {
    std::vector<NodeDecl> nodes;
    std::vector<EdgeDecl> edges;

    GraphBuilder& node(std::uint64_t id, NodeType t) {
        nodes.push_back({id, std::move(t)});
        return *this;
    }
    GraphBuilder& edge(std::uint64_t a, std::uint64_t b, EdgeType t, double w = 1.0) {
        edges.push_back({a, b, std::move(t), w});
        return *this;
    }
    GraphBuilder& both(std::uint64_t a, std::uint64_t b, EdgeType t, double w = 1.0) {
        edge(a, b, t, w);
        return edge(b, a, t, w);
    }
    HinGraph build() const { return build_graph(nodes, edges); }
};

// PPR(seed, .) from (I - (1-alpha) P)^T x = alpha e_seed with a dense LU solve.
inline std::vector<double> dense_ppr(const TransitionView& view, NodeId seed, double alpha) {
    const auto n = static_cast<Eigen::Index>(view.node_count());
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
    for (NodeId v = 0; v < n; ++v) {
        for (const auto& t : view.row(v)) m(t.node, v) -= (1.0 - alpha) * t.prob;
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(seed) = alpha;
    Eigen::VectorXd x = m.partialPivLu().solve(rhs);
    return {x.data(), x.data() + n};
}

struct RandomHinOptions {
    std::size_t max_nodes = 40;
    std::size_t min_actions = 2;
    std::size_t max_actions = 12;
    bool unit_weights = false;
};

// Review-site shaped HIN whose seed user has external id 0 (NodeId 0).
// Other users, categories, reviews and follows are drawn at random.
inline HinGraph random_hin(std::uint64_t seed, const RandomHinOptions& o = {}) {
    std::mt19937_64 rng(seed);
    auto pick = [&](std::size_t lo, std::size_t hi) {
        return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
    };
    auto weight = [&] {
        return o.unit_weights ? 1.0 : 0.5 + static_cast<double>(rng() % 1000) / 666.0;
    };

    const std::size_t others = pick(1, 4);
    const std::size_t items = pick(std::max<std::size_t>(o.max_actions / 2, 6), 16);
    const std::size_t cats = pick(1, 4);
    GraphBuilder b;
    std::uint64_t next = 0;
    const std::uint64_t user0 = next++;
    b.node(user0, NK::User);
    std::vector<std::uint64_t> users{user0};
    for (std::size_t i = 0; i < others; ++i) {
        users.push_back(next);
        b.node(next++, NK::User);
    }
    std::vector<std::uint64_t> item_ids;
    for (std::size_t i = 0; i < items; ++i) {
        item_ids.push_back(next);
        b.node(next++, NK::Item);
    }
    std::vector<std::uint64_t> cat_ids;
    for (std::size_t i = 0; i < cats; ++i) {
        cat_ids.push_back(next);
        b.node(next++, NK::Category);
    }
    for (auto i : item_ids) b.both(i, cat_ids[rng() % cats], EK::BelongsTo, weight());

    std::set<std::pair<std::uint64_t, std::uint64_t>> used;
    auto rate = [&](std::uint64_t u, std::uint64_t i) {
        if (!used.insert({u, i}).second) return false;
        b.both(u, i, EK::Rated, weight());
        return true;
    };
    auto review = [&](std::uint64_t u, std::uint64_t i) {
        const std::uint64_t r = next++;
        b.node(r, NK::Review);
        b.both(u, r, EK::Reviewed, weight());
        b.both(i, r, EK::HasReview, weight());
    };
    auto budget_left = [&] { return next < o.max_nodes; };

    // Seed user: ratings, some reviews on rated items, maybe follows.
    const std::size_t want = pick(o.min_actions, o.max_actions);
    std::size_t actions = 0;
    std::vector<std::uint64_t> rated;
    const std::size_t max_ratings = std::min(want, items - 3);
    while (rated.size() < std::max<std::size_t>(1, max_ratings * 2 / 3) && actions < want) {
        const auto i = item_ids[rng() % items];
        if (rate(user0, i)) {
            rated.push_back(i);
            ++actions;
        }
    }
    for (std::size_t guard = 0; actions < want && guard < 1000; ++guard) {
        const auto kind = rng() % 3;
        if (kind == 0 && budget_left() && !rated.empty()) {
            review(user0, rated[rng() % rated.size()]);
            ++actions;
        } else if (kind == 1 && others > 0) {
            const auto v = users[1 + rng() % others];
            if (used.insert({user0, v}).second) {
                b.edge(user0, v, EK::Follows, weight());
                ++actions;
            }
        } else if (rated.size() < items - 3) {
            const auto i = item_ids[rng() % items];
            if (rate(user0, i)) {
                rated.push_back(i);
                ++actions;
            }
        }
    }
    // Other users.
    for (std::size_t k = 1; k < users.size(); ++k) {
        const std::size_t n = pick(1, 6);
        for (std::size_t j = 0; j < n; ++j) {
            const auto i = item_ids[rng() % items];
            if (rate(users[k], i) && budget_left() && rng() % 3 == 0) review(users[k], i);
        }
        if (rng() % 3 == 0) {
            const auto v = users[rng() % users.size()];
            if (v != users[k] && used.insert({users[k], v}).second) {
                b.edge(users[k], v, EK::Follows, weight());
            }
        }
    }
    return b.build();
}

// Arbitrary directed graph on n nodes (alternating user/item types) with
// some dangling nodes and self-loops.
inline HinGraph random_digraph(std::uint64_t seed, std::size_t n, double p) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    GraphBuilder b;
    for (std::size_t v = 0; v < n; ++v) b.node(v, v % 2 == 0 ? NK::User : NK::Item);
    for (std::size_t a = 0; a < n; ++a) {
        if (u01(rng) < 0.08) continue;  // dangling
        for (std::size_t c = 0; c < n; ++c) {
            if (u01(rng) < p) b.edge(a, c, a % 2 == 0 ? EK::Rated : EK::BelongsTo, 0.1 + u01(rng));
        }
    }
    return b.build();
}

inline bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace prince::testing

#endif  // PRINCE_TESTS_SUPPORT_HPP
