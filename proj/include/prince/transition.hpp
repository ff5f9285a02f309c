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


#ifndef PRINCE_TRANSITION_HPP
#define PRINCE_TRANSITION_HPP

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "prince/graph.hpp"

namespace prince {

struct Transition {
    NodeId node;
    double prob;
};

/// Per-node rows of the S_t similarity blocks. Nodes without a row use the
/// identity (their (1 - beta) mass stays on themselves).
class SimilaritySpec {
public:
    void set_row(NodeId v, std::vector<Transition> row);
    const std::vector<Transition>* row(NodeId v) const;
    bool empty() const noexcept { return rows_.empty(); }

    /// Throws NonStochasticSimilarity / InvalidArgument.
    void validate(const HinGraph& g) const;

private:
    std::map<NodeId, std::vector<Transition>> rows_;
};

namespace detail {
struct Operator;
struct RowOverride;
}  // namespace detail

/**
 * Row-stochastic operator W^beta = beta W + (1 - beta) S over a HinGraph.
 *
 * W is the per-row weight normalization of the graph's out-edges. A node
 * whose W row is empty sends its beta mass to the anchor node when one is
 * set, otherwise to itself. Views are cheap to copy; a view with removed
 * actions shares the base operator and overrides a single row.
 */
class TransitionView {
public:
    const HinGraph& graph() const noexcept;
    double beta() const noexcept;
    std::optional<NodeId> anchor() const noexcept;
    std::size_t node_count() const noexcept;

    /// Effective row of v, ascending by target, zero entries omitted.
    std::span<const Transition> row(NodeId v) const;
    double prob(NodeId from, NodeId to) const;

    /// Calls f(source, prob) for every nonzero entry in column v.
    template <class F>
    void for_each_in(NodeId v, F&& f) const;

    /// The user whose actions are removed in this view, if any.
    std::optional<NodeId> modified_user() const noexcept;
    std::span<const NodeId> removed_targets() const noexcept;

private:
    friend TransitionView make_transition_view(const HinGraph&, double, const SimilaritySpec&,
                                               std::optional<NodeId>);
    friend TransitionView remove_actions_view(const TransitionView&, NodeId,
                                              std::span<const NodeId>);

    std::span<const Transition> base_row(NodeId v) const;
    std::span<const Transition> base_column(NodeId v) const;

    std::shared_ptr<const detail::Operator> base_;
    std::shared_ptr<const detail::RowOverride> override_;
};

TransitionView make_transition_view(const HinGraph& g, double beta,
                                    const SimilaritySpec& similarity = {},
                                    std::optional<NodeId> anchor = std::nullopt);

/// Drops the user's edges to `removed` and renormalizes the surviving
/// out-weights. Throws NotAnAction. Removing from an already-modified view
/// accumulates for the same user.
TransitionView remove_actions_view(const TransitionView& tv, NodeId user,
                                   std::span<const NodeId> removed);

namespace detail {

struct Operator {
    const HinGraph* graph = nullptr;
    double beta = 1.0;
    std::optional<NodeId> anchor;
    SimilaritySpec similarity;
    std::vector<std::size_t> row_offsets;
    std::vector<Transition> rows;
    // Column storage: entry.node is the source.
    std::vector<std::size_t> col_offsets;
    std::vector<Transition> cols;
};

struct RowOverride {
    NodeId user;
    std::vector<NodeId> removed;  // sorted
    std::vector<Transition> row;  // sorted by node
};

}  // namespace detail

template <class F>
void TransitionView::for_each_in(NodeId v, F&& f) const {
    if (!override_) {
        for (const auto& t : base_column(v)) f(t.node, t.prob);
        return;
    }
    const NodeId u = override_->user;
    for (const auto& t : base_column(v)) {
        if (t.node != u) f(t.node, t.prob);
    }
    const auto& r = override_->row;
    auto it = std::lower_bound(r.begin(), r.end(), v,
                               [](const Transition& t, NodeId n) { return t.node < n; });
    if (it != r.end() && it->node == v) f(u, it->prob);
}

}  // namespace prince

#endif  // PRINCE_TRANSITION_HPP
