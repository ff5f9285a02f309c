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


#include "prince/transition.hpp"

#include <cmath>
#include <string>

#include "prince/error.hpp"

namespace prince {

void SimilaritySpec::set_row(NodeId v, std::vector<Transition> row) {
    std::sort(row.begin(), row.end(),
              [](const Transition& a, const Transition& b) { return a.node < b.node; });
    rows_[v] = std::move(row);
}

const std::vector<Transition>* SimilaritySpec::row(NodeId v) const {
    auto it = rows_.find(v);
    return it == rows_.end() ? nullptr : &it->second;
}

void SimilaritySpec::validate(const HinGraph& g) const {
    for (const auto& [v, row] : rows_) {
        if (v >= g.node_count()) {
            throw Error(ErrorCode::InvalidArgument,
                        "similarity row for unknown node " + std::to_string(v));
        }
        double sum = 0.0;
        for (const auto& t : row) {
            if (t.node >= g.node_count() || !(t.prob >= 0.0)) {
                throw Error(ErrorCode::InvalidArgument,
                            "invalid similarity entry in row " + std::to_string(v));
            }
            if (g.node_type(t.node) != g.node_type(v)) {
                throw Error(ErrorCode::InvalidArgument,
                            "similarity row " + std::to_string(v) + " crosses node types");
            }
            sum += t.prob;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            throw Error(ErrorCode::NonStochasticSimilarity,
                        "similarity row " + std::to_string(v) + " sums to " +
                            std::to_string(sum));
        }
    }
}

namespace {

void merge_sorted(std::vector<Transition>& row) {
    std::sort(row.begin(), row.end(),
              [](const Transition& a, const Transition& b) { return a.node < b.node; });
    std::size_t out = 0;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (out > 0 && row[out - 1].node == row[i].node) {
            row[out - 1].prob += row[i].prob;
        } else {
            row[out++] = row[i];
        }
    }
    row.resize(out);
    std::erase_if(row, [](const Transition& t) { return t.prob == 0.0; });
}

// Effective row of v; `removed` (sorted) is only consulted when non-empty.
std::vector<Transition> build_row(const detail::Operator& op, NodeId v,
                                  std::span<const NodeId> removed) {
    const HinGraph& g = *op.graph;
    const double beta = op.beta;
    std::vector<Transition> row;
    auto is_removed = [&](NodeId t) {
        return !removed.empty() && std::binary_search(removed.begin(), removed.end(), t);
    };

    double total = 0.0;
    for (const auto& e : g.out_edges(v)) {
        if (!is_removed(e.target)) total += e.weight;
    }
    if (beta > 0.0) {
        if (total > 0.0) {
            for (const auto& e : g.out_edges(v)) {
                if (!is_removed(e.target)) row.push_back({e.target, beta * (e.weight / total)});
            }
        } else {
            row.push_back({op.anchor.value_or(v), beta});
        }
    }
    if (beta < 1.0) {
        if (const auto* s = op.similarity.row(v)) {
            for (const auto& t : *s) row.push_back({t.node, (1.0 - beta) * t.prob});
        } else {
            row.push_back({v, 1.0 - beta});
        }
    }
    merge_sorted(row);
    return row;
}

}  // namespace

const HinGraph& TransitionView::graph() const noexcept { return *base_->graph; }
double TransitionView::beta() const noexcept { return base_->beta; }
std::optional<NodeId> TransitionView::anchor() const noexcept { return base_->anchor; }
std::size_t TransitionView::node_count() const noexcept { return base_->row_offsets.size() - 1; }

std::span<const Transition> TransitionView::base_row(NodeId v) const {
    const auto& op = *base_;
    return {op.rows.data() + op.row_offsets[v], op.rows.data() + op.row_offsets[v + 1]};
}

std::span<const Transition> TransitionView::base_column(NodeId v) const {
    const auto& op = *base_;
    return {op.cols.data() + op.col_offsets[v], op.cols.data() + op.col_offsets[v + 1]};
}

std::span<const Transition> TransitionView::row(NodeId v) const {
    if (override_ && override_->user == v) return override_->row;
    return base_row(v);
}

double TransitionView::prob(NodeId from, NodeId to) const {
    auto r = row(from);
    auto it = std::lower_bound(r.begin(), r.end(), to,
                               [](const Transition& t, NodeId n) { return t.node < n; });
    return (it != r.end() && it->node == to) ? it->prob : 0.0;
}

std::optional<NodeId> TransitionView::modified_user() const noexcept {
    if (!override_) return std::nullopt;
    return override_->user;
}

std::span<const NodeId> TransitionView::removed_targets() const noexcept {
    if (!override_) return {};
    return override_->removed;
}

TransitionView make_transition_view(const HinGraph& g, double beta,
                                    const SimilaritySpec& similarity,
                                    std::optional<NodeId> anchor) {
    if (!(beta >= 0.0 && beta <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "beta must be in [0, 1]");
    }
    if (anchor && *anchor >= g.node_count()) {
        throw Error(ErrorCode::InvalidArgument, "anchor node out of range");
    }
    similarity.validate(g);

    auto op = std::make_shared<detail::Operator>();
    op->graph = &g;
    op->beta = beta;
    op->anchor = anchor;
    op->similarity = similarity;

    const std::size_t n = g.node_count();
    op->row_offsets.assign(n + 1, 0);
    op->rows.reserve(g.edge_count() + n);
    for (NodeId v = 0; v < n; ++v) {
        auto row = build_row(*op, v, {});
        op->rows.insert(op->rows.end(), row.begin(), row.end());
        op->row_offsets[v + 1] = op->rows.size();
    }

    op->col_offsets.assign(n + 1, 0);
    for (const auto& t : op->rows) ++op->col_offsets[t.node + 1];
    for (std::size_t i = 0; i < n; ++i) op->col_offsets[i + 1] += op->col_offsets[i];
    op->cols.resize(op->rows.size());
    std::vector<std::size_t> cursor(op->col_offsets.begin(), op->col_offsets.end() - 1);
    for (NodeId v = 0; v < n; ++v) {
        for (std::size_t i = op->row_offsets[v]; i < op->row_offsets[v + 1]; ++i) {
            const auto& t = op->rows[i];
            op->cols[cursor[t.node]++] = {v, t.prob};
        }
    }

    TransitionView view;
    view.base_ = std::move(op);
    return view;
}

TransitionView remove_actions_view(const TransitionView& tv, NodeId user,
                                   std::span<const NodeId> removed) {
    const HinGraph& g = tv.graph();
    if (user >= g.node_count()) {
        throw Error(ErrorCode::InvalidArgument, "user out of range");
    }
    if (tv.override_ && tv.override_->user != user) {
        throw Error(ErrorCode::InvalidArgument,
                    "view already removes actions of another user");
    }
    for (NodeId t : removed) {
        if (t == user || t >= g.node_count() || !g.has_edge(user, t)) {
            throw Error(ErrorCode::NotAnAction, "node " + std::to_string(t) +
                                                    " is not an action target of user " +
                                                    std::to_string(user));
        }
    }
    if (removed.empty()) return tv;

    auto ov = std::make_shared<detail::RowOverride>();
    ov->user = user;
    ov->removed.assign(removed.begin(), removed.end());
    if (tv.override_) {
        ov->removed.insert(ov->removed.end(), tv.override_->removed.begin(),
                           tv.override_->removed.end());
    }
    std::sort(ov->removed.begin(), ov->removed.end());
    ov->removed.erase(std::unique(ov->removed.begin(), ov->removed.end()), ov->removed.end());
    ov->row = build_row(*tv.base_, user, ov->removed);

    TransitionView out;
    out.base_ = tv.base_;
    out.override_ = std::move(ov);
    return out;
}

}  // namespace prince
