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


#include "prince/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <tuple>

#include "prince/error.hpp"

namespace prince {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::Io: return "Io";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::TypeConflict: return "TypeConflict";
        case ErrorCode::UnknownEndpoint: return "UnknownEndpoint";
        case ErrorCode::NegativeWeight: return "NegativeWeight";
        case ErrorCode::DuplicateEdge: return "DuplicateEdge";
        case ErrorCode::DuplicateNode: return "DuplicateNode";
        case ErrorCode::UnknownNode: return "UnknownNode";
        case ErrorCode::NonStochasticSimilarity: return "NonStochasticSimilarity";
        case ErrorCode::NotAnAction: return "NotAnAction";
        case ErrorCode::NotAUser: return "NotAUser";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::CandidateIsNeighbor: return "CandidateIsNeighbor";
        case ErrorCode::NoActions: return "NoActions";
        case ErrorCode::NoEligibleItems: return "NoEligibleItems";
        case ErrorCode::TooManyActions: return "TooManyActions";
        case ErrorCode::InfeasibleParams: return "InfeasibleParams";
    }
    return "Unknown";
}

namespace {

constexpr std::string_view kNodeNames[] = {"user", "item", "category", "review", "author"};
constexpr std::string_view kEdgeNames[] = {"rated",      "reviewed", "has-review", "belongs-to",
                                           "follows",    "has-author", "similarity"};

}  // namespace

NodeType NodeType::other(std::string label) {
    NodeType t;
    t.kind_ = Kind::Other;
    t.label_ = std::move(label);
    return t;
}

NodeType NodeType::parse(std::string_view name) {
    for (std::size_t i = 0; i < std::size(kNodeNames); ++i) {
        if (name == kNodeNames[i]) return NodeType(static_cast<Kind>(i));
    }
    return other(std::string(name));
}

std::string_view NodeType::name() const noexcept {
    if (kind_ == Kind::Other) return label_;
    return kNodeNames[static_cast<std::size_t>(kind_)];
}

EdgeType EdgeType::other(std::string label) {
    EdgeType t;
    t.kind_ = Kind::Other;
    t.label_ = std::move(label);
    return t;
}

EdgeType EdgeType::parse(std::string_view name) {
    for (std::size_t i = 0; i < std::size(kEdgeNames); ++i) {
        if (name == kEdgeNames[i]) return EdgeType(static_cast<Kind>(i));
    }
    return other(std::string(name));
}

std::string_view EdgeType::name() const noexcept {
    if (kind_ == Kind::Other) return label_;
    return kEdgeNames[static_cast<std::size_t>(kind_)];
}

std::optional<NodeId> HinGraph::find(std::uint64_t external) const {
    auto it = std::lower_bound(external_.begin(), external_.end(), external);
    if (it == external_.end() || *it != external) return std::nullopt;
    return static_cast<NodeId>(it - external_.begin());
}

NodeId HinGraph::node(std::uint64_t external) const {
    if (auto v = find(external)) return *v;
    throw Error(ErrorCode::UnknownNode, "unknown node id " + std::to_string(external));
}

std::span<const OutEdge> HinGraph::out_edges(NodeId v) const {
    return {out_edges_.data() + out_offsets_.at(v), out_edges_.data() + out_offsets_.at(v + 1)};
}

std::span<const InEdge> HinGraph::in_edges(NodeId v) const {
    return {in_edges_.data() + in_offsets_.at(v), in_edges_.data() + in_offsets_.at(v + 1)};
}

bool HinGraph::has_edge(NodeId src, NodeId dst) const {
    auto out = out_edges(src);
    auto it = std::lower_bound(out.begin(), out.end(), dst,
                               [](const OutEdge& e, NodeId n) { return e.target < n; });
    return it != out.end() && it->target == dst;
}

bool HinGraph::is_heterogeneous() const {
    std::set<NodeType> vt(types_.begin(), types_.end());
    std::set<EdgeType> et;
    for (const auto& e : out_edges_) et.insert(e.type);
    return vt.size() + et.size() > 2;
}

std::map<std::string, std::size_t> HinGraph::node_type_counts() const {
    std::map<std::string, std::size_t> counts;
    for (const auto& t : types_) ++counts[std::string(t.name())];
    return counts;
}

std::map<std::string, std::size_t> HinGraph::edge_type_counts() const {
    std::map<std::string, std::size_t> counts;
    for (const auto& e : out_edges_) ++counts[std::string(e.type.name())];
    return counts;
}

HinGraph build_graph(std::span<const NodeDecl> nodes, std::span<const EdgeDecl> edges) {
    HinGraph g;

    std::vector<std::size_t> order(nodes.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return nodes[a].id < nodes[b].id; });
    g.external_.reserve(nodes.size());
    g.types_.reserve(nodes.size());
    for (std::size_t i : order) {
        if (!g.external_.empty() && g.external_.back() == nodes[i].id) {
            throw Error(ErrorCode::DuplicateNode,
                        "node " + std::to_string(nodes[i].id) + " declared twice");
        }
        g.external_.push_back(nodes[i].id);
        g.types_.push_back(nodes[i].type);
    }
    const std::size_t n = g.external_.size();

    struct Resolved {
        NodeId src;
        NodeId dst;
        const EdgeDecl* decl;
    };
    std::vector<Resolved> resolved;
    resolved.reserve(edges.size());
    for (const auto& e : edges) {
        auto s = g.find(e.src);
        auto d = g.find(e.dst);
        if (!s || !d) {
            throw Error(ErrorCode::UnknownEndpoint,
                        "edge " + std::to_string(e.src) + " -> " + std::to_string(e.dst) +
                            " references undeclared node " + std::to_string(s ? e.dst : e.src));
        }
        if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) {
            throw Error(ErrorCode::NegativeWeight,
                        "edge " + std::to_string(e.src) + " -> " + std::to_string(e.dst) +
                            " has invalid weight " + std::to_string(e.weight));
        }
        resolved.push_back({*s, *d, &e});
    }
    std::sort(resolved.begin(), resolved.end(), [](const Resolved& a, const Resolved& b) {
        return std::tie(a.src, a.dst, a.decl->type) < std::tie(b.src, b.dst, b.decl->type);
    });
    for (std::size_t i = 1; i < resolved.size(); ++i) {
        const auto& a = resolved[i - 1];
        const auto& b = resolved[i];
        if (a.src == b.src && a.dst == b.dst && a.decl->type == b.decl->type) {
            throw Error(ErrorCode::DuplicateEdge,
                        "duplicate edge " + std::to_string(b.decl->src) + " -> " +
                            std::to_string(b.decl->dst) + " (" +
                            std::string(b.decl->type.name()) + ")");
        }
    }

    g.out_offsets_.assign(n + 1, 0);
    g.in_offsets_.assign(n + 1, 0);
    for (const auto& r : resolved) {
        ++g.out_offsets_[r.src + 1];
        ++g.in_offsets_[r.dst + 1];
    }
    std::partial_sum(g.out_offsets_.begin(), g.out_offsets_.end(), g.out_offsets_.begin());
    std::partial_sum(g.in_offsets_.begin(), g.in_offsets_.end(), g.in_offsets_.begin());

    g.out_edges_.reserve(resolved.size());
    for (const auto& r : resolved) g.out_edges_.push_back({r.dst, r.decl->type, r.decl->weight});

    // Scanning sources in ascending order keeps each in-list sorted by source.
    g.in_edges_.resize(resolved.size());
    std::vector<std::size_t> cursor(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
    for (const auto& r : resolved) {
        g.in_edges_[cursor[r.dst]++] = {r.src, r.decl->type, r.decl->weight};
    }

    for (NodeId v = 0; v < n; ++v) {
        if (g.types_[v].kind() == NodeType::Kind::Item) g.items_.push_back(v);
        if (g.types_[v].kind() == NodeType::Kind::User) g.users_.push_back(v);
    }
    return g;
}

std::vector<NodeId> ActionSet::targets() const {
    std::vector<NodeId> out;
    out.reserve(actions.size());
    for (const auto& a : actions) out.push_back(a.target);
    return out;
}

bool ActionSet::contains(NodeId target) const {
    auto it = std::lower_bound(actions.begin(), actions.end(), target,
                               [](const Action& a, NodeId t) { return a.target < t; });
    return it != actions.end() && it->target == target;
}

ActionSet user_actions(const HinGraph& g, NodeId user) {
    if (user >= g.node_count() || !g.is_user(user)) {
        throw Error(ErrorCode::NotAUser, "node " + std::to_string(user) + " is not a user");
    }
    ActionSet set{user, {}};
    for (const auto& e : g.out_edges(user)) {
        if (e.target == user) continue;
        if (!set.actions.empty() && set.actions.back().target == e.target) {
            set.actions.back().weight += e.weight;
            set.actions.back().types.push_back(e.type);
        } else {
            set.actions.push_back({e.target, e.weight, {e.type}});
        }
    }
    return set;
}

}  // namespace prince
