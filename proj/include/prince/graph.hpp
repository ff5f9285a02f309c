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


#ifndef PRINCE_GRAPH_HPP
#define PRINCE_GRAPH_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace prince {

using NodeId = std::uint32_t;

/// Node type of a heterogeneous information network. The named kinds cover
/// the review/social schemas; anything else is carried as `Other(label)`.
class NodeType {
public:
    enum class Kind : std::uint8_t { User, Item, Category, Review, Author, Other };

    NodeType() = default;
    NodeType(Kind kind) : kind_(kind) {}  // NOLINT(google-explicit-constructor)
    static NodeType other(std::string label);
    /// Accepts the canonical names ("user", "item", ...); unknown names become Other.
    static NodeType parse(std::string_view name);

    Kind kind() const noexcept { return kind_; }
    std::string_view name() const noexcept;

    friend bool operator==(const NodeType&, const NodeType&) = default;
    friend std::strong_ordering operator<=>(const NodeType&, const NodeType&) = default;

private:
    Kind kind_ = Kind::User;
    std::string label_;
};

class EdgeType {
public:
    enum class Kind : std::uint8_t {
        Rated,
        Reviewed,
        HasReview,
        BelongsTo,
        Follows,
        HasAuthor,
        Similarity,
        Other
    };

    EdgeType() = default;
    EdgeType(Kind kind) : kind_(kind) {}  // NOLINT(google-explicit-constructor)
    static EdgeType other(std::string label);
    static EdgeType parse(std::string_view name);

    Kind kind() const noexcept { return kind_; }
    std::string_view name() const noexcept;

    friend bool operator==(const EdgeType&, const EdgeType&) = default;
    friend std::strong_ordering operator<=>(const EdgeType&, const EdgeType&) = default;

private:
    Kind kind_ = Kind::Rated;
    std::string label_;
};

struct NodeDecl {
    std::uint64_t id;
    NodeType type;
};

struct EdgeDecl {
    std::uint64_t src;
    std::uint64_t dst;
    EdgeType type;
    double weight = 1.0;
};

struct OutEdge {
    NodeId target;
    EdgeType type;
    double weight;
};

struct InEdge {
    NodeId source;
    EdgeType type;
    double weight;
};

/**
 * Immutable typed, directed, weighted multigraph.
 *
 * Declared ids are densified in ascending order, so NodeId order matches
 * external id order. Adjacency lists are sorted by (neighbor, edge type) and
 * the in-lists mirror the out-lists exactly. At most one edge exists per
 * (src, dst, type) triple; parallel edges of different types are allowed.
 */
class HinGraph {
public:
    std::size_t node_count() const noexcept { return types_.size(); }
    std::size_t edge_count() const noexcept { return out_edges_.size(); }

    const NodeType& node_type(NodeId v) const { return types_.at(v); }
    std::uint64_t external_id(NodeId v) const { return external_.at(v); }
    std::optional<NodeId> find(std::uint64_t external) const;
    /// Like find() but throws UnknownNode.
    NodeId node(std::uint64_t external) const;

    std::span<const OutEdge> out_edges(NodeId v) const;
    std::span<const InEdge> in_edges(NodeId v) const;
    bool has_edge(NodeId src, NodeId dst) const;

    bool is_item(NodeId v) const { return types_.at(v).kind() == NodeType::Kind::Item; }
    bool is_user(NodeId v) const { return types_.at(v).kind() == NodeType::Kind::User; }
    std::span<const NodeId> items() const noexcept { return items_; }
    std::span<const NodeId> users() const noexcept { return users_; }

    /// |T_V| + |T_E| > 2.
    bool is_heterogeneous() const;

    std::map<std::string, std::size_t> node_type_counts() const;
    std::map<std::string, std::size_t> edge_type_counts() const;

private:
    friend HinGraph build_graph(std::span<const NodeDecl>, std::span<const EdgeDecl>);

    std::vector<NodeType> types_;
    std::vector<std::uint64_t> external_;
    std::vector<std::size_t> out_offsets_;
    std::vector<OutEdge> out_edges_;
    std::vector<std::size_t> in_offsets_;
    std::vector<InEdge> in_edges_;
    std::vector<NodeId> items_;
    std::vector<NodeId> users_;
};

/// Errors: UnknownEndpoint, NegativeWeight, DuplicateEdge, DuplicateNode.
HinGraph build_graph(std::span<const NodeDecl> nodes, std::span<const EdgeDecl> edges);

/// One action of a user: all of the user's edges to one target, merged.
struct Action {
    NodeId target;
    double weight;
    std::vector<EdgeType> types;
};

struct ActionSet {
    NodeId user;
    std::vector<Action> actions;  // ascending target

    std::size_t size() const noexcept { return actions.size(); }
    bool empty() const noexcept { return actions.empty(); }
    std::vector<NodeId> targets() const;
    bool contains(NodeId target) const;
};

/// Out-edges of `user` except a self-loop. Throws NotAUser.
ActionSet user_actions(const HinGraph& g, NodeId user);

}  // namespace prince

#endif  // PRINCE_GRAPH_HPP
