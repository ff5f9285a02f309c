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

#include "prince/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "prince/error.hpp"

namespace prince {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == '\t' || line[i] == ' ')) ++i;
        if (i == line.size()) break;
        std::size_t j = i;
        while (j < line.size() && line[j] != '\t' && line[j] != ' ') ++j;
        out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && ptr == end;
}

}  // namespace

HinGraph parse_graph(std::istream& in) {
    std::map<std::uint64_t, NodeType> types;
    std::vector<EdgeDecl> edges;
    std::string line;
    std::size_t line_no = 0;

    auto declare = [&](std::uint64_t id, std::string_view name) {
        NodeType t = NodeType::parse(name);
        auto [it, fresh] = types.emplace(id, t);
        if (!fresh && it->second != t) {
            throw Error(ErrorCode::TypeConflict,
                        "line " + std::to_string(line_no) + ": node " + std::to_string(id) +
                            " declared as " + std::string(it->second.name()) + " and " +
                            std::string(name));
        }
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto fields = split_fields(line);
        if (fields.empty() || fields[0].front() == '#') continue;
        if (fields.size() != 6) {
            throw ParseError(line_no, "expected 6 fields, got " + std::to_string(fields.size()));
        }
        std::uint64_t src = 0;
        std::uint64_t dst = 0;
        double weight = 0.0;
        if (!parse_number(fields[0], src)) {
            throw ParseError(line_no, "bad source id '" + std::string(fields[0]) + "'");
        }
        if (!parse_number(fields[1], dst)) {
            throw ParseError(line_no, "bad target id '" + std::string(fields[1]) + "'");
        }
        if (!parse_number(fields[5], weight) || !std::isfinite(weight)) {
            throw ParseError(line_no, "bad weight '" + std::string(fields[5]) + "'");
        }
        if (weight < 0.0) {
            throw Error(ErrorCode::NegativeWeight,
                        "line " + std::to_string(line_no) + ": negative weight");
        }
        declare(src, fields[2]);
        declare(dst, fields[3]);
        edges.push_back({src, dst, EdgeType::parse(fields[4]), weight});
    }
    if (in.bad()) throw Error(ErrorCode::Io, "read error");

    std::vector<NodeDecl> nodes;
    nodes.reserve(types.size());
    for (const auto& [id, t] : types) nodes.push_back({id, t});
    return build_graph(nodes, edges);
}

HinGraph load_graph(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    return parse_graph(in);
}

void write_graph(const HinGraph& g, std::ostream& out) {
    out << "# src_id\tdst_id\tsrc_type\tdst_type\tedge_type\tweight\n";
    char buf[64];
    for (NodeId v = 0; v < g.node_count(); ++v) {
        for (const auto& e : g.out_edges(v)) {
            auto [end, ec] = std::to_chars(buf, buf + sizeof buf, e.weight);
            out << g.external_id(v) << '\t' << g.external_id(e.target) << '\t'
                << g.node_type(v).name() << '\t' << g.node_type(e.target).name() << '\t'
                << e.type.name() << '\t' << std::string_view(buf, end - buf) << '\n';
        }
    }
}

void save_graph(const HinGraph& g, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    write_graph(g, out);
    if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

std::string graph_stats(const HinGraph& g) {
    std::ostringstream os;
    os << "nodes: " << g.node_count() << '\n' << "edges: " << g.edge_count() << '\n';
    for (const auto& [name, n] : g.node_type_counts()) os << "nodes." << name << ": " << n << '\n';
    for (const auto& [name, n] : g.edge_type_counts()) os << "edges." << name << ": " << n << '\n';
    return os.str();
}

void write_stats(const HinGraph& g, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out << graph_stats(g);
}

namespace {

// Platform-independent draws on top of the fully specified mt19937_64 stream.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::size_t below(std::size_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return static_cast<std::size_t>(x % n);
    }

    /// Weighted sample of `count` distinct indices (exponential-key method).
    std::vector<std::size_t> sample(const std::vector<double>& weights, std::size_t count) {
        std::vector<std::pair<double, std::size_t>> keys(weights.size());
        for (std::size_t i = 0; i < weights.size(); ++i) {
            const double u = std::max(uniform(), 0x1.0p-60);
            keys[i] = {weights[i] > 0.0 ? std::log(u) / weights[i] : -INFINITY, i};
        }
        count = std::min(count, keys.size());
        std::partial_sort(keys.begin(), keys.begin() + count, keys.end(),
                          [](const auto& a, const auto& b) {
                              return a.first != b.first ? a.first > b.first : a.second < b.second;
                          });
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < count; ++i) out.push_back(keys[i].second);
        return out;
    }

private:
    std::mt19937_64 engine_;
};

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

struct UserPlan {
    std::vector<std::size_t> rated;     // item indices
    std::size_t reviewed = 0;           // the first `reviewed` ratings carry a review
    std::vector<std::size_t> follows;   // user indices
};

bool allowed(NodeType::Kind s, NodeType::Kind d, EdgeType::Kind e) {
    using N = NodeType::Kind;
    using E = EdgeType::Kind;
    switch (e) {
        case E::Rated: return (s == N::User && d == N::Item) || (s == N::Item && d == N::User);
        case E::Reviewed:
            return (s == N::User && d == N::Review) || (s == N::Review && d == N::User);
        case E::HasReview:
            return (s == N::Item && d == N::Review) || (s == N::Review && d == N::Item);
        case E::BelongsTo:
            return (s == N::Item && d == N::Category) || (s == N::Category && d == N::Item);
        case E::Follows: return s == N::User && d == N::User;
        case E::Similarity: return s == N::Review && d == N::Review;
        default: return false;
    }
}

}  // namespace

HinGraph generate_synth(const SynthParams& p) {
    auto infeasible = [](const std::string& why) {
        throw Error(ErrorCode::InfeasibleParams, why);
    };
    if (p.n_users < 1 || p.n_items < 1 || p.n_categories < 1) {
        infeasible("users, items and categories must be at least 1");
    }
    if (p.n_categories > p.n_items) infeasible("more categories than items");
    if (p.min_actions < 1 || p.min_actions > p.max_actions || p.max_actions > p.n_items) {
        infeasible("action range must lie within [1, n_items]");
    }
    if (!(p.similarity_edge_rate >= 0.0)) infeasible("similarity_edge_rate must be >= 0");

    Rng rng(p.rng_seed);
    const std::size_t U = p.n_users;
    const std::size_t I = p.n_items;
    const std::size_t C = p.n_categories;

    // Item popularity is Zipf-like over a random permutation.
    std::vector<std::size_t> perm(I);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = I; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    std::vector<double> popularity(I);
    for (std::size_t r = 0; r < I; ++r) popularity[perm[r]] = 1.0 / std::pow(r + 1.0, 0.8);

    // Categories: every category gets one item, the rest follow a power law.
    std::vector<double> cat_cdf(C);
    double acc = 0.0;
    for (std::size_t c = 0; c < C; ++c) cat_cdf[c] = acc += 1.0 / (c + 1.0);
    std::vector<std::size_t> category(I);
    for (std::size_t i = 0; i < I; ++i) {
        if (i < C) {
            category[perm[I - 1 - i]] = i;  // least popular items seed the categories
            continue;
        }
        const double x = rng.uniform() * acc;
        category[perm[I - 1 - i]] =
            std::min<std::size_t>(std::upper_bound(cat_cdf.begin(), cat_cdf.end(), x) -
                                      cat_cdf.begin(),
                                  C - 1);
    }

    // Action budgets: stratified draws skewed toward the lower end of the range.
    std::vector<std::size_t> budget(U);
    {
        std::vector<std::size_t> strata(U);
        std::iota(strata.begin(), strata.end(), 0);
        for (std::size_t i = U; i > 1; --i) std::swap(strata[i - 1], strata[rng.below(i)]);
        const double span = static_cast<double>(p.max_actions - p.min_actions + 1);
        for (std::size_t u = 0; u < U; ++u) {
            const double q = (strata[u] + rng.uniform()) / static_cast<double>(U);
            budget[u] = std::min(p.max_actions,
                                 p.min_actions + static_cast<std::size_t>(span * std::pow(q, 1.3)));
        }
    }

    std::vector<UserPlan> plan(U);
    std::vector<std::size_t> review_cap(U);
    std::size_t total_cap = 0;
    for (std::size_t u = 0; u < U; ++u) {
        std::size_t follows = p.follows_enabled ? std::min(budget[u] / 5, U - 1) : 0;
        if (follows >= budget[u]) follows = budget[u] - 1;
        if (follows > 0) {
            std::vector<double> w(U, 1.0);
            w[u] = 0.0;
            plan[u].follows = rng.sample(w, follows);
            std::sort(plan[u].follows.begin(), plan[u].follows.end());
        }
        const std::size_t slots = budget[u] - follows;  // ratings + reviews
        review_cap[u] = (slots - 1) / 2;                 // keep one unreviewed rating
        total_cap += review_cap[u];
    }
    if (p.n_reviews > total_cap) {
        infeasible("n_reviews exceeds what the action budgets can hold (" +
                   std::to_string(total_cap) + ")");
    }

    std::vector<std::size_t> reviews(U, 0);
    std::size_t assigned = 0;
    for (std::size_t u = 0; u < U && total_cap > 0; ++u) {
        reviews[u] = p.n_reviews * review_cap[u] / total_cap;
        assigned += reviews[u];
    }
    for (std::size_t u = 0; assigned < p.n_reviews; u = (u + 1) % U) {
        if (reviews[u] < review_cap[u]) {
            ++reviews[u];
            ++assigned;
        }
    }

    for (std::size_t u = 0; u < U; ++u) {
        const std::size_t ratings = budget[u] - plan[u].follows.size() - reviews[u];
        plan[u].rated = rng.sample(popularity, ratings);
        plan[u].reviewed = reviews[u];
    }

    // Node layout: users, items, categories, reviews.
    const std::size_t item0 = U;
    const std::size_t cat0 = U + I;
    const std::size_t review0 = U + I + C;

    // Connectivity repair: swap an unreviewed rating so that every component
    // touches the main one. Budgets are unchanged.
    auto components = [&](UnionFind& uf) {
        for (std::size_t i = 0; i < I; ++i) uf.unite(item0 + i, cat0 + category[i]);
        for (std::size_t u = 0; u < U; ++u) {
            for (std::size_t i : plan[u].rated) uf.unite(u, item0 + i);
            for (std::size_t v : plan[u].follows) uf.unite(u, v);
        }
    };
    bool connected = false;
    for (std::size_t round = 0; round < 4 * (U + C) + 4; ++round) {
        UnionFind uf(review0);
        components(uf);
        std::map<std::size_t, std::size_t> sizes;
        for (std::size_t v = 0; v < review0; ++v) ++sizes[uf.find(v)];
        if (sizes.size() == 1) {
            connected = true;
            break;
        }
        std::size_t main = sizes.begin()->first;
        for (const auto& [root, n] : sizes) {
            if (n > sizes[main]) main = root;
        }
        std::size_t stray = 0;
        while (uf.find(stray) == main) ++stray;

        auto swap_last_unreviewed = [&](std::size_t u, std::size_t item) {
            auto& r = plan[u].rated;
            if (std::find(r.begin(), r.end(), item) != r.end()) return false;
            if (r.size() <= plan[u].reviewed) return false;
            r.back() = item;
            return true;
        };
        bool fixed = false;
        if (stray < U) {
            // A user outside the main component rates the most popular main item.
            for (std::size_t rnk = 0; rnk < I && !fixed; ++rnk) {
                if (uf.find(item0 + perm[rnk]) == main) fixed = swap_last_unreviewed(stray, perm[rnk]);
            }
        } else {
            // A category cluster nobody rated: the busiest main user rates one of its items.
            std::size_t item = 0;
            while (uf.find(item0 + item) != uf.find(stray)) ++item;
            std::vector<std::size_t> order(U);
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return plan[a].rated.size() - plan[a].reviewed >
                       plan[b].rated.size() - plan[b].reviewed;
            });
            for (std::size_t u : order) {
                if (uf.find(u) == main && plan[u].rated.size() > plan[u].reviewed + 1 &&
                    swap_last_unreviewed(u, item)) {
                    fixed = true;
                    break;
                }
            }
        }
        if (!fixed) break;
    }
    if (!connected) infeasible("could not make the generated graph connected");

    std::vector<NodeDecl> nodes;
    std::vector<EdgeDecl> edges;
    std::size_t next_review = review0;
    for (std::size_t u = 0; u < U; ++u) nodes.push_back({u, NodeType::Kind::User});
    for (std::size_t i = 0; i < I; ++i) nodes.push_back({item0 + i, NodeType::Kind::Item});
    for (std::size_t c = 0; c < C; ++c) nodes.push_back({cat0 + c, NodeType::Kind::Category});

    auto both = [&](std::uint64_t a, std::uint64_t b, EdgeType::Kind t, double w) {
        edges.push_back({a, b, t, w});
        edges.push_back({b, a, t, w});
    };
    for (std::size_t i = 0; i < I; ++i) {
        both(item0 + i, cat0 + category[i], EdgeType::Kind::BelongsTo, 1.0);
    }
    for (std::size_t u = 0; u < U; ++u) {
        const auto& pl = plan[u];
        for (std::size_t j = 0; j < pl.rated.size(); ++j) {
            const std::uint64_t item = item0 + pl.rated[j];
            both(u, item, EdgeType::Kind::Rated, 1.0);
            if (j < pl.reviewed) {
                const std::uint64_t review = next_review++;
                nodes.push_back({review, NodeType::Kind::Review});
                both(u, review, EdgeType::Kind::Reviewed, 1.0);
                both(item, review, EdgeType::Kind::HasReview, 1.0);
            }
        }
        for (std::size_t v : pl.follows) edges.push_back({u, v, EdgeType::Kind::Follows, 1.0});
    }

    const std::size_t R = next_review - review0;
    if (R >= 2) {
        const auto want = static_cast<std::size_t>(std::llround(p.similarity_edge_rate * R));
        const std::size_t max_pairs = R * (R - 1) / 2;
        std::set<std::pair<std::size_t, std::size_t>> pairs;
        while (pairs.size() < std::min(want, max_pairs)) {
            std::size_t a = rng.below(R);
            std::size_t b = rng.below(R);
            if (a == b) continue;
            if (a > b) std::swap(a, b);
            if (!pairs.insert({a, b}).second) continue;
            both(review0 + a, review0 + b, EdgeType::Kind::Similarity,
                 0.85 + 0.15 * rng.uniform());
        }
    }

    std::map<std::uint64_t, NodeType::Kind> kind;
    for (const auto& n : nodes) kind[n.id] = n.type.kind();
    for (const auto& e : edges) {
        if (!allowed(kind[e.src], kind[e.dst], e.type.kind())) {
            throw Error(ErrorCode::InvalidArgument, "generator produced a schema violation");
        }
    }
    return build_graph(nodes, edges);
}

}  // namespace prince
