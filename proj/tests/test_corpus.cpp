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

#include <filesystem>
#include <map>
#include <queue>
#include <sstream>
#include <string>

#include "prince/corpus.hpp"
#include "prince/error.hpp"
#include "support.hpp"

using namespace prince;
using namespace prince::testing;

namespace {

HinGraph parse(const std::string& text) {
    std::istringstream in(text);
    return parse_graph(in);
}

template <class F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::InvalidArgument;
}

std::string dump(const HinGraph& g) {
    std::ostringstream os;
    write_graph(g, os);
    return os.str();
}

bool weakly_connected(const HinGraph& g) {
    std::vector<char> seen(g.node_count(), 0);
    std::queue<NodeId> q;
    q.push(0);
    seen[0] = 1;
    std::size_t reached = 1;
    while (!q.empty()) {
        const NodeId v = q.front();
        q.pop();
        auto visit = [&](NodeId w) {
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                q.push(w);
            }
        };
        for (const auto& e : g.out_edges(v)) visit(e.target);
        for (const auto& e : g.in_edges(v)) visit(e.source);
    }
    return reached == g.node_count();
}

}  // namespace

TEST_CASE("parse a small edge list") {
    const HinGraph g = parse(
        "# comment\n"
        "1\t10\tuser\titem\trated\t1\n"
        "10\t1\titem\tuser\trated\t1\n"
        "1 11 user item rated 0.5\n");
    CHECK(g.node_count() == 3);
    CHECK(g.users().size() == 1);
    CHECK(g.items().size() == 2);
    CHECK(g.edge_count() == 3);
    CHECK(g.out_edges(g.node(1))[1].weight == 0.5);
}

TEST_CASE("parse errors carry the line") {
    try {
        parse("1\t10\tuser\titem\trated\t1\n1\t11\tuser\titem\trated\tabc\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("abc") != std::string::npos);
    }
    CHECK(code_of([] { parse("1\t10\tuser\titem\trated\n"); }) == ErrorCode::ParseError);
    CHECK(code_of([] { parse("x\t10\tuser\titem\trated\t1\n"); }) == ErrorCode::ParseError);
    CHECK(code_of([] { parse("1\t10\tuser\titem\trated\t-1\n"); }) == ErrorCode::NegativeWeight);
    CHECK(code_of([] {
              parse("1\t10\tuser\titem\trated\t1\n10\t1\tcategory\tuser\trated\t1\n");
          }) == ErrorCode::TypeConflict);
    CHECK(code_of([] {
              parse("1\t10\tuser\titem\trated\t1\n1\t10\tuser\titem\trated\t2\n");
          }) == ErrorCode::DuplicateEdge);
    CHECK(code_of([] { load_graph("/nonexistent/graph.tsv"); }) == ErrorCode::Io);
}

TEST_CASE("save and load round-trip exactly") {
    SynthParams p;
    p.n_users = 12;
    p.n_items = 80;
    p.n_categories = 5;
    p.n_reviews = 40;
    p.min_actions = 5;
    p.max_actions = 20;
    p.follows_enabled = true;
    p.similarity_edge_rate = 0.2;
    const HinGraph g = generate_synth(p);
    const auto path = std::filesystem::temp_directory_path() / "prince_roundtrip.tsv";
    save_graph(g, path);
    const HinGraph back = load_graph(path);
    std::filesystem::remove(path);
    REQUIRE(back.node_count() == g.node_count());
    REQUIRE(back.edge_count() == g.edge_count());
    for (NodeId v = 0; v < g.node_count(); ++v) {
        CHECK(back.external_id(v) == g.external_id(v));
        CHECK(back.node_type(v) == g.node_type(v));
        const auto a = g.out_edges(v);
        const auto b = back.out_edges(v);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].target == b[i].target);
            CHECK(a[i].type == b[i].type);
            CHECK(a[i].weight == b[i].weight);
        }
    }
    CHECK(dump(back) == dump(g));
}

TEST_CASE("graph statistics") {
    const HinGraph g = parse(
        "1\t10\tuser\titem\trated\t1\n"
        "10\t1\titem\tuser\trated\t1\n"
        "10\t20\titem\tcategory\tbelongs-to\t1\n");
    const std::string s = graph_stats(g);
    CHECK(s.find("nodes: 3\n") != std::string::npos);
    CHECK(s.find("edges: 3\n") != std::string::npos);
    CHECK(s.find("nodes.item: 1\n") != std::string::npos);
    CHECK(s.find("edges.rated: 2\n") != std::string::npos);
}

TEST_CASE("generator is deterministic") {
    SynthParams p;
    p.n_users = 1;
    p.n_items = 2;
    p.n_categories = 1;
    p.n_reviews = 0;
    p.min_actions = 1;
    p.max_actions = 2;
    p.rng_seed = 7;
    const std::string a = dump(generate_synth(p));
    CHECK(a == dump(generate_synth(p)));

    SynthParams q;
    q.n_users = 20;
    q.n_items = 150;
    q.n_categories = 8;
    q.n_reviews = 60;
    q.rng_seed = 3;
    const std::string b = dump(generate_synth(q));
    CHECK(b == dump(generate_synth(q)));
    q.rng_seed = 4;
    CHECK(b != dump(generate_synth(q)));
}

TEST_CASE("generated graphs respect the schema and budgets") {
    for (bool follows : {false, true}) {
        SynthParams p;
        p.n_users = 40;
        p.n_items = 400;
        p.n_categories = 12;
        p.n_reviews = 300;
        p.follows_enabled = follows;
        p.similarity_edge_rate = 0.05;
        p.rng_seed = 11;
        const HinGraph g = generate_synth(p);
        CHECK(weakly_connected(g));
        CHECK(g.users().size() == p.n_users);
        CHECK(g.items().size() == p.n_items);

        std::map<std::string, std::size_t> nodes = g.node_type_counts();
        CHECK(nodes["category"] == p.n_categories);
        CHECK(nodes["review"] == p.n_reviews);

        for (NodeId u : g.users()) {
            const auto a = user_actions(g, u);
            CHECK(a.size() >= p.min_actions);
            CHECK(a.size() <= p.max_actions);
        }
        for (NodeId v = 0; v < g.node_count(); ++v) {
            for (const auto& e : g.out_edges(v)) {
                const auto s = g.node_type(v).kind();
                const auto d = g.node_type(e.target).kind();
                switch (e.type.kind()) {
                    case EK::Rated:
                        CHECK(((s == NK::User && d == NK::Item) || (s == NK::Item && d == NK::User)));
                        CHECK(g.has_edge(e.target, v));
                        break;
                    case EK::Follows:
                        CHECK((s == NK::User && d == NK::User));
                        break;
                    case EK::BelongsTo:
                        CHECK(((s == NK::Item && d == NK::Category) ||
                               (s == NK::Category && d == NK::Item)));
                        break;
                    case EK::Similarity:
                        CHECK((s == NK::Review && d == NK::Review));
                        CHECK(e.weight >= 0.85);
                        CHECK(e.weight < 1.0);
                        break;
                    default:
                        CHECK(g.has_edge(e.target, v));
                        break;
                }
            }
        }
        // Every item sits in exactly one category and every review hangs off
        // one user and one item.
        for (NodeId i : g.items()) {
            std::size_t cats = 0;
            for (const auto& e : g.out_edges(i)) cats += e.type.kind() == EK::BelongsTo;
            CHECK(cats == 1);
        }
        for (NodeId v = 0; v < g.node_count(); ++v) {
            if (g.node_type(v).kind() != NK::Review) continue;
            std::size_t by_user = 0;
            std::size_t on_item = 0;
            for (const auto& e : g.out_edges(v)) {
                by_user += e.type.kind() == EK::Reviewed;
                on_item += e.type.kind() == EK::HasReview;
            }
            CHECK(by_user == 1);
            CHECK(on_item == 1);
        }
    }
}

TEST_CASE("default corpus ratios are close to the large review sample") {
    // Sample: 2k users, 54k items, 58k reviews, 114k actions.
    const double actions_per_user = 114.0 / 2.0;
    const double reviews_per_action = 58.0 / 114.0;
    const double reviews_per_item = 58.0 / 54.0;

    const HinGraph g = generate_synth({});
    double actions = 0;
    for (NodeId u : g.users()) actions += static_cast<double>(user_actions(g, u).size());
    const double users = static_cast<double>(g.users().size());
    const double reviews = static_cast<double>(g.node_type_counts().at("review"));
    const double items = static_cast<double>(g.items().size());
    auto within = [](double got, double want) { return std::abs(got / want - 1.0) <= 0.2; };
    CHECK(within(actions / users, actions_per_user));
    CHECK(within(reviews / actions, reviews_per_action));
    CHECK(within(reviews / items, reviews_per_item));
    CHECK(g.node_type_counts().at("category") == 43);
}

TEST_CASE("infeasible generator parameters") {
    auto bad = [](auto edit) {
        SynthParams p;
        p.n_users = 5;
        p.n_items = 50;
        p.n_categories = 4;
        p.n_reviews = 10;
        p.min_actions = 5;
        p.max_actions = 10;
        edit(p);
        return code_of([&] { generate_synth(p); });
    };
    CHECK(bad([](SynthParams& p) { p.n_users = 0; }) == ErrorCode::InfeasibleParams);
    CHECK(bad([](SynthParams& p) { p.n_categories = 60; }) == ErrorCode::InfeasibleParams);
    CHECK(bad([](SynthParams& p) { p.min_actions = 11; }) == ErrorCode::InfeasibleParams);
    CHECK(bad([](SynthParams& p) { p.max_actions = 51; }) == ErrorCode::InfeasibleParams);
    CHECK(bad([](SynthParams& p) { p.n_reviews = 1000; }) == ErrorCode::InfeasibleParams);
}
