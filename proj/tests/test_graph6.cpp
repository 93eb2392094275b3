#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <string>

#include "costar/graph.hpp"
#include "costar/graph6.hpp"
#include "support/oracle.hpp"

using costar::BipartiteGraph;
using costar::Graph;

namespace {

bool same(const Graph& g, const oracle::Adj& a) {
    if (g.n() != a.n()) return false;
    for (int i = 0; i < g.n(); ++i)
        for (int j = i + 1; j < g.n(); ++j)
            if (g.has_edge(i, j) != a.at(i, j)) return false;
    return true;
}

}  // namespace

TEST_CASE("graph6 known values", "[graph6]") {
    // '@' is the 1-vertex graph
    Graph k1 = costar::parse_graph6("@");
    REQUIRE(k1.n() == 1);
    REQUIRE(k1.edge_count() == 0);

    // 'Bw' is the triangle
    Graph k3 = costar::parse_graph6("Bw");
    REQUIRE(k3.n() == 3);
    REQUIRE(k3.edge_count() == 3);

    // 'D?{' is the 4-leaf star with the centre last
    Graph star = costar::parse_graph6("D?{");
    REQUIRE(star.n() == 5);
    REQUIRE(star.edge_count() == 4);
    REQUIRE(star.degree(4) == 4);
    for (int v = 0; v < 4; ++v) REQUIRE(star.degree(v) == 1);
}

TEST_CASE("graph6 accepts the optional prefix and strips whitespace", "[graph6]") {
    Graph g = costar::parse_graph6(">>graph6<<Bw\n");
    REQUIRE(g.n() == 3);
    REQUIRE(g.edge_count() == 3);
}

TEST_CASE("graph6 round-trip matches an independent decoder", "[graph6]") {
    std::mt19937 rng(777);
    for (int trial = 0; trial < 60; ++trial) {
        int n = static_cast<int>(rng() % 12);
        Graph g(n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng() & 1) g.add_edge(i, j);
        std::string text = costar::to_graph6(g);
        REQUIRE(same(costar::parse_graph6(text), oracle::decode_graph6(text)));
        REQUIRE(same(g, oracle::decode_graph6(text)));
    }
}

TEST_CASE("graph6 long size form", "[graph6]") {
    Graph g(70);
    g.add_edge(0, 69);
    g.add_edge(31, 42);
    std::string text = costar::to_graph6(g);
    Graph back = costar::parse_graph6(text);
    REQUIRE(back.n() == 70);
    REQUIRE(back.has_edge(0, 69));
    REQUIRE(back.has_edge(31, 42));
    REQUIRE(back.edge_count() == 2);
    REQUIRE(same(back, oracle::decode_graph6(text)));
}

TEST_CASE("graph6 rejects malformed input", "[graph6]") {
    REQUIRE_THROWS_AS(costar::parse_graph6(""), costar::parse_error);
    REQUIRE_THROWS_AS(costar::parse_graph6("B"), costar::parse_error);      // truncated
    REQUIRE_THROWS_AS(costar::parse_graph6("B\x07"), costar::parse_error);  // bad byte
    REQUIRE_THROWS_AS(costar::parse_graph6("Bw!"), costar::parse_error);    // trailing data
    REQUIRE_THROWS_AS(costar::parse_graph6("Bw", 2), costar::size_error);   // cap exceeded

    try {
        costar::parse_graph6("Bw!");
        FAIL("expected parse_error");
    } catch (const costar::parse_error& e) {
        REQUIRE(e.offset == 2);
    }
}

TEST_CASE("bipartite text round-trip", "[graph6]") {
    BipartiteGraph b = BipartiteGraph::with_edges(3, 4, {{0, 0}, {1, 2}, {2, 3}});
    std::string text = costar::to_bipartite_text(b);
    BipartiteGraph back = costar::parse_bipartite(text);
    REQUIRE(back == b);
}

TEST_CASE("bipartite text parsing details", "[graph6]") {
    const char* text =
        "# leading comment\n"
        "bip 2 3\n"
        "\n"
        "0 1   # star\n"
        "1 2\n";
    BipartiteGraph b = costar::parse_bipartite(text);
    REQUIRE(b.a_size() == 2);
    REQUIRE(b.b_size() == 3);
    REQUIRE(b.has_edge(0, 1));
    REQUIRE(b.has_edge(1, 2));
    REQUIRE(b.edge_count() == 2);

    REQUIRE_THROWS_AS(costar::parse_bipartite("bip 2\n"), costar::parse_error);
    REQUIRE_THROWS_AS(costar::parse_bipartite("bip 2 2\n0 5\n"), costar::parse_error);
    REQUIRE_THROWS_AS(costar::parse_bipartite("bip 2 2\n0 1 7\n"), costar::parse_error);
    REQUIRE_THROWS_AS(costar::parse_bipartite("0 1\n"), costar::parse_error);
    REQUIRE_THROWS_AS(costar::parse_bipartite("bip 99 99\n", 10), costar::size_error);
}
