#include <catch2/catch_amalgamated.hpp>

#include "lopt/graphs.hpp"

using namespace lopt;

TEST_CASE("hypercube counts", "[graphs]") {
    GraphSpec spec;
    spec.kind = SubstrateKind::Hypercube;
    spec.dim = 4;
    const Graph g = build_graph(spec);
    CHECK(g.num_vertices() == 16);
    CHECK(g.num_edges() == 32);
    for (std::size_t v = 0; v < 16; ++v) CHECK(g.degree(v) == 4);
}

TEST_CASE("toroidal rectangle counts", "[graphs]") {
    GraphSpec spec;
    spec.kind = SubstrateKind::RectLattice;
    spec.width = 3;
    spec.height = 3;
    spec.toroidal = true;
    const Graph g = build_graph(spec);
    CHECK(g.num_vertices() == 9);
    CHECK(g.num_edges() == 18);
    for (std::size_t v = 0; v < 9; ++v) CHECK(g.degree(v) == 4);
}

TEST_CASE("open rectangle: boundary degrees and reduced Grover coins", "[graphs]") {
    GraphSpec spec;
    spec.kind = SubstrateKind::RectLattice;
    spec.width = 3;
    spec.height = 3;
    const Graph g = build_graph(spec);
    CHECK(g.num_edges() == 12);
    CHECK(g.degree(0) == 2);  // corner
    CHECK(g.degree(1) == 3);  // edge mid
    CHECK(g.degree(4) == 4);  // centre
    // corner gets the 2x2 Grover coin = swap
    CHECK(max_abs_diff(g.vertex(0).scatter, CMatrix{{0.0, 1.0}, {1.0, 0.0}}) == 0.0);
}

TEST_CASE("hex lattice: all degree 3", "[graphs]") {
    GraphSpec spec;
    spec.kind = SubstrateKind::HexLattice;
    spec.width = 4;
    spec.height = 3;
    const Graph g = build_graph(spec);
    CHECK(g.num_vertices() == 24);
    for (std::size_t v = 0; v < g.num_vertices(); ++v) CHECK(g.degree(v) == 3);
    CHECK(g.num_edges() == 36);  // 3 * V / 2
}

TEST_CASE("glued tree: counts, degrees, determinism", "[graphs]") {
    GraphSpec spec;
    spec.kind = SubstrateKind::GluedTree;
    spec.depth = 3;
    spec.seed = 7;
    const Graph g = build_graph(spec);
    CHECK(g.num_vertices() == 30);  // two 15-vertex binary trees
    CHECK(g.num_edges() == 44);     // 2*14 tree edges + 16 cycle edges

    std::size_t deg2 = 0, deg3 = 0;
    for (std::size_t v = 0; v < 30; ++v) {
        const std::size_t d = g.degree(v);
        CHECK((d == 2 || d == 3));
        (d == 2 ? deg2 : deg3)++;
    }
    CHECK(deg2 == 2);  // the two roots
    CHECK(deg3 == 28);

    // same seed -> identical adjacency; different seed -> same degree sequence
    const Graph g2 = build_graph(spec);
    for (std::size_t v = 0; v < 30; ++v) CHECK(g.vertex(v).ports == g2.vertex(v).ports);
    spec.seed = 8;
    const Graph g3 = build_graph(spec);
    bool same = true;
    std::size_t deg3b = 0;
    for (std::size_t v = 0; v < 30; ++v) {
        same = same && g.vertex(v).ports == g3.vertex(v).ports;
        deg3b += g3.degree(v) == 3;
    }
    CHECK_FALSE(same);
    CHECK(deg3b == 28);
}

TEST_CASE("directed edge index round-trips; port/edge bijection", "[graphs]") {
    GraphSpec spec;
    spec.kind = SubstrateKind::GluedTree;
    spec.depth = 2;
    spec.seed = 5;
    const Graph g = build_graph(spec);
    std::size_t degree_sum = 0;
    for (std::size_t v = 0; v < g.num_vertices(); ++v) degree_sum += g.degree(v);
    CHECK(degree_sum == 2 * g.num_edges());
    CHECK(g.num_directed_edges() == 2 * g.num_edges());
    for (std::size_t k = 0; k < g.num_directed_edges(); ++k) {
        const auto [u, v] = g.edge(k);
        CHECK(g.edge_index(u, v) == k);
        CHECK(g.vertex(u).ports[g.port_of(u, v)] == v);
    }
}

TEST_CASE("mark_vertex: replacement, identity, validation", "[graphs]") {
    GraphSpec spec;
    spec.kind = SubstrateKind::RectLattice;
    spec.width = 5;
    spec.height = 5;
    spec.toroidal = true;
    const Graph g = build_graph(spec);

    // marking with the same Grover coin changes nothing structurally
    const Graph same = mark_vertex(g, 12, coin({CoinKind::Grover, 4}));
    for (std::size_t v = 0; v < g.num_vertices(); ++v)
        CHECK(max_abs_diff(same.vertex(v).scatter, g.vertex(v).scatter) == 0.0);
    CHECK(same.marked() == std::vector<std::size_t>{12});

    // -I marks exactly one vertex
    CMatrix neg = CMatrix::identity(4);
    for (int i = 0; i < 4; ++i) neg(i, i) = -1.0;
    const Graph marked = mark_vertex(g, 12, neg);
    std::size_t differing = 0;
    for (std::size_t v = 0; v < g.num_vertices(); ++v)
        differing += max_abs_diff(marked.vertex(v).scatter, g.vertex(v).scatter) > 0.0;
    CHECK(differing == 1);

    CMatrix nonunitary = CMatrix::identity(4);
    nonunitary(0, 0) = 2.0;
    CHECK_THROWS_WITH(mark_vertex(g, 12, nonunitary),
                      Catch::Matchers::ContainsSubstring("not unitary"));
    CHECK_THROWS_WITH(mark_vertex(g, 12, CMatrix::identity(3)),
                      Catch::Matchers::ContainsSubstring("vertex 12"));
}

TEST_CASE("explicit coin must match every degree", "[graphs]") {
    GraphSpec spec;
    spec.kind = SubstrateKind::Line;
    spec.n = 5;
    spec.coin = coin({CoinKind::Grover, 2});
    // endpoints have degree 1, so a 2x2 coin cannot be applied there
    CHECK_THROWS_WITH(build_graph(spec), Catch::Matchers::ContainsSubstring("vertex 0"));

    GraphSpec cyc;
    cyc.kind = SubstrateKind::Cycle;
    cyc.n = 5;
    cyc.coin = coin({CoinKind::Grover, 2});
    CHECK_NOTHROW(build_graph(cyc));
}
