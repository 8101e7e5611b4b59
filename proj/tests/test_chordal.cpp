#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <vector>

#include "connbench/chordal.hpp"
#include "connbench/rng.hpp"

using namespace connbench;

namespace {

Adjacency cycle_graph(int p) {
    Adjacency g(p);
    for (int i = 0; i < p; ++i) g.add_edge(i, (i + 1) % p);
    return g;
}

Adjacency complete_graph(int p) {
    Adjacency g(p);
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j) g.add_edge(i, j);
    return g;
}

// Exhaustive reference: a graph is chordal iff no induced subgraph on four
// or more vertices is a cycle. Only usable for tiny p.
bool chordal_by_brute_force(const Adjacency& g) {
    const int p = g.node_count();
    for (unsigned mask = 0; mask < (1u << p); ++mask) {
        std::vector<int> verts;
        for (int v = 0; v < p; ++v)
            if (mask & (1u << v)) verts.push_back(v);
        if (verts.size() < 4) continue;

        bool all_degree_two = true;
        for (int v : verts) {
            int deg = 0;
            for (int u : verts)
                if (u != v && g.has_edge(u, v)) ++deg;
            if (deg != 2) {
                all_degree_two = false;
                break;
            }
        }
        if (!all_degree_two) continue;

        // Degree-2 induced subgraph is a union of cycles; connected => one cycle.
        DisjointSet ds(p);
        for (std::size_t a = 0; a < verts.size(); ++a)
            for (std::size_t b = a + 1; b < verts.size(); ++b)
                if (g.has_edge(verts[a], verts[b])) ds.unite(verts[a], verts[b]);
        int roots = 0;
        for (int v : verts)
            if (ds.find(v) == v) ++roots;
        // Vertices outside the subset are their own roots; count only inside.
        bool connected = true;
        const int r0 = ds.find(verts[0]);
        for (int v : verts)
            if (ds.find(v) != r0) connected = false;
        (void)roots;
        if (connected) return false;
    }
    return true;
}

Adjacency random_graph(RngStream& rng, int p, double edge_prob) {
    Adjacency g(p);
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j)
            if (rng.uniform() < edge_prob) g.add_edge(i, j);
    return g;
}

} // namespace

TEST_CASE("adjacency basics") {
    Adjacency g(4);
    REQUIRE(g.edge_count() == 0);
    REQUIRE_THROWS_AS(g.add_edge(1, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(g.add_edge(0, 4), std::out_of_range);
    g.add_edge(2, 0);
    REQUIRE(g.has_edge(0, 2));
    REQUIRE(g.has_edge(2, 0));
    g.add_edge(0, 2); // duplicate is a no-op
    REQUIRE(g.edge_count() == 1);
    REQUIRE(g.edges() == std::vector<std::pair<int, int>>{{0, 2}});
    g.remove_edge(0, 2);
    REQUIRE(g.edge_count() == 0);
    REQUIRE(g.density() == 0.0);

    Adjacency k3 = complete_graph(3);
    REQUIRE(k3.density() == 1.0);
}

TEST_CASE("connected components") {
    Adjacency g(5);
    auto lab = components(g);
    REQUIRE(lab == std::vector<int>{0, 1, 2, 3, 4});
    REQUIRE(component_count(g) == 5);

    g.add_edge(0, 1);
    g.add_edge(3, 4);
    lab = components(g);
    REQUIRE(lab[0] == lab[1]);
    REQUIRE(lab[3] == lab[4]);
    REQUIRE(lab[0] != lab[3]);
    REQUIRE(lab[2] != lab[0]);
    REQUIRE(component_count(g) == 3);

    REQUIRE(component_count(complete_graph(6)) == 1);
}

TEST_CASE("edge list round trip") {
    Adjacency g(6);
    g.add_edge(0, 5);
    g.add_edge(2, 3);
    g.add_edge(1, 2);
    std::stringstream ss;
    write_edge_list(ss, g);
    Adjacency back = read_edge_list(ss);
    REQUIRE(back == g);

    std::stringstream bad("q 4\n0 1\n");
    REQUIRE_THROWS_AS(read_edge_list(bad), SchemaMismatch);
}

TEST_CASE("is_chordal on fixed graphs") {
    REQUIRE(is_chordal(complete_graph(3)));
    REQUIRE(is_chordal(complete_graph(5)));
    REQUIRE_FALSE(is_chordal(cycle_graph(4)));
    REQUIRE_FALSE(is_chordal(cycle_graph(6)));

    // Square plus one diagonal is two triangles.
    Adjacency g = cycle_graph(4);
    g.add_edge(0, 2);
    REQUIRE(is_chordal(g));

    // Trees are chordal: star and path.
    Adjacency star(6);
    for (int v = 1; v < 6; ++v) star.add_edge(0, v);
    REQUIRE(is_chordal(star));
    Adjacency path(6);
    for (int v = 0; v < 5; ++v) path.add_edge(v, v + 1);
    REQUIRE(is_chordal(path));

    // Empty graph.
    REQUIRE(is_chordal(Adjacency(7)));
}

TEST_CASE("is_chordal agrees with the exhaustive oracle") {
    RngStream rng(31337);
    for (int rep = 0; rep < 500; ++rep) {
        const int p = 4 + static_cast<int>(rng.below(4)); // 4..7
        Adjacency g = random_graph(rng, p, rng.uniform(0.2, 0.8));
        REQUIRE(is_chordal(g) == chordal_by_brute_force(g));
    }
}

TEST_CASE("random_chordal endpoints and exact edge counts") {
    Adjacency empty = random_chordal(9, 0.0, 5);
    REQUIRE(empty.edge_count() == 0);

    Adjacency full = random_chordal(9, 1.0, 5);
    REQUIRE(full.edge_count() == 36);

    // round-half-up of d * p * (p - 1) / 2
    REQUIRE(chordal_edge_target(51, 0.1) == 128);
    Adjacency g = random_chordal(51, 0.1, 123);
    REQUIRE(g.edge_count() == 128);
    REQUIRE(is_chordal(g));
}

TEST_CASE("random_chordal draws are chordal with exact counts") {
    RngStream rng(2024);
    for (int rep = 0; rep < 400; ++rep) {
        const int p = 2 + static_cast<int>(rng.below(19)); // 2..20
        const double d = rng.uniform();
        Adjacency g = random_chordal(p, d, rng.next());
        REQUIRE(g.edge_count() == chordal_edge_target(p, d));
        REQUIRE(is_chordal(g));
    }
}

TEST_CASE("random_chordal is deterministic in the seed") {
    Adjacency a = random_chordal(20, 0.45, 99);
    Adjacency b = random_chordal(20, 0.45, 99);
    REQUIRE(a == b);
    Adjacency c = random_chordal(20, 0.45, 100);
    REQUIRE(a != c);
}
