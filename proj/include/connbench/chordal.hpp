#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "connbench/adjacency.hpp"
#include "connbench/rng.hpp"

namespace connbench {

// Maximum cardinality search. Returns number[v] = position of v in the
// elimination order (0 eliminated first); ties broken by smallest index so
// the order is deterministic.
inline std::vector<int> mcs_order(const Adjacency& g) {
    const int p = g.node_count();
    std::vector<int> weight(static_cast<std::size_t>(p), 0);
    std::vector<char> picked(static_cast<std::size_t>(p), 0);
    std::vector<int> number(static_cast<std::size_t>(p), -1);
    for (int pos = p - 1; pos >= 0; --pos) {
        int best = -1;
        for (int v = 0; v < p; ++v)
            if (!picked[static_cast<std::size_t>(v)] &&
                (best < 0 || weight[static_cast<std::size_t>(v)] > weight[static_cast<std::size_t>(best)]))
                best = v;
        picked[static_cast<std::size_t>(best)] = 1;
        number[static_cast<std::size_t>(best)] = pos;
        for (int u = 0; u < p; ++u)
            if (!picked[static_cast<std::size_t>(u)] && g.has_edge(best, u))
                ++weight[static_cast<std::size_t>(u)];
    }
    return number;
}

// Chordality test: run MCS, then verify the order is a perfect elimination
// ordering. For each vertex it suffices to check that its later neighbors,
// minus the earliest of them, are all adjacent to that earliest one.
inline bool is_chordal(const Adjacency& g) {
    const int p = g.node_count();
    const std::vector<int> number = mcs_order(g);
    std::vector<int> later;
    for (int v = 0; v < p; ++v) {
        later.clear();
        int follower = -1;
        for (int u = 0; u < p; ++u)
            if (u != v && g.has_edge(v, u) &&
                number[static_cast<std::size_t>(u)] > number[static_cast<std::size_t>(v)]) {
                later.push_back(u);
                if (follower < 0 ||
                    number[static_cast<std::size_t>(u)] < number[static_cast<std::size_t>(follower)])
                    follower = u;
            }
        for (int u : later)
            if (u != follower && !g.has_edge(follower, u)) return false;
    }
    return true;
}

inline int chordal_edge_target(int p, double d) {
    const double m = static_cast<double>(p) * (p - 1) / 2.0;
    return static_cast<int>(std::floor(d * m + 0.5));
}

// Grow a uniformly seeded chordal graph with exactly
// round(d * p * (p - 1) / 2) edges: repeatedly pick a random non-edge, add
// it if the graph stays chordal. A long run of consecutive rejections means
// the partial graph painted itself into a corner; restart from scratch with
// a fresh derived seed.
inline Adjacency random_chordal(int p, double d, std::uint64_t seed) {
    if (p < 2) throw std::invalid_argument("random_chordal: need at least two nodes");
    if (d < 0.0 || d > 1.0) throw std::invalid_argument("random_chordal: density outside [0, 1]");
    const int target = chordal_edge_target(p, d);
    const long max_edges = static_cast<long>(p) * (p - 1) / 2;
    const int reject_cap = 50 * p * p;

    for (std::uint64_t restart = 0;; ++restart) {
        RngStream rng(derive_seed(seed, "random_chordal", restart));
        Adjacency g(p);
        int rejects = 0;
        bool stuck = false;
        while (g.edge_count() < target && !stuck) {
            if (g.edge_count() == static_cast<int>(max_edges)) break;
            int i, j;
            do {
                i = static_cast<int>(rng.below(static_cast<std::uint64_t>(p)));
                j = static_cast<int>(rng.below(static_cast<std::uint64_t>(p)));
            } while (i == j || g.has_edge(i, j));
            g.add_edge(i, j);
            if (is_chordal(g)) {
                rejects = 0;
            } else {
                g.remove_edge(i, j);
                if (++rejects >= reject_cap) stuck = true;
            }
        }
        if (!stuck) return g;
    }
}

} // namespace connbench
