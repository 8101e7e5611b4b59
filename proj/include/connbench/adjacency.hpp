#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "connbench/disjoint_set.hpp"
#include "connbench/errors.hpp"

namespace connbench {

// Simple undirected graph on vertices 0..p-1, dense bitmap storage.
// No self loops; edges are unordered pairs reported as (i, j) with i < j.
class Adjacency {
public:
    explicit Adjacency(int p)
        : p_(p), m_(static_cast<std::size_t>(p) * p, 0) {
        if (p < 1) throw std::invalid_argument("Adjacency: need at least one node");
    }

    int node_count() const { return p_; }
    int edge_count() const { return edges_; }
    long max_edges() const { return static_cast<long>(p_) * (p_ - 1) / 2; }

    double density() const {
        return p_ < 2 ? 0.0 : static_cast<double>(edges_) / static_cast<double>(max_edges());
    }

    bool has_edge(int i, int j) const {
        check(i, j);
        if (i == j) return false;
        return m_[idx(i, j)] != 0;
    }

    void add_edge(int i, int j) {
        check(i, j);
        if (i == j) throw std::invalid_argument("Adjacency: self loop");
        if (m_[idx(i, j)]) return;
        m_[idx(i, j)] = 1;
        m_[idx(j, i)] = 1;
        ++edges_;
    }

    void remove_edge(int i, int j) {
        check(i, j);
        if (i == j || !m_[idx(i, j)]) return;
        m_[idx(i, j)] = 0;
        m_[idx(j, i)] = 0;
        --edges_;
    }

    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> out;
        out.reserve(static_cast<std::size_t>(edges_));
        for (int i = 0; i < p_; ++i)
            for (int j = i + 1; j < p_; ++j)
                if (m_[idx(i, j)]) out.emplace_back(i, j);
        return out;
    }

    std::vector<int> neighbors(int v) const {
        check(v, v);
        std::vector<int> out;
        for (int u = 0; u < p_; ++u)
            if (u != v && m_[idx(v, u)]) out.push_back(u);
        return out;
    }

    bool operator==(const Adjacency& o) const { return p_ == o.p_ && m_ == o.m_; }
    bool operator!=(const Adjacency& o) const { return !(*this == o); }

private:
    void check(int i, int j) const {
        if (i < 0 || j < 0 || i >= p_ || j >= p_)
            throw std::out_of_range("Adjacency: vertex out of range");
    }

    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i) * p_ + j;
    }

    int p_;
    std::vector<std::uint8_t> m_;
    int edges_ = 0;
};

// Connected component labels, numbered by first appearance: label[0] == 0.
inline std::vector<int> components(const Adjacency& g) {
    const int p = g.node_count();
    DisjointSet ds(p);
    for (const auto& [i, j] : g.edges()) ds.unite(i, j);
    std::vector<int> label(static_cast<std::size_t>(p), -1);
    std::vector<int> root_label(static_cast<std::size_t>(p), -1);
    int next = 0;
    for (int v = 0; v < p; ++v) {
        const int r = ds.find(v);
        if (root_label[static_cast<std::size_t>(r)] < 0)
            root_label[static_cast<std::size_t>(r)] = next++;
        label[static_cast<std::size_t>(v)] = root_label[static_cast<std::size_t>(r)];
    }
    return label;
}

inline int component_count(const Adjacency& g) {
    const int p = g.node_count();
    DisjointSet ds(p);
    for (const auto& [i, j] : g.edges()) ds.unite(i, j);
    return ds.components();
}

// Edge list serialization: first line "p <n>", then one "i j" line per edge
// in (i, j) lexicographic order.
inline void write_edge_list(std::ostream& os, const Adjacency& g) {
    os << "p " << g.node_count() << "\n";
    for (const auto& [i, j] : g.edges()) os << i << " " << j << "\n";
}

inline std::string edge_list_string(const Adjacency& g) {
    std::ostringstream os;
    write_edge_list(os, g);
    return os.str();
}

inline Adjacency read_edge_list(std::istream& is) {
    std::string tag;
    int p = 0;
    if (!(is >> tag >> p) || tag != "p")
        throw SchemaMismatch("edge list: expected header 'p <n>'");
    Adjacency g(p);
    int i, j;
    while (is >> i >> j) g.add_edge(i, j);
    return g;
}

} // namespace connbench
