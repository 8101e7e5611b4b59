#pragma once

#include <vector>

namespace connbench {

class DisjointSet {
public:
    explicit DisjointSet(int n)
        : parent_(static_cast<std::size_t>(n)), rank_(static_cast<std::size_t>(n), 0),
          components_(n) {
        for (int i = 0; i < n; ++i) parent_[static_cast<std::size_t>(i)] = i;
    }

    int find(int x) {
        int root = x;
        while (parent_[static_cast<std::size_t>(root)] != root)
            root = parent_[static_cast<std::size_t>(root)];
        while (parent_[static_cast<std::size_t>(x)] != root) {
            const int next = parent_[static_cast<std::size_t>(x)];
            parent_[static_cast<std::size_t>(x)] = root;
            x = next;
        }
        return root;
    }

    // Returns true when the two elements were in different sets.
    bool unite(int a, int b) {
        int ra = find(a), rb = find(b);
        if (ra == rb) return false;
        if (rank_[static_cast<std::size_t>(ra)] < rank_[static_cast<std::size_t>(rb)])
            std::swap(ra, rb);
        parent_[static_cast<std::size_t>(rb)] = ra;
        if (rank_[static_cast<std::size_t>(ra)] == rank_[static_cast<std::size_t>(rb)])
            ++rank_[static_cast<std::size_t>(ra)];
        --components_;
        return true;
    }

    int components() const { return components_; }

private:
    std::vector<int> parent_;
    std::vector<int> rank_;
    int components_;
};

} // namespace connbench
