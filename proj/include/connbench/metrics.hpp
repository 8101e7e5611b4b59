#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "connbench/adjacency.hpp"
#include "connbench/errors.hpp"
#include "connbench/estimators.hpp"
#include "connbench/sym_matrix.hpp"

namespace connbench {

struct Confusion {
    long tp = 0;
    long tn = 0;
    long fp = 0;
    long fn = 0;
};

inline Confusion confusion(const Adjacency& estimated, const Adjacency& truth) {
    if (estimated.node_count() != truth.node_count())
        throw DimensionMismatch("confusion: node counts differ");
    const int p = truth.node_count();
    Confusion c;
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j) {
            const bool e = estimated.has_edge(i, j);
            const bool t = truth.has_edge(i, j);
            if (e && t) ++c.tp;
            else if (e && !t) ++c.fp;
            else if (!e && t) ++c.fn;
            else ++c.tn;
        }
    return c;
}

inline double accuracy(const Confusion& c) {
    const long m = c.tp + c.tn + c.fp + c.fn;
    return m == 0 ? 0.0 : static_cast<double>(c.tp + c.tn) / static_cast<double>(m);
}

// 0/0 conventions: no real edges means TPR 0, no real non-edges means FPR 0.
inline double tpr(const Confusion& c) {
    const long denom = c.tp + c.fn;
    return denom == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(denom);
}

inline double fpr(const Confusion& c) {
    const long denom = c.fp + c.tn;
    return denom == 0 ? 0.0 : static_cast<double>(c.fp) / static_cast<double>(denom);
}

// Rank-sum AUC over |scores|, ties handled by mid-ranks:
// AUC = (R1 - N1(N1+1)/2) / (N1 N0) with R1 the rank sum of true edges.
inline double auc(const SymMatrix& scores, const Adjacency& truth) {
    if (scores.dim() != truth.node_count())
        throw DimensionMismatch("auc: score and truth dimensions differ");
    const int p = scores.dim();
    struct Entry {
        double v;
        bool pos;
    };
    std::vector<Entry> entries;
    entries.reserve(static_cast<std::size_t>(p) * (p - 1) / 2);
    double n1 = 0.0, n0 = 0.0;
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j) {
            const bool pos = truth.has_edge(i, j);
            entries.push_back({std::fabs(scores(i, j)), pos});
            (pos ? n1 : n0) += 1.0;
        }
    if (n1 == 0.0 || n0 == 0.0)
        throw UndefinedAUC("auc: need at least one edge and one non-edge");

    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.v < b.v; });
    double r1 = 0.0;
    std::size_t lo = 0;
    while (lo < entries.size()) {
        std::size_t hi = lo;
        while (hi + 1 < entries.size() && entries[hi + 1].v == entries[lo].v) ++hi;
        const double mid_rank = static_cast<double>(lo + hi) / 2.0 + 1.0;
        for (std::size_t t = lo; t <= hi; ++t)
            if (entries[t].pos) r1 += mid_rank;
        lo = hi + 1;
    }
    return (r1 - n1 * (n1 + 1.0) / 2.0) / (n1 * n0);
}

inline double auc(const ConnectivityMatrix& scores, const Adjacency& truth) {
    return auc(scores.values, truth);
}

} // namespace connbench
