#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "connbench/adjacency.hpp"
#include "connbench/disjoint_set.hpp"
#include "connbench/errors.hpp"
#include "connbench/estimators.hpp"
#include "connbench/io_util.hpp"
#include "connbench/special_functions.hpp"

namespace connbench {

enum class Sidedness { one_sided_positive, two_sided };

inline const char* to_string(Sidedness s) {
    return s == Sidedness::one_sided_positive ? "one_sided_positive" : "two_sided";
}

inline Sidedness sidedness_from_string(const std::string& s) {
    if (s == "one_sided_positive") return Sidedness::one_sided_positive;
    if (s == "two_sided") return Sidedness::two_sided;
    throw std::invalid_argument("unknown sidedness: " + s);
}

inline std::vector<double> default_lambda_grid() {
    std::vector<double> g(20);
    for (int i = 0; i < 20; ++i)
        g[static_cast<std::size_t>(i)] = std::pow(10.0, -3.0 + 3.0 * i / 19.0);
    return g;
}

struct DetectionParams {
    double alpha = 0.05;
    double tau = 0.5;
    double q = 0.1;
    Sidedness sidedness = Sidedness::one_sided_positive;
    std::vector<double> lambda_grid = default_lambda_grid();
    int cv_folds = 5;
    int em_max_iter = 200;
    double em_tol = 1e-8;
};

inline void validate(const DetectionParams& d) {
    if (!(d.alpha > 0.0 && d.alpha < 1.0))
        throw std::invalid_argument("DetectionParams: alpha must lie in (0, 1)");
    if (!(d.tau >= 0.0 && d.tau <= 1.0))
        throw std::invalid_argument("DetectionParams: tau must lie in [0, 1]");
    if (!(d.q >= 0.0 && d.q <= 1.0))
        throw std::invalid_argument("DetectionParams: q must lie in [0, 1]");
    if (d.lambda_grid.empty())
        throw std::invalid_argument("DetectionParams: lambda_grid must be non-empty");
    for (double l : d.lambda_grid)
        if (!(l > 0.0))
            throw std::invalid_argument("DetectionParams: lambda_grid entries must be positive");
    if (d.cv_folds < 2) throw std::invalid_argument("DetectionParams: cv_folds must be >= 2");
    if (d.em_max_iter < 1 || !(d.em_tol > 0.0))
        throw std::invalid_argument("DetectionParams: bad EM settings");
}

struct DetectionOutcome {
    Adjacency adjacency{1};
    std::string method;
    std::optional<double> chosen_threshold;
    std::optional<double> chosen_lambda;
    std::optional<double> alpha;
    std::optional<SymMatrix> pvalues;
};

// t-test p-values for correlation-like scores. The boundary |r| = 1 follows
// the t = r*sqrt(nu/(1-r^2)) formula to its limit: +1 gives p = 0 under
// either sidedness; -1 gives p = 0 two-sided but p = 1 one-sided, since
// r = -1 is maximal evidence against the positive alternative.
inline SymMatrix pearson_pvalues(const ConnectivityMatrix& r, int T, int dof_adjust,
                                 Sidedness sidedness) {
    const int nu = T - 2 - dof_adjust;
    if (nu < 1)
        throw DegreesOfFreedom("pearson_pvalues: T - 2 - dof_adjust must be >= 1");
    const int p = r.dim();
    SymMatrix out(p);
    for (int i = 0; i < p; ++i) {
        out.set(i, i, 1.0);
        for (int j = i + 1; j < p; ++j) {
            const double v = r(i, j);
            double pv;
            if (v >= 1.0) {
                pv = 0.0;
            } else if (v <= -1.0) {
                pv = sidedness == Sidedness::one_sided_positive ? 1.0 : 0.0;
            } else {
                const double t = v * std::sqrt(nu / (1.0 - v * v));
                pv = sidedness == Sidedness::one_sided_positive
                         ? student_t_sf(t, nu)
                         : 2.0 * student_t_sf(std::fabs(t), nu);
            }
            out.set(i, j, pv);
        }
    }
    return out;
}

namespace detail {

inline void check_pvalues(const SymMatrix& pvals) {
    const int p = pvals.dim();
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j)
            if (!(pvals(i, j) >= 0.0 && pvals(i, j) <= 1.0))
                throw std::invalid_argument("p-values must lie in [0, 1]");
}

inline void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("alpha must lie in (0, 1)");
}

// Shared step-up rule: find the largest k with p(k) <= k*alpha/(m*scale),
// then keep everything at or below that p-value. scale = 1 is
// Benjamini-Hochberg, scale = c(m) is Benjamini-Yekutieli.
inline DetectionOutcome step_up(const SymMatrix& pvals, double alpha, double scale,
                                const char* name) {
    check_pvalues(pvals);
    check_alpha(alpha);
    const int p = pvals.dim();
    std::vector<double> sorted;
    sorted.reserve(static_cast<std::size_t>(p) * (p - 1) / 2);
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j) sorted.push_back(pvals(i, j));
    std::sort(sorted.begin(), sorted.end());
    const double m = static_cast<double>(sorted.size());

    double cut = -1.0;
    for (std::size_t k = 1; k <= sorted.size(); ++k)
        if (sorted[k - 1] <= static_cast<double>(k) * alpha / (m * scale))
            cut = sorted[k - 1];

    DetectionOutcome out;
    out.adjacency = Adjacency(p);
    out.method = name;
    out.alpha = alpha;
    out.pvalues = pvals;
    if (cut >= 0.0)
        for (int i = 0; i < p; ++i)
            for (int j = i + 1; j < p; ++j)
                if (pvals(i, j) <= cut) out.adjacency.add_edge(i, j);
    return out;
}

// BH is kept as an internal reference procedure only; it is not one of the
// benchmarked methods.
inline DetectionOutcome benjamini_hochberg(const SymMatrix& pvals, double alpha) {
    return step_up(pvals, alpha, 1.0, "benjamini_hochberg");
}

} // namespace detail

inline DetectionOutcome bonferroni(const SymMatrix& pvals, double alpha) {
    detail::check_pvalues(pvals);
    detail::check_alpha(alpha);
    const int p = pvals.dim();
    const double m = static_cast<double>(p) * (p - 1) / 2.0;
    const double cutoff = alpha / m;
    DetectionOutcome out;
    out.adjacency = Adjacency(p);
    out.method = "bonferroni";
    out.alpha = alpha;
    out.pvalues = pvals;
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j)
            if (pvals(i, j) <= cutoff) out.adjacency.add_edge(i, j);
    return out;
}

inline DetectionOutcome benjamini_yekutieli(const SymMatrix& pvals, double alpha) {
    const int p = pvals.dim();
    const long m = static_cast<long>(p) * (p - 1) / 2;
    double cm = 0.0;
    for (long i = 1; i <= m; ++i) cm += 1.0 / static_cast<double>(i);
    return detail::step_up(pvals, alpha, cm, "benjamini_yekutieli");
}

inline DetectionOutcome fixed_threshold(const ConnectivityMatrix& c, double tau) {
    if (!(tau >= 0.0 && tau <= 1.0))
        throw std::invalid_argument("fixed_threshold: tau must lie in [0, 1]");
    const int p = c.dim();
    DetectionOutcome out;
    out.adjacency = Adjacency(p);
    out.method = "fixed_threshold";
    out.chosen_threshold = tau;
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j)
            if (std::fabs(c(i, j)) > tau) out.adjacency.add_edge(i, j);
    return out;
}

// Keep exactly round_half_up(q*m) edges with the largest |c|, ties broken by
// lexicographic pair order.
inline DetectionOutcome fixed_proportion(const ConnectivityMatrix& c, double q) {
    if (!(q >= 0.0 && q <= 1.0))
        throw std::invalid_argument("fixed_proportion: q must lie in [0, 1]");
    const int p = c.dim();
    std::vector<std::tuple<double, int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(p) * (p - 1) / 2);
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j) pairs.emplace_back(std::fabs(c(i, j)), i, j);
    std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
        return std::tie(std::get<1>(a), std::get<2>(a)) <
               std::tie(std::get<1>(b), std::get<2>(b));
    });
    const std::size_t k = static_cast<std::size_t>(
        std::floor(q * static_cast<double>(pairs.size()) + 0.5));

    DetectionOutcome out;
    out.adjacency = Adjacency(p);
    out.method = "fixed_proportion";
    for (std::size_t t = 0; t < k && t < pairs.size(); ++t)
        out.adjacency.add_edge(std::get<1>(pairs[t]), std::get<2>(pairs[t]));
    if (k >= 1 && !pairs.empty())
        out.chosen_threshold = std::get<0>(pairs[std::min(k, pairs.size()) - 1]);
    return out;
}

// Two-component Gaussian mixture on Fisher-z scores. The component whose
// mean sits nearer 0 plays the null; an edge is kept when the posterior of
// the other component exceeds 1/2.
inline DetectionOutcome mixture_threshold(const ConnectivityMatrix& c,
                                          const DetectionParams& params = {}) {
    validate(params);
    const int p = c.dim();
    struct Item {
        double z;
        double score;
        int i, j;
    };
    std::vector<Item> items;
    items.reserve(static_cast<std::size_t>(p) * (p - 1) / 2);
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j)
            items.push_back({fisher_z(c(i, j)), std::fabs(c(i, j)), i, j});
    const std::size_t m = items.size();
    if (m < 2) throw EMDegenerate("mixture_threshold: fewer than two scores");

    // EM runs over the sorted multiset so any relabeling of nodes that
    // permutes the scores fits identical parameters.
    std::vector<double> zs(m);
    for (std::size_t t = 0; t < m; ++t) zs[t] = items[t].z;
    std::sort(zs.begin(), zs.end());

    double zbar = 0.0;
    for (double z : zs) zbar += z;
    zbar /= static_cast<double>(m);
    double zvar = 0.0;
    for (double z : zs) zvar += (z - zbar) * (z - zbar);
    zvar /= static_cast<double>(m);
    if (zvar < 1e-10) throw EMDegenerate("mixture_threshold: zero variance in scores");

    double mu[2] = {zs[static_cast<std::size_t>(0.25 * (static_cast<double>(m) - 1))],
                    zs[static_cast<std::size_t>(0.75 * (static_cast<double>(m) - 1))]};
    double var[2] = {zvar, zvar};
    double w[2] = {0.5, 0.5};

    auto log_comp = [&](int k, double z) {
        return std::log(w[k]) - 0.5 * std::log(2.0 * std::numbers::pi * var[k]) -
               (z - mu[k]) * (z - mu[k]) / (2.0 * var[k]);
    };

    double prev_ll = -std::numeric_limits<double>::infinity();
    std::vector<double> resp1(m);
    for (int it = 0; it < params.em_max_iter; ++it) {
        double ll = 0.0, n1 = 0.0, s0 = 0.0, s1 = 0.0;
        for (std::size_t t = 0; t < m; ++t) {
            const double a0 = log_comp(0, zs[t]);
            const double a1 = log_comp(1, zs[t]);
            const double hi = std::max(a0, a1);
            const double l = hi + std::log(std::exp(a0 - hi) + std::exp(a1 - hi));
            ll += l;
            const double r1 = std::exp(a1 - l);
            resp1[t] = r1;
            n1 += r1;
            s0 += (1.0 - r1) * zs[t];
            s1 += r1 * zs[t];
        }
        const double n0 = static_cast<double>(m) - n1;
        w[0] = n0 / static_cast<double>(m);
        w[1] = n1 / static_cast<double>(m);
        if (w[0] < 1e-6 || w[1] < 1e-6)
            throw EMDegenerate("mixture_threshold: component weight collapsed");
        mu[0] = s0 / n0;
        mu[1] = s1 / n1;
        double v0 = 0.0, v1 = 0.0;
        for (std::size_t t = 0; t < m; ++t) {
            v0 += (1.0 - resp1[t]) * (zs[t] - mu[0]) * (zs[t] - mu[0]);
            v1 += resp1[t] * (zs[t] - mu[1]) * (zs[t] - mu[1]);
        }
        var[0] = v0 / n0;
        var[1] = v1 / n1;
        if (var[0] < 1e-10 || var[1] < 1e-10)
            throw EMDegenerate("mixture_threshold: component variance collapsed");
        if (std::fabs(ll - prev_ll) < params.em_tol * static_cast<double>(m)) break;
        prev_ll = ll;
    }

    const int null_comp = std::fabs(mu[0]) <= std::fabs(mu[1]) ? 0 : 1;
    const int alt_comp = 1 - null_comp;

    DetectionOutcome out;
    out.adjacency = Adjacency(p);
    out.method = "mixture";
    double min_kept = std::numeric_limits<double>::infinity();
    for (const Item& item : items) {
        const double a_null = log_comp(null_comp, item.z);
        const double a_alt = log_comp(alt_comp, item.z);
        const double post_alt = 1.0 / (1.0 + std::exp(a_null - a_alt));
        if (post_alt > 0.5) {
            out.adjacency.add_edge(item.i, item.j);
            min_kept = std::min(min_kept, item.score);
        }
    }
    if (out.adjacency.edge_count() > 0) out.chosen_threshold = min_kept;
    return out;
}

// Largest threshold that still leaves the graph connected: insert edges by
// descending |c| into a union-find and stop at the first single component.
// Zero scores are not insertable edges; if the nonzero-score graph never
// connects, fall back to keeping all nonzero scores with tau* = 0.
inline DetectionOutcome percolation_threshold(const ConnectivityMatrix& c) {
    const int p = c.dim();
    if (p < 2) throw std::invalid_argument("percolation_threshold: need p >= 2");
    std::vector<std::tuple<double, int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(p) * (p - 1) / 2);
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j) pairs.emplace_back(std::fabs(c(i, j)), i, j);
    std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
        return std::tie(std::get<1>(a), std::get<2>(a)) <
               std::tie(std::get<1>(b), std::get<2>(b));
    });

    DisjointSet ds(p);
    double tau_star = 0.0;
    bool connected = false;
    for (const auto& [v, i, j] : pairs) {
        if (v <= 0.0) break;
        ds.unite(i, j);
        if (ds.components() == 1) {
            tau_star = v;
            connected = true;
            break;
        }
    }

    DetectionOutcome out;
    out.adjacency = Adjacency(p);
    out.method = "percolation";
    out.chosen_threshold = tau_star;
    for (const auto& [v, i, j] : pairs) {
        if (connected ? v >= tau_star : v > 0.0) out.adjacency.add_edge(i, j);
    }
    return out;
}

// Edge-list serialization with a leading metadata comment.
inline void write_outcome(std::ostream& os, const DetectionOutcome& out) {
    os << "# method=" << out.method << " threshold="
       << (out.chosen_threshold ? fmt_g17(*out.chosen_threshold) : "-") << " lambda="
       << (out.chosen_lambda ? fmt_g17(*out.chosen_lambda) : "-") << " alpha="
       << (out.alpha ? fmt_g17(*out.alpha) : "-") << "\n";
    write_edge_list(os, out.adjacency);
}

inline DetectionOutcome read_outcome(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.empty() || line[0] != '#')
        throw SchemaMismatch("outcome file: missing metadata line");
    DetectionOutcome out;
    std::istringstream hs(line.substr(1));
    std::string tok;
    while (hs >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        if (key == "method") out.method = val;
        else if (val != "-") {
            if (key == "threshold") out.chosen_threshold = std::stod(val);
            else if (key == "lambda") out.chosen_lambda = std::stod(val);
            else if (key == "alpha") out.alpha = std::stod(val);
        }
    }
    out.adjacency = read_edge_list(is);
    return out;
}

} // namespace connbench
