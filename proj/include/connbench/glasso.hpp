#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "connbench/detect.hpp"
#include "connbench/estimators.hpp"
#include "connbench/gaussian.hpp"
#include "connbench/rng.hpp"
#include "connbench/sym_matrix.hpp"

namespace connbench {

struct GlassoResult {
    SymMatrix precision{1};
    DetectionOutcome outcome;
    bool converged = true;
    int iterations = 0;
};

namespace detail {

inline double soft_threshold(double x, double t) {
    if (x > t) return x - t;
    if (x < -t) return x + t;
    return 0.0;
}

// Block coordinate descent on the covariance estimate W. The diagonal is
// unpenalized and therefore fixed at w_jj = s_jj throughout. W and B are
// row-major p*p buffers; passing them back in warm-starts the next call.
// Returns whether the outer loop converged; iters reports sweeps used.
inline bool glasso_fit(const std::vector<double>& s, int p, double lambda, double tol,
                       int max_iter, std::vector<double>& W, std::vector<double>& B,
                       int& iters) {
    const std::size_t n = static_cast<std::size_t>(p);
    double off_mean = 0.0;
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
            if (i != j) off_mean += std::fabs(s[static_cast<std::size_t>(i) * n + j]);
    if (p > 1) off_mean /= static_cast<double>(p) * (p - 1);
    const double thr = off_mean > 0.0 ? tol * off_mean : tol;

    for (int i = 0; i < p; ++i) W[static_cast<std::size_t>(i) * n + i] = s[static_cast<std::size_t>(i) * n + i];

    std::vector<double> beta(n), s12(n), w12(n);
    iters = 0;
    for (int sweep = 1; sweep <= max_iter; ++sweep) {
        iters = sweep;
        double max_change = 0.0;
        for (int j = 0; j < p; ++j) {
            for (int k = 0; k < p; ++k) {
                beta[static_cast<std::size_t>(k)] = B[static_cast<std::size_t>(k) * n + j];
                s12[static_cast<std::size_t>(k)] = s[static_cast<std::size_t>(k) * n + j];
            }
            // Inner lasso on the j-th column: minimize over beta with the
            // W11 block as the quadratic form, by cyclic coordinate descent.
            for (int inner = 0; inner < 200; ++inner) {
                double inner_change = 0.0;
                for (int k = 0; k < p; ++k) {
                    if (k == j) continue;
                    double grad = s12[static_cast<std::size_t>(k)];
                    for (int l = 0; l < p; ++l) {
                        if (l == j || l == k) continue;
                        grad -= W[static_cast<std::size_t>(k) * n + l] *
                                beta[static_cast<std::size_t>(l)];
                    }
                    const double denom = W[static_cast<std::size_t>(k) * n + k];
                    const double nb = soft_threshold(grad, lambda) / denom;
                    inner_change = std::max(
                        inner_change, std::fabs(nb - beta[static_cast<std::size_t>(k)]));
                    beta[static_cast<std::size_t>(k)] = nb;
                }
                if (inner_change < 0.1 * thr) break;
            }
            for (int k = 0; k < p; ++k) {
                if (k == j) {
                    w12[static_cast<std::size_t>(k)] = W[static_cast<std::size_t>(j) * n + j];
                    continue;
                }
                double v = 0.0;
                for (int l = 0; l < p; ++l) {
                    if (l == j) continue;
                    v += W[static_cast<std::size_t>(k) * n + l] *
                         beta[static_cast<std::size_t>(l)];
                }
                w12[static_cast<std::size_t>(k)] = v;
            }
            for (int k = 0; k < p; ++k) {
                if (k == j) continue;
                max_change = std::max(
                    max_change, std::fabs(w12[static_cast<std::size_t>(k)] -
                                          W[static_cast<std::size_t>(k) * n + j]));
                W[static_cast<std::size_t>(k) * n + j] = w12[static_cast<std::size_t>(k)];
                W[static_cast<std::size_t>(j) * n + k] = w12[static_cast<std::size_t>(k)];
                B[static_cast<std::size_t>(k) * n + j] = beta[static_cast<std::size_t>(k)];
            }
        }
        if (max_change < thr) return true;
    }
    return false;
}

// Recover Theta from the fitted W and regression coefficients:
// theta_jj = 1/(w_jj - w12' beta), theta_kj = -beta_k * theta_jj.
inline SymMatrix glasso_recover(const std::vector<double>& W, const std::vector<double>& B,
                                int p, bool& healthy) {
    const std::size_t n = static_cast<std::size_t>(p);
    std::vector<double> theta(n * n, 0.0);
    for (int j = 0; j < p; ++j) {
        double dot = 0.0;
        for (int k = 0; k < p; ++k) {
            if (k == j) continue;
            dot += W[static_cast<std::size_t>(k) * n + j] *
                   B[static_cast<std::size_t>(k) * n + j];
        }
        double den = W[static_cast<std::size_t>(j) * n + j] - dot;
        if (den <= 0.0) {
            healthy = false;
            den = 1e-12;
        }
        const double tjj = 1.0 / den;
        theta[static_cast<std::size_t>(j) * n + j] = tjj;
        for (int k = 0; k < p; ++k) {
            if (k == j) continue;
            theta[static_cast<std::size_t>(k) * n + j] -=
                B[static_cast<std::size_t>(k) * n + j] * tjj / 2.0;
            theta[static_cast<std::size_t>(j) * n + k] -=
                B[static_cast<std::size_t>(k) * n + j] * tjj / 2.0;
        }
    }
    // Entries were accumulated as the symmetrized average already.
    return SymMatrix(p, theta);
}

inline Adjacency glasso_adjacency(const SymMatrix& theta) {
    const int p = theta.dim();
    Adjacency a(p);
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j)
            if (std::fabs(theta(i, j)) > 1e-8) a.add_edge(i, j);
    return a;
}

} // namespace detail

inline GlassoResult graphical_lasso(const SymMatrix& s, double lambda, double tol = 1e-6,
                                    int max_iter = 500) {
    if (lambda < 0.0) throw std::invalid_argument("graphical_lasso: lambda must be >= 0");
    if (tol <= 0.0 || max_iter < 1)
        throw std::invalid_argument("graphical_lasso: bad convergence settings");
    const int p = s.dim();
    for (int i = 0; i < p; ++i)
        if (s(i, i) <= 0.0)
            throw NotPositiveDefinite("graphical_lasso: nonpositive diagonal entry");

    std::vector<double> W = s.data();
    std::vector<double> B(static_cast<std::size_t>(p) * p, 0.0);
    GlassoResult res;
    int iters = 0;
    res.converged = detail::glasso_fit(s.data(), p, lambda, tol, max_iter, W, B, iters);
    res.iterations = iters;
    bool healthy = true;
    res.precision = detail::glasso_recover(W, B, p, healthy);
    if (!healthy) res.converged = false;
    res.outcome.adjacency = detail::glasso_adjacency(res.precision);
    res.outcome.method = "graphical_lasso";
    res.outcome.chosen_lambda = lambda;
    return res;
}

namespace detail {

inline std::vector<double> cov_of_rows(const SampleSet& x, const std::vector<int>& rows) {
    const int p = x.cols;
    std::vector<double> s(static_cast<std::size_t>(p) * p, 0.0);
    for (int t : rows)
        for (int i = 0; i < p; ++i) {
            const double xi = x(t, i);
            for (int j = i; j < p; ++j)
                s[static_cast<std::size_t>(i) * p + j] += xi * x(t, j);
        }
    const double inv = 1.0 / static_cast<double>(rows.size());
    for (int i = 0; i < p; ++i)
        for (int j = i; j < p; ++j) {
            s[static_cast<std::size_t>(i) * p + j] *= inv;
            s[static_cast<std::size_t>(j) * p + i] = s[static_cast<std::size_t>(i) * p + j];
        }
    return s;
}

} // namespace detail

// K-fold cross-validated lambda choice by held-out Gaussian log-likelihood,
// then a refit on all rows. Folds are contiguous blocks of a seeded shuffle
// so the same sample set always yields the same split.
inline GlassoResult glasso_cv(const SampleSet& x, const DetectionParams& params = {}) {
    validate(params);
    const int K = params.cv_folds;
    if (x.rows < 2 * K)
        throw std::invalid_argument("glasso_cv: need at least 2*cv_folds rows");
    const int p = x.cols;

    std::vector<int> perm(static_cast<std::size_t>(x.rows));
    for (int t = 0; t < x.rows; ++t) perm[static_cast<std::size_t>(t)] = t;
    RngStream rng(derive_seed(x.seed, "glasso_cv_folds"));
    for (int t = x.rows - 1; t > 0; --t)
        std::swap(perm[static_cast<std::size_t>(t)],
                  perm[rng.below(static_cast<std::uint64_t>(t) + 1)]);

    std::vector<double> grid = params.lambda_grid;
    std::sort(grid.begin(), grid.end());
    std::vector<double> score(grid.size(), 0.0);

    std::size_t pos = 0;
    for (int k = 0; k < K; ++k) {
        const std::size_t fold_size =
            static_cast<std::size_t>(x.rows / K) + (k < x.rows % K ? 1 : 0);
        std::vector<int> test(perm.begin() + static_cast<std::ptrdiff_t>(pos),
                              perm.begin() + static_cast<std::ptrdiff_t>(pos + fold_size));
        std::vector<int> train;
        train.reserve(perm.size() - fold_size);
        train.insert(train.end(), perm.begin(),
                     perm.begin() + static_cast<std::ptrdiff_t>(pos));
        train.insert(train.end(), perm.begin() + static_cast<std::ptrdiff_t>(pos + fold_size),
                     perm.end());
        pos += fold_size;

        const std::vector<double> s_train = detail::cov_of_rows(x, train);
        const std::vector<double> s_test = detail::cov_of_rows(x, test);

        std::vector<double> W = s_train;
        std::vector<double> B(static_cast<std::size_t>(p) * p, 0.0);
        // Descend the grid from the strongest penalty so each fit
        // warm-starts the next.
        for (std::size_t gi = grid.size(); gi-- > 0;) {
            int iters = 0;
            detail::glasso_fit(s_train, p, grid[gi], 1e-6, 500, W, B, iters);
            bool healthy = true;
            const SymMatrix theta = detail::glasso_recover(W, B, p, healthy);
            double fit;
            if (!healthy) {
                fit = -1e300;
            } else {
                try {
                    const CholeskyFactor chol = cholesky(theta);
                    double tr = 0.0;
                    for (int i = 0; i < p; ++i)
                        for (int j = 0; j < p; ++j)
                            tr += s_test[static_cast<std::size_t>(i) * p + j] * theta(i, j);
                    fit = chol.log_det() - tr;
                } catch (const NotPositiveDefinite&) {
                    fit = -1e300;
                }
            }
            score[gi] += fit;
        }
    }

    std::size_t best = 0;
    for (std::size_t gi = 0; gi < grid.size(); ++gi)
        if (score[gi] >= score[best]) best = gi;

    GlassoResult res = graphical_lasso(empirical_cov(x), grid[best]);
    res.outcome.method = "glasso_cv";
    res.outcome.chosen_lambda = grid[best];
    return res;
}

} // namespace connbench
