#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "connbench/errors.hpp"
#include "connbench/gaussian.hpp"
#include "connbench/sym_matrix.hpp"

namespace connbench {

enum class ConnectivityKind {
    empirical_cov,
    empirical_corr,
    empirical_pcorr,
    lw_corr,
    lw_pcorr,
};

inline const char* to_string(ConnectivityKind k) {
    switch (k) {
        case ConnectivityKind::empirical_cov: return "empirical_cov";
        case ConnectivityKind::empirical_corr: return "empirical_corr";
        case ConnectivityKind::empirical_pcorr: return "empirical_pcorr";
        case ConnectivityKind::lw_corr: return "lw_corr";
        case ConnectivityKind::lw_pcorr: return "lw_pcorr";
    }
    return "?";
}

inline ConnectivityKind connectivity_kind_from_string(const std::string& s) {
    if (s == "empirical_cov") return ConnectivityKind::empirical_cov;
    if (s == "empirical_corr") return ConnectivityKind::empirical_corr;
    if (s == "empirical_pcorr") return ConnectivityKind::empirical_pcorr;
    if (s == "lw_corr") return ConnectivityKind::lw_corr;
    if (s == "lw_pcorr") return ConnectivityKind::lw_pcorr;
    throw std::invalid_argument("unknown connectivity kind: " + s);
}

inline bool correlation_like(ConnectivityKind k) {
    return k != ConnectivityKind::empirical_cov;
}

// A scored connectivity estimate. Correlation-like kinds carry a unit
// diagonal and off-diagonal values in [-1, 1]; the raw covariance kind is
// unconstrained.
struct ConnectivityMatrix {
    SymMatrix values;
    ConnectivityKind kind = ConnectivityKind::empirical_cov;

    ConnectivityMatrix() = default;

    ConnectivityMatrix(SymMatrix v, ConnectivityKind k) : values(std::move(v)), kind(k) {
        if (!correlation_like(kind)) return;
        const int p = values.dim();
        for (int i = 0; i < p; ++i) {
            if (std::fabs(values(i, i) - 1.0) > 1e-9)
                throw std::invalid_argument("ConnectivityMatrix: diagonal must be 1");
            for (int j = i + 1; j < p; ++j)
                if (std::fabs(values(i, j)) > 1.0 + 1e-9)
                    throw std::invalid_argument("ConnectivityMatrix: entry outside [-1, 1]");
        }
    }

    int dim() const { return values.dim(); }
    double operator()(int i, int j) const { return values(i, j); }
};

// Second-moment matrix X^T X / T. The sampling model is zero-mean, so no
// centering anywhere in the pipeline.
inline SymMatrix empirical_cov(const SampleSet& x) {
    const int p = x.cols;
    const int T = x.rows;
    SymMatrix s(p);
    for (int i = 0; i < p; ++i)
        for (int j = i; j < p; ++j) {
            double acc = 0.0;
            for (int t = 0; t < T; ++t) acc += x(t, i) * x(t, j);
            s.set(i, j, acc / T);
        }
    return s;
}

inline ConnectivityMatrix cov_to_corr(const SymMatrix& s,
                                      ConnectivityKind kind = ConnectivityKind::empirical_corr) {
    const int p = s.dim();
    for (int i = 0; i < p; ++i)
        if (s(i, i) <= 0.0)
            throw ZeroVariance("cov_to_corr: nonpositive variance at " + std::to_string(i));
    SymMatrix r(p);
    for (int i = 0; i < p; ++i) {
        r.set(i, i, 1.0);
        for (int j = i + 1; j < p; ++j) {
            double v = s(i, j) / std::sqrt(s(i, i) * s(j, j));
            v = std::clamp(v, -1.0, 1.0);
            r.set(i, j, v);
        }
    }
    return ConnectivityMatrix(std::move(r), kind);
}

// Partial correlations from the inverse of the correlation-normalized
// matrix: p_ij = -w_ij / sqrt(w_ii w_jj). Zero pattern matches the zero
// pattern of the precision matrix.
inline ConnectivityMatrix partial_corr(const SymMatrix& s,
                                       ConnectivityKind kind = ConnectivityKind::empirical_pcorr) {
    const ConnectivityMatrix r = cov_to_corr(s, ConnectivityKind::empirical_corr);
    const SymMatrix w = inverse_spd(r.values);
    const int p = s.dim();
    SymMatrix out(p);
    for (int i = 0; i < p; ++i) {
        out.set(i, i, 1.0);
        for (int j = i + 1; j < p; ++j) {
            double v = -w(i, j) / std::sqrt(w(i, i) * w(j, j));
            v = std::clamp(v, -1.0, 1.0);
            out.set(i, j, v);
        }
    }
    return ConnectivityMatrix(std::move(out), kind);
}

struct LedoitWolfEstimate {
    SymMatrix covariance;
    double shrinkage = 0.0;
    double mu = 0.0;
};

// Shrinkage toward the scaled identity mu I. The optimal intensity estimate
// is (1/T^2) sum_t ||x_t x_t^T - S||_F^2 over ||S - mu I||_F^2, clipped to
// [0, 1]; the normalizing 1/p of the original inner product cancels in the
// ratio.
inline LedoitWolfEstimate ledoit_wolf(const SampleSet& x) {
    const int p = x.cols;
    const int T = x.rows;
    const SymMatrix s = empirical_cov(x);

    double mu = 0.0;
    for (int i = 0; i < p; ++i) mu += s(i, i);
    mu /= p;

    double d2 = 0.0;
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) {
            const double v = s(i, j) - (i == j ? mu : 0.0);
            d2 += v * v;
        }

    double b2 = 0.0;
    for (int t = 0; t < T; ++t)
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j) {
                const double v = x(t, i) * x(t, j) - s(i, j);
                b2 += v * v;
            }
    b2 /= static_cast<double>(T) * T;

    LedoitWolfEstimate out;
    out.mu = mu;
    out.shrinkage = d2 > 0.0 ? std::clamp(b2 / d2, 0.0, 1.0) : 0.0;
    SymMatrix cov(p);
    for (int i = 0; i < p; ++i)
        for (int j = i; j < p; ++j) {
            const double target = (i == j) ? mu : 0.0;
            cov.set(i, j, out.shrinkage * target + (1.0 - out.shrinkage) * s(i, j));
        }
    out.covariance = std::move(cov);
    return out;
}

inline double fisher_z(double r) {
    if (!(r > -1.0 && r < 1.0))
        throw std::domain_error("fisher_z: argument must lie in (-1, 1)");
    return std::atanh(r);
}

} // namespace connbench
