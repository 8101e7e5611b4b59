#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "connbench/errors.hpp"

namespace connbench {

// How a matrix is to be read downstream: as a covariance or as a precision
// (inverse covariance). Generation and sampling honour this tag.
enum class MatrixMode { covariance, precision };

inline const char* to_string(MatrixMode m) {
    return m == MatrixMode::covariance ? "covariance" : "precision";
}

inline MatrixMode matrix_mode_from_string(const std::string& s) {
    if (s == "covariance") return MatrixMode::covariance;
    if (s == "precision") return MatrixMode::precision;
    throw std::invalid_argument("unknown matrix mode: " + s);
}

// Dense symmetric matrix, row-major p*p storage. The two triangles are kept
// bit-identical: construction from raw entries symmetrizes via (M + M^T)/2
// and rejects asymmetry beyond 1e-12.
class SymMatrix {
public:
    SymMatrix() = default;

    explicit SymMatrix(int p) : p_(p), a_(static_cast<std::size_t>(p) * p, 0.0) {
        if (p < 1) throw std::invalid_argument("SymMatrix: dimension must be >= 1");
    }

    SymMatrix(int p, std::vector<double> entries) : p_(p), a_(std::move(entries)) {
        if (p < 1) throw std::invalid_argument("SymMatrix: dimension must be >= 1");
        if (a_.size() != static_cast<std::size_t>(p) * p)
            throw DimensionMismatch("SymMatrix: entry count does not match dimension");
        double worst = 0.0;
        for (int i = 0; i < p_; ++i)
            for (int j = i + 1; j < p_; ++j)
                worst = std::max(worst, std::fabs(at(i, j) - at(j, i)));
        if (worst > 1e-12)
            throw std::invalid_argument("SymMatrix: input asymmetric beyond 1e-12");
        for (int i = 0; i < p_; ++i)
            for (int j = i + 1; j < p_; ++j) {
                const double v = 0.5 * (at(i, j) + at(j, i));
                at(i, j) = v;
                at(j, i) = v;
            }
    }

    static SymMatrix identity(int p) {
        SymMatrix m(p);
        for (int i = 0; i < p; ++i) m.at(i, i) = 1.0;
        return m;
    }

    static SymMatrix diagonal(const std::vector<double>& d) {
        SymMatrix m(static_cast<int>(d.size()));
        for (int i = 0; i < m.p_; ++i) m.at(i, i) = d[static_cast<std::size_t>(i)];
        return m;
    }

    int dim() const { return p_; }

    double operator()(int i, int j) const { return at(i, j); }

    void set(int i, int j, double v) {
        at(i, j) = v;
        at(j, i) = v;
    }

    const std::vector<double>& data() const { return a_; }

    bool operator==(const SymMatrix& o) const { return p_ == o.p_ && a_ == o.a_; }

private:
    double& at(int i, int j) { return a_[static_cast<std::size_t>(i) * p_ + j]; }
    double at(int i, int j) const { return a_[static_cast<std::size_t>(i) * p_ + j]; }

    int p_ = 0;
    std::vector<double> a_;
};

inline double frobenius_norm(const SymMatrix& m) {
    double s = 0.0;
    for (double v : m.data()) s += v * v;
    return std::sqrt(s);
}

inline double frobenius_distance(const SymMatrix& a, const SymMatrix& b) {
    if (a.dim() != b.dim())
        throw DimensionMismatch("frobenius_distance: dimensions differ");
    double s = 0.0;
    const auto& x = a.data();
    const auto& y = b.data();
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double d = x[k] - y[k];
        s += d * d;
    }
    return std::sqrt(s);
}

namespace detail {

// Householder reduction of a real symmetric matrix (row-major in z) to
// tridiagonal form; the orthogonal transform accumulates into z.
inline void tred2(std::vector<double>& z, int n, std::vector<double>& d,
                  std::vector<double>& e) {
    auto a = [&](int i, int j) -> double& {
        return z[static_cast<std::size_t>(i) * n + j];
    };
    for (int i = n - 1; i >= 1; --i) {
        const int l = i - 1;
        double h = 0.0;
        if (l > 0) {
            double scale = 0.0;
            for (int k = 0; k <= l; ++k) scale += std::fabs(a(i, k));
            if (scale == 0.0) {
                e[i] = a(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    a(i, k) /= scale;
                    h += a(i, k) * a(i, k);
                }
                double f = a(i, l);
                double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                a(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    a(j, i) = a(i, j) / h;
                    g = 0.0;
                    for (int k = 0; k <= j; ++k) g += a(j, k) * a(i, k);
                    for (int k = j + 1; k <= l; ++k) g += a(k, j) * a(i, k);
                    e[j] = g / h;
                    f += e[j] * a(i, j);
                }
                const double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = a(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (int k = 0; k <= j; ++k)
                        a(j, k) -= f * e[k] + g * a(i, k);
                }
            }
        } else {
            e[i] = a(i, l);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for (int i = 0; i < n; ++i) {
        const int l = i - 1;
        if (d[i] != 0.0) {
            for (int j = 0; j <= l; ++j) {
                double g = 0.0;
                for (int k = 0; k <= l; ++k) g += a(i, k) * a(k, j);
                for (int k = 0; k <= l; ++k) a(k, j) -= g * a(k, i);
            }
        }
        d[i] = a(i, i);
        a(i, i) = 1.0;
        for (int j = 0; j <= l; ++j) a(j, i) = a(i, j) = 0.0;
    }
}

// Implicit-shift QL iteration on the tridiagonal (d, e); plane rotations are
// applied to the columns of z so its columns end up as eigenvectors.
inline void tqli(std::vector<double>& d, std::vector<double>& e,
                 std::vector<double>& z, int n) {
    auto zz = [&](int i, int j) -> double& {
        return z[static_cast<std::size_t>(i) * n + j];
    };
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= std::numeric_limits<double>::epsilon() * dd)
                    break;
            }
            if (m != l) {
                if (iter++ == 60)
                    throw std::runtime_error("eig_sym: QL iteration failed to converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i = m - 1;
                for (; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (int k = 0; k < n; ++k) {
                        f = zz(k, i + 1);
                        zz(k, i + 1) = s * zz(k, i) + c * f;
                        zz(k, i) = c * zz(k, i) - s * f;
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

} // namespace detail

// Eigendecomposition result. values are ascending; vector(i, k) is component
// i of the eigenvector paired with values[k] (columns are orthonormal).
struct EigResult {
    std::vector<double> values;
    std::vector<double> vectors;
    int p = 0;

    double vector(int i, int k) const {
        return vectors[static_cast<std::size_t>(i) * p + k];
    }
};

inline EigResult eig_sym(const SymMatrix& m) {
    const int n = m.dim();
    EigResult out;
    out.p = n;
    std::vector<double> z = m.data();
    std::vector<double> d(static_cast<std::size_t>(n), 0.0);
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    detail::tred2(z, n, d, e);
    detail::tqli(d, e, z, n);

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return d[static_cast<std::size_t>(a)] < d[static_cast<std::size_t>(b)]; });

    out.values.resize(static_cast<std::size_t>(n));
    out.vectors.resize(static_cast<std::size_t>(n) * n);
    for (int k = 0; k < n; ++k) {
        const int src = order[static_cast<std::size_t>(k)];
        out.values[static_cast<std::size_t>(k)] = d[static_cast<std::size_t>(src)];
        for (int i = 0; i < n; ++i)
            out.vectors[static_cast<std::size_t>(i) * n + k] =
                z[static_cast<std::size_t>(i) * n + src];
    }
    return out;
}

// Lower-triangular Cholesky factor, with triangular solve helpers.
struct CholeskyFactor {
    int p = 0;
    std::vector<double> l; // row-major, upper triangle zero

    double operator()(int i, int j) const {
        return l[static_cast<std::size_t>(i) * p + j];
    }

    // Solve L y = b in place.
    void solve_lower(std::vector<double>& b) const {
        for (int i = 0; i < p; ++i) {
            double s = b[static_cast<std::size_t>(i)];
            for (int k = 0; k < i; ++k)
                s -= (*this)(i, k) * b[static_cast<std::size_t>(k)];
            b[static_cast<std::size_t>(i)] = s / (*this)(i, i);
        }
    }

    // Solve L^T x = b in place.
    void solve_upper_transposed(std::vector<double>& b) const {
        for (int i = p - 1; i >= 0; --i) {
            double s = b[static_cast<std::size_t>(i)];
            for (int k = i + 1; k < p; ++k)
                s -= (*this)(k, i) * b[static_cast<std::size_t>(k)];
            b[static_cast<std::size_t>(i)] = s / (*this)(i, i);
        }
    }

    double log_det() const {
        double s = 0.0;
        for (int i = 0; i < p; ++i) s += std::log((*this)(i, i));
        return 2.0 * s;
    }
};

// Throws NotPositiveDefinite when a pivot drops to 1e-12 or below.
inline CholeskyFactor cholesky(const SymMatrix& m) {
    const int p = m.dim();
    CholeskyFactor f;
    f.p = p;
    f.l.assign(static_cast<std::size_t>(p) * p, 0.0);
    auto L = [&](int i, int j) -> double& {
        return f.l[static_cast<std::size_t>(i) * p + j];
    };
    for (int j = 0; j < p; ++j) {
        double s = m(j, j);
        for (int k = 0; k < j; ++k) s -= L(j, k) * L(j, k);
        if (s <= 1e-12)
            throw NotPositiveDefinite("cholesky: pivot " + std::to_string(j) +
                                      " is " + std::to_string(s));
        L(j, j) = std::sqrt(s);
        for (int i = j + 1; i < p; ++i) {
            double t = m(i, j);
            for (int k = 0; k < j; ++k) t -= L(i, k) * L(j, k);
            L(i, j) = t / L(j, j);
        }
    }
    return f;
}

inline SymMatrix inverse_spd(const SymMatrix& m) {
    const int p = m.dim();
    const CholeskyFactor f = cholesky(m);
    std::vector<double> inv(static_cast<std::size_t>(p) * p, 0.0);
    std::vector<double> col(static_cast<std::size_t>(p), 0.0);
    for (int j = 0; j < p; ++j) {
        std::fill(col.begin(), col.end(), 0.0);
        col[static_cast<std::size_t>(j)] = 1.0;
        f.solve_lower(col);
        f.solve_upper_transposed(col);
        for (int i = 0; i < p; ++i)
            inv[static_cast<std::size_t>(i) * p + j] = col[static_cast<std::size_t>(i)];
    }
    // Enforce exact symmetry; the two solves agree only to rounding.
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j) {
            const double v = 0.5 * (inv[static_cast<std::size_t>(i) * p + j] +
                                    inv[static_cast<std::size_t>(j) * p + i]);
            inv[static_cast<std::size_t>(i) * p + j] = v;
            inv[static_cast<std::size_t>(j) * p + i] = v;
        }
    return SymMatrix(p, std::move(inv));
}

// Nearest (Frobenius) matrix whose eigenvalues are all >= floor. Returns the
// input unchanged, bit for bit, when it already satisfies the bound.
inline SymMatrix project_psd(const SymMatrix& m, double floor_value) {
    const EigResult eg = eig_sym(m);
    if (eg.values.front() >= floor_value) return m;
    const int p = m.dim();
    std::vector<double> lam(eg.values);
    for (double& v : lam) v = std::max(v, floor_value);
    std::vector<double> out(static_cast<std::size_t>(p) * p, 0.0);
    for (int i = 0; i < p; ++i)
        for (int j = i; j < p; ++j) {
            double s = 0.0;
            for (int k = 0; k < p; ++k)
                s += lam[static_cast<std::size_t>(k)] * eg.vector(i, k) * eg.vector(j, k);
            out[static_cast<std::size_t>(i) * p + j] = s;
            out[static_cast<std::size_t>(j) * p + i] = s;
        }
    return SymMatrix(p, std::move(out));
}

} // namespace connbench
