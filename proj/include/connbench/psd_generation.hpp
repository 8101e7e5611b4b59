#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "connbench/adjacency.hpp"
#include "connbench/chordal.hpp"
#include "connbench/errors.hpp"
#include "connbench/io_util.hpp"
#include "connbench/rng.hpp"
#include "connbench/sym_matrix.hpp"
#include "connbench/thread_pool.hpp"

namespace connbench {

struct GenerationConstraints {
    int p;
    Adjacency support;
    double b;
    MatrixMode mode = MatrixMode::covariance;
    double epsilon = 1e-4;
    bool unit_diagonal = true;
};

inline void validate(const GenerationConstraints& c) {
    if (c.p < 1) throw std::invalid_argument("GenerationConstraints: p must be >= 1");
    if (!(c.b > 0.0 && c.b < 1.0))
        throw std::invalid_argument("GenerationConstraints: b must lie in (0, 1)");
    if (!(c.epsilon > 0.0))
        throw std::invalid_argument("GenerationConstraints: epsilon must be positive");
    if (c.support.node_count() != c.p)
        throw DimensionMismatch("GenerationConstraints: support dimension != p");
}

enum class GenerationStatus { feasible, infeasible };

struct ConstraintResiduals {
    double pattern_max_abs = 0.0; // max |m_ij| over off-support pairs
    double mean_shortfall = 0.0;  // max(0, b - support mean)
    double eig_shortfall = 0.0;   // max(0, epsilon - min eigenvalue)
    double diag_max_dev = 0.0;    // max |m_ii - 1| when unit_diagonal
};

struct GenerationResult {
    SymMatrix matrix;
    GenerationStatus status = GenerationStatus::infeasible;
    int iterations = 0;
    ConstraintResiduals residuals;
};

struct DykstraOptions {
    int max_cycles = 50000;
    double change_tol = 1e-9;
    double pattern_tol = 1e-8;
    double diag_tol = 1e-9;
    double mean_tol = 1e-6;
    double eig_slack = 1e-9;
    // Infeasibility heuristic: residual above stall_residual that has not
    // shrunk by stall_factor across stall_window consecutive cycles.
    int stall_window = 1000;
    double stall_residual = 1e-6;
    double stall_factor = 1.01;
};

// Arbitrary target to project from: unit diagonal, i.i.d. U[0.2, 0.9] on the
// support, zero elsewhere.
inline SymMatrix make_target(const Adjacency& support, std::uint64_t seed) {
    RngStream rng(derive_seed(seed, "make_target"));
    SymMatrix m = SymMatrix::identity(support.node_count());
    for (const auto& [i, j] : support.edges()) m.set(i, j, rng.uniform(0.2, 0.9));
    return m;
}

namespace detail {

struct DykstraDiagnostics {
    double pattern = 0.0;
    double diag_dev = 0.0;
    double mean_shortfall = 0.0;
};

inline double offdiag_mean(const std::vector<double>& x, int p, int edge_count) {
    double s = 0.0;
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
            if (i != j) s += x[static_cast<std::size_t>(i) * p + j];
    return s / (2.0 * edge_count);
}

} // namespace detail

// Dykstra's alternating projections onto
//   C1 = {min eigenvalue >= epsilon},
//   C2 = {zeros off support; unit diagonal if requested},
//   C3 = {off-diagonal mean over the support >= b},
// cycling C2 -> C3 -> C1 so the returned iterate is always PD. Correction
// terms live per constraint set, which is what makes the limit the Euclidean
// projection of the target rather than just some point in the intersection.
//
// Infeasibility cannot be certified by alternating projections; it is
// diagnosed by the stall rule in DykstraOptions and reported as a status,
// not an exception. The stall test fires as soon as its window shows no
// progress, which spares infeasible cells the full cycle cap.
inline GenerationResult dykstra_project(const SymMatrix& target,
                                        const GenerationConstraints& c,
                                        const DykstraOptions& opt = {}) {
    validate(c);
    const int p = c.p;
    if (target.dim() != p)
        throw DimensionMismatch("dykstra_project: target dimension != p");
    const int ne = c.support.edge_count();
    if (ne < 1)
        throw std::invalid_argument("dykstra_project: support needs at least one edge");

    const std::size_t n = static_cast<std::size_t>(p) * p;
    std::vector<char> on_support(n, 0);
    for (const auto& [i, j] : c.support.edges()) {
        on_support[static_cast<std::size_t>(i) * p + j] = 1;
        on_support[static_cast<std::size_t>(j) * p + i] = 1;
    }

    std::vector<double> x = target.data();
    std::vector<double> q1(n, 0.0), q2(n, 0.0), q3(n, 0.0);
    std::vector<double> y(n), prev(n);
    std::vector<double> history;
    history.reserve(1024);

    auto support_mean = [&](const std::vector<double>& v) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            if (on_support[k]) s += v[k];
        return s / (2.0 * ne);
    };

    GenerationResult out;
    int cycle = 0;
    bool converged = false;
    detail::DykstraDiagnostics diag;

    while (cycle < opt.max_cycles) {
        ++cycle;
        prev = x;

        // C2: coordinate masking.
        for (std::size_t k = 0; k < n; ++k) y[k] = x[k] + q2[k];
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j) {
                const std::size_t k = static_cast<std::size_t>(i) * p + j;
                double v = y[k];
                if (i == j) {
                    if (c.unit_diagonal) v = 1.0;
                } else if (!on_support[k]) {
                    v = 0.0;
                }
                q2[k] = y[k] - v;
                x[k] = v;
            }

        // C3: half-space on the support mean. The iterate is supported on
        // the pattern here, so shifting support coordinates uniformly is the
        // exact Euclidean projection.
        for (std::size_t k = 0; k < n; ++k) y[k] = x[k] + q3[k];
        {
            const double mean = support_mean(y);
            if (mean >= c.b) {
                for (std::size_t k = 0; k < n; ++k) {
                    q3[k] = 0.0;
                    x[k] = y[k];
                }
            } else {
                const double shift = c.b - mean;
                for (std::size_t k = 0; k < n; ++k) {
                    const double v = on_support[k] ? y[k] + shift : y[k];
                    q3[k] = y[k] - v;
                    x[k] = v;
                }
            }
        }

        // C1: spectral floor.
        for (std::size_t k = 0; k < n; ++k) y[k] = x[k] + q1[k];
        {
            SymMatrix ym(p, y);
            SymMatrix proj = project_psd(ym, c.epsilon);
            const auto& pd = proj.data();
            for (std::size_t k = 0; k < n; ++k) {
                q1[k] = y[k] - pd[k];
                x[k] = pd[k];
            }
        }

        double max_change = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            max_change = std::max(max_change, std::fabs(x[k] - prev[k]));

        diag = detail::DykstraDiagnostics{};
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j) {
                const std::size_t k = static_cast<std::size_t>(i) * p + j;
                if (i == j) {
                    if (c.unit_diagonal)
                        diag.diag_dev = std::max(diag.diag_dev, std::fabs(x[k] - 1.0));
                } else if (!on_support[k]) {
                    diag.pattern = std::max(diag.pattern, std::fabs(x[k]));
                }
            }
        diag.mean_shortfall = std::max(0.0, c.b - detail::offdiag_mean(x, p, ne));

        const double residual = std::max({diag.pattern, diag.diag_dev, diag.mean_shortfall});
        history.push_back(residual);

        if (max_change < opt.change_tol && diag.pattern <= opt.pattern_tol &&
            diag.diag_dev <= opt.diag_tol && diag.mean_shortfall <= opt.mean_tol) {
            converged = true;
            break;
        }

        if (cycle > opt.stall_window && residual > opt.stall_residual) {
            const double then = history[static_cast<std::size_t>(cycle - 1 - opt.stall_window)];
            if (then < residual * opt.stall_factor) break;
        }
    }

    out.matrix = SymMatrix(p, x);
    out.iterations = cycle;
    out.residuals.pattern_max_abs = diag.pattern;
    out.residuals.diag_max_dev = diag.diag_dev;
    out.residuals.mean_shortfall = diag.mean_shortfall;
    const EigResult eg = eig_sym(out.matrix);
    out.residuals.eig_shortfall = std::max(0.0, c.epsilon - eg.values.front());
    out.status = (converged && out.residuals.eig_shortfall <= opt.eig_slack)
                     ? GenerationStatus::feasible
                     : GenerationStatus::infeasible;
    return out;
}

struct FeasibilityCell {
    double b = 0.0;
    double d = 0.0;
    int seeds = 0;
    int feasible = 0;
};

// One (graph, target) attempt per seed and cell; infeasibility is data here.
inline std::vector<FeasibilityCell> feasibility_map(int p,
                                                    const std::vector<double>& b_grid,
                                                    const std::vector<double>& d_grid,
                                                    int seeds_per_cell,
                                                    std::uint64_t seed = 0,
                                                    int threads = 1,
                                                    const DykstraOptions& opt = {}) {
    if (b_grid.empty() || d_grid.empty())
        throw std::invalid_argument("feasibility_map: empty grid");
    for (double b : b_grid)
        if (!(b > 0.0 && b < 1.0))
            throw std::invalid_argument("feasibility_map: b outside (0, 1)");
    for (double d : d_grid)
        if (!(d > 0.0 && d < 1.0))
            throw std::invalid_argument("feasibility_map: d outside (0, 1)");
    if (seeds_per_cell < 1)
        throw std::invalid_argument("feasibility_map: seeds_per_cell must be >= 1");

    std::vector<FeasibilityCell> cells(b_grid.size() * d_grid.size());
    parallel_for(cells.size(), threads, [&](std::size_t idx) {
        const std::size_t bi = idx / d_grid.size();
        const std::size_t di = idx % d_grid.size();
        FeasibilityCell cell;
        cell.b = b_grid[bi];
        cell.d = d_grid[di];
        cell.seeds = seeds_per_cell;
        for (int s = 0; s < seeds_per_cell; ++s) {
            const Adjacency g =
                random_chordal(p, cell.d, derive_seed(seed, "fmap_graph", bi, di, s));
            if (g.edge_count() == 0) continue; // empty support cannot reach b > 0
            const SymMatrix target =
                make_target(g, derive_seed(seed, "fmap_target", bi, di, s));
            GenerationConstraints c{p, g, cell.b, MatrixMode::covariance, 1e-4, true};
            if (dykstra_project(target, c, opt).status == GenerationStatus::feasible)
                ++cell.feasible;
        }
        cells[idx] = cell;
    });
    return cells;
}

inline std::string feasibility_csv(const std::vector<FeasibilityCell>& cells) {
    std::ostringstream os;
    os << "b,d,seeds,feasible\n";
    for (const auto& c : cells)
        os << fmt_g17(c.b) << "," << fmt_g17(c.d) << "," << c.seeds << ","
           << c.feasible << "\n";
    return os.str();
}

// Text matrix format: header `p <p> [key value]...`, then p rows of
// full-precision entries.
inline void write_matrix(std::ostream& os, const SymMatrix& m,
                         const std::vector<std::pair<std::string, std::string>>& header = {}) {
    os << "p " << m.dim();
    for (const auto& [k, v] : header) os << " " << k << " " << v;
    os << "\n";
    for (int i = 0; i < m.dim(); ++i) {
        for (int j = 0; j < m.dim(); ++j) {
            if (j) os << " ";
            os << fmt_g17(m(i, j));
        }
        os << "\n";
    }
}

struct MatrixFile {
    SymMatrix matrix;
    std::map<std::string, std::string> header;
};

inline MatrixFile read_matrix(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw SchemaMismatch("matrix file: missing header");
    std::istringstream hs(line);
    std::string tag;
    int p = 0;
    if (!(hs >> tag >> p) || tag != "p" || p < 1)
        throw SchemaMismatch("matrix file: header must start with 'p <dim>'");
    MatrixFile out;
    std::string k, v;
    while (hs >> k >> v) out.header[k] = v;
    std::vector<double> entries(static_cast<std::size_t>(p) * p);
    for (auto& e : entries)
        if (!(is >> e)) throw SchemaMismatch("matrix file: truncated entries");
    out.matrix = SymMatrix(p, std::move(entries));
    return out;
}

} // namespace connbench
