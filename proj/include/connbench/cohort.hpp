#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "connbench/adjacency.hpp"
#include "connbench/chordal.hpp"
#include "connbench/config.hpp"
#include "connbench/errors.hpp"
#include "connbench/io_util.hpp"
#include "connbench/psd_generation.hpp"
#include "connbench/thread_pool.hpp"

namespace connbench {

// b and d are properties of the matrix actually produced: the mean of the
// nonzero off-diagonal coefficients and the support's edge density. The
// requested signal floor survives as b_target; the two differ whenever the
// mean constraint is slack against the sampled target.
struct CohortEntry {
    std::string id;
    double b = 0.0;
    double b_target = 0.0;
    double d = 0.0;
    SymMatrix matrix{1};
    Adjacency graph{1};
    ConstraintResiduals residuals;
    int iterations = 0;
};

namespace detail {

struct CohortProbe {
    double b = 0.0;
    Adjacency graph{1};
    GenerationResult result;
};

inline CohortProbe probe_cell(const ExperimentConfig& config, double b, double d,
                              std::uint64_t graph_seed, std::uint64_t target_seed) {
    CohortProbe probe;
    probe.b = b;
    probe.graph = random_chordal(config.p, d, graph_seed);
    if (probe.graph.edge_count() == 0) {
        probe.result.status = GenerationStatus::infeasible;
        return probe;
    }
    const GenerationConstraints gc{config.p, probe.graph, b, config.mode, 1e-4, true};
    const SymMatrix target = make_target(probe.graph, target_seed);
    probe.result = dykstra_project(target, gc);
    return probe;
}

inline std::string cohort_id(int index, int total) {
    int width = 3;
    for (int v = total - 1; v >= 1000; v /= 10) ++width;
    char buf[32];
    std::snprintf(buf, sizeof buf, "m%0*d", std::min(width, 12), index);
    return buf;
}

inline double realized_signal(const SymMatrix& m, const Adjacency& g) {
    double sum = 0.0;
    for (const auto& [i, j] : g.edges()) sum += m(i, j);
    return sum / g.edge_count();
}

inline CohortEntry entry_from_probe(const CohortProbe& probe) {
    CohortEntry e;
    e.b = realized_signal(probe.result.matrix, probe.graph);
    e.b_target = probe.b;
    e.d = probe.graph.density();
    e.matrix = probe.result.matrix;
    e.graph = probe.graph;
    e.residuals = probe.result.residuals;
    e.iterations = probe.result.iterations;
    return e;
}

} // namespace detail

// Ground-truth matrices for the experiment. Explicit cells are generated
// directly (re-drawing the chordal support a bounded number of times if a
// draw lands infeasible); `auto` mode probes a (b, d) grid and picks
// cohort_size feasible cells spread over d-deciles, then evenly over b
// within each decile.
inline std::vector<CohortEntry> build_cohort(const ExperimentConfig& config) {
    validate(config);
    std::vector<CohortEntry> out;

    if (!config.cohort_cells.empty()) {
        const int n = static_cast<int>(config.cohort_cells.size());
        std::vector<CohortEntry> entries(static_cast<std::size_t>(n));
        parallel_for(n, config.threads, [&](int i) {
            const auto [b, d] = config.cohort_cells[static_cast<std::size_t>(i)];
            for (int attempt = 0; attempt < 20; ++attempt) {
                const detail::CohortProbe probe = detail::probe_cell(
                    config, b, d, derive_seed(config.master_seed, "cohort_graph", i, attempt),
                    derive_seed(config.master_seed, "cohort_target", i, attempt));
                if (probe.result.status == GenerationStatus::feasible) {
                    entries[static_cast<std::size_t>(i)] = detail::entry_from_probe(probe);
                    return;
                }
            }
            std::ostringstream msg;
            msg << "build_cohort: cell (b=" << b << ", d=" << d
                << ") produced no feasible matrix in 20 attempts";
            throw CohortInfeasible(msg.str());
        });
        out = std::move(entries);
    } else {
        const double b_top = 0.95;
        if (config.b_min >= b_top)
            throw CohortInfeasible("build_cohort: b_min leaves no usable signal range");
        const int n_d = 10;
        const int n_b = std::max(12, (2 * config.cohort_size + n_d - 1) / n_d);
        std::vector<double> d_grid(n_d), b_grid(static_cast<std::size_t>(n_b));
        for (int j = 0; j < n_d; ++j) d_grid[static_cast<std::size_t>(j)] = 0.05 + 0.1 * j;
        for (int k = 0; k < n_b; ++k)
            b_grid[static_cast<std::size_t>(k)] =
                config.b_min + (k + 1) * (b_top - config.b_min) / n_b;

        std::vector<std::optional<detail::CohortProbe>> probes(
            static_cast<std::size_t>(n_d * n_b));
        parallel_for(n_d * n_b, config.threads, [&](int idx) {
            const int j = idx / n_b; // d index
            const int k = idx % n_b; // b index
            detail::CohortProbe probe = detail::probe_cell(
                config, b_grid[static_cast<std::size_t>(k)],
                d_grid[static_cast<std::size_t>(j)],
                derive_seed(config.master_seed, "cohort_graph", j, k),
                derive_seed(config.master_seed, "cohort_target", j, k));
            if (probe.result.status == GenerationStatus::feasible)
                probes[static_cast<std::size_t>(idx)] = std::move(probe);
        });

        std::vector<std::vector<int>> by_decile(static_cast<std::size_t>(n_d));
        int total = 0;
        for (int idx = 0; idx < n_d * n_b; ++idx)
            if (probes[static_cast<std::size_t>(idx)]) {
                by_decile[static_cast<std::size_t>(idx / n_b)].push_back(idx);
                ++total;
            }
        if (total < config.cohort_size) {
            std::ostringstream msg;
            msg << "build_cohort: only " << total << " feasible cells for cohort_size "
                << config.cohort_size;
            throw CohortInfeasible(msg.str());
        }

        // Quotas: proportional floor, then hand the remainder to deciles with
        // the most unused capacity (ties toward sparser graphs).
        std::vector<int> quota(static_cast<std::size_t>(n_d), 0);
        int assigned = 0;
        for (int j = 0; j < n_d; ++j) {
            quota[static_cast<std::size_t>(j)] = std::min(
                static_cast<int>(by_decile[static_cast<std::size_t>(j)].size()),
                config.cohort_size / n_d);
            assigned += quota[static_cast<std::size_t>(j)];
        }
        while (assigned < config.cohort_size) {
            int best = -1, best_room = 0;
            for (int j = 0; j < n_d; ++j) {
                const int room = static_cast<int>(by_decile[static_cast<std::size_t>(j)].size()) -
                                 quota[static_cast<std::size_t>(j)];
                if (room > best_room) {
                    best_room = room;
                    best = j;
                }
            }
            ++quota[static_cast<std::size_t>(best)];
            ++assigned;
        }

        for (int j = 0; j < n_d; ++j) {
            const auto& avail = by_decile[static_cast<std::size_t>(j)];
            const int q = quota[static_cast<std::size_t>(j)];
            for (int t = 0; t < q; ++t) {
                // Available cells are already sorted by b (k ascending).
                const int pick = static_cast<int>(
                    std::floor((t + 0.5) * static_cast<double>(avail.size()) / q));
                const detail::CohortProbe& probe =
                    *probes[static_cast<std::size_t>(avail[static_cast<std::size_t>(pick)])];
                out.push_back(detail::entry_from_probe(probe));
            }
        }
        std::sort(out.begin(), out.end(), [](const CohortEntry& a, const CohortEntry& b) {
            if (a.d != b.d) return a.d < b.d;
            return a.b_target < b.b_target;
        });
    }

    for (int i = 0; i < static_cast<int>(out.size()); ++i)
        out[static_cast<std::size_t>(i)].id =
            detail::cohort_id(i, static_cast<int>(out.size()));
    return out;
}

inline std::string cohort_csv(const std::vector<CohortEntry>& cohort) {
    std::ostringstream os;
    os << "id,b,b_target,d,edges,iterations,pattern_max_abs,mean_shortfall,"
          "eig_shortfall,diag_max_dev\n";
    for (const CohortEntry& e : cohort)
        os << e.id << "," << fmt_g17(e.b) << "," << fmt_g17(e.b_target) << ","
           << fmt_g17(e.d) << "," << e.graph.edge_count() << "," << e.iterations << ","
           << fmt_g17(e.residuals.pattern_max_abs) << ","
           << fmt_g17(e.residuals.mean_shortfall) << ","
           << fmt_g17(e.residuals.eig_shortfall) << ","
           << fmt_g17(e.residuals.diag_max_dev) << "\n";
    return os.str();
}

inline void write_cohort(const std::string& dir, const std::vector<CohortEntry>& cohort,
                         const ExperimentConfig& config) {
    for (const CohortEntry& e : cohort) {
        std::ostringstream ms;
        write_matrix(ms, e.matrix,
                     {{"b", fmt_g17(e.b)},
                      {"b_target", fmt_g17(e.b_target)},
                      {"d", fmt_g17(e.d)},
                      {"mode", to_string(config.mode)}});
        write_file_atomic(dir + "/matrices/" + e.id + ".txt", ms.str());
        write_file_atomic(dir + "/graphs/" + e.id + ".edges", edge_list_string(e.graph));
    }
    write_file_atomic(dir + "/cohort.csv", cohort_csv(cohort));
}

} // namespace connbench
