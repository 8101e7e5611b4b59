// Release gate: every acceptance check prints one [PASS]/[FAIL] line with the
// measured numbers; the process exits nonzero if any check fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "connbench/bench.hpp"
#include "connbench/chordal.hpp"
#include "connbench/cohort.hpp"
#include "connbench/config.hpp"
#include "connbench/detect.hpp"
#include "connbench/estimators.hpp"
#include "connbench/gaussian.hpp"
#include "connbench/glasso.hpp"
#include "connbench/metrics.hpp"
#include "connbench/psd_generation.hpp"
#include "connbench/rng.hpp"
#include "connbench/special_functions.hpp"
#include "connbench/sym_matrix.hpp"

using namespace connbench;

namespace {

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

// ---------- rank correlation helpers ----------

std::vector<double> midranks(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        const double r = 0.5 * (i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

double pearson_of(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    return pearson_of(midranks(x), midranks(y));
}

// Spearman correlation of x and y with the z contribution partialled out.
double partial_spearman(const std::vector<double>& x, const std::vector<double>& y,
                        const std::vector<double>& z) {
    const std::vector<double> rx = midranks(x), ry = midranks(y), rz = midranks(z);
    const double rxy = pearson_of(rx, ry);
    const double rxz = pearson_of(rx, rz);
    const double ryz = pearson_of(ry, rz);
    return (rxy - rxz * ryz) / std::sqrt((1.0 - rxz * rxz) * (1.0 - ryz * ryz));
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// ---------- quadrature oracle for the t survival function ----------

double t_logpdf(double x, double nu) {
    return std::lgamma((nu + 1.0) / 2.0) - std::lgamma(nu / 2.0) -
           0.5 * std::log(nu * std::numbers::pi) -
           (nu + 1.0) / 2.0 * std::log1p(x * x / nu);
}

double simpson_rec(const std::function<double(double)>& f, double a, double b,
                   double fa, double fm, double fb, double whole, double tol,
                   int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 40);
}

// P(T > t0) by integrating the density over [t0, inf) with t = t0 + u/(1-u).
double t_sf_quadrature(double t0, double nu) {
    auto g = [&](double u) {
        const double one_minus = 1.0 - u;
        const double x = t0 + u / one_minus;
        return std::exp(t_logpdf(x, nu)) / (one_minus * one_minus);
    };
    return integrate(g, 0.0, 1.0 - 1e-9, 1e-13);
}

// ---------- brute-force oracles ----------

double auc_pairs(const SymMatrix& scores, const Adjacency& truth) {
    const int p = truth.node_count();
    std::vector<double> pos, neg;
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j)
            (truth.has_edge(i, j) ? pos : neg).push_back(std::fabs(scores(i, j)));
    double wins = 0.0;
    for (double e : pos)
        for (double n : neg) {
            if (e > n) wins += 1.0;
            else if (e == n) wins += 0.5;
        }
    return wins / (double(pos.size()) * double(neg.size()));
}

Adjacency percolation_scan(const ConnectivityMatrix& c) {
    const int p = c.dim();
    std::vector<double> taus;
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j)
            if (std::fabs(c(i, j)) > 0.0) taus.push_back(std::fabs(c(i, j)));
    std::sort(taus.begin(), taus.end(), std::greater<>());
    taus.erase(std::unique(taus.begin(), taus.end()), taus.end());
    auto graph_at = [&](double tau) {
        Adjacency g(p);
        for (int i = 0; i < p; ++i)
            for (int j = i + 1; j < p; ++j)
                if (std::fabs(c(i, j)) >= tau && std::fabs(c(i, j)) > 0.0)
                    g.add_edge(i, j);
        return g;
    };
    for (double tau : taus) {
        const Adjacency g = graph_at(tau);
        if (component_count(g) == 1) return g;
    }
    return graph_at(0.0);
}

// ---------- record aggregation ----------

// Per-cell mean of one numeric field, restricted to ok rows of one
// (estimator, method) pairing.
std::map<std::string, double> cell_mean(const std::vector<RunRecord>& records,
                                        const std::string& estimator,
                                        const std::string& method, int T,
                                        const std::function<double(const RunRecord&)>& get) {
    std::map<std::string, std::pair<double, int>> acc;
    for (const RunRecord& r : records) {
        if (r.estimator != estimator || r.method != method || r.status != "ok") continue;
        if (T > 0 && r.T != T) continue;
        auto& [sum, n] = acc[r.matrix_id];
        sum += get(r);
        ++n;
    }
    std::map<std::string, double> out;
    for (const auto& [id, sn] : acc) out[id] = sn.first / sn.second;
    return out;
}

std::string strip_runtime(const std::string& csv) {
    std::ostringstream os;
    std::istringstream is(csv);
    std::string line;
    while (std::getline(is, line)) {
        const std::vector<std::string> f = split(line, ',');
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (i == 17) continue;
            os << f[i] << (i + 1 == f.size() ? "" : ",");
        }
        os << "\n";
    }
    return os.str();
}

char fmt_buf[256];

const char* fmt(const char* format, ...) {
    va_list args;
    va_start(args, format);
    std::vsnprintf(fmt_buf, sizeof fmt_buf, format, args);
    va_end(args);
    return fmt_buf;
}

// ---------- criteria ----------

Check check_generation_contract() {
    Check c{"1. generation contract (p=51, 100 cells)"};
    ExperimentConfig cfg;
    cfg.p = 51;
    cfg.cohort_size = 100;
    cfg.b_min = 0.2;
    cfg.master_seed = 4251;
    cfg.threads = 0;

    const double t0 = now_seconds();
    std::vector<CohortEntry> cohort;
    try {
        cohort = build_cohort(cfg);
    } catch (const std::exception& e) {
        c.detail = std::string("cohort build failed: ") + e.what();
        return c;
    }
    const double elapsed = now_seconds() - t0;

    double worst_off = 0.0, worst_eig = 1e300, worst_mean = 1e300, worst_diag = 0.0;
    for (const CohortEntry& e : cohort) {
        const int p = e.matrix.dim();
        for (int i = 0; i < p; ++i) {
            worst_diag = std::max(worst_diag, std::fabs(e.matrix(i, i) - 1.0));
            for (int j = i + 1; j < p; ++j)
                if (!e.graph.has_edge(i, j))
                    worst_off = std::max(worst_off, std::fabs(e.matrix(i, j)));
        }
        double sum = 0.0;
        for (const auto& [i, j] : e.graph.edges()) sum += e.matrix(i, j);
        worst_mean = std::min(worst_mean, sum / e.graph.edge_count() - e.b_target);
        worst_eig = std::min(worst_eig, eig_sym(e.matrix).values[0]);
    }
    const bool sizes = cohort.size() == 100;
    const bool ok = sizes && worst_off <= 1e-8 && worst_eig >= 1e-4 - 1e-9 &&
                    worst_mean >= -1e-6 && worst_diag <= 1e-9 && elapsed <= 600.0;
    c.pass = ok;
    c.detail = fmt("%zu cells, off-support max %.2e, min eig %.6e, mean slack %.2e, "
                   "diag dev %.2e, %.1fs",
                   cohort.size(), worst_off, worst_eig, worst_mean, worst_diag, elapsed);
    return c;
}

Check check_sweep_endpoints(const ExperimentConfig& cfg,
                            const std::vector<CohortEntry>& cohort) {
    Check c{"2. threshold sweep endpoint identities"};
    ExperimentConfig sweep_cfg = cfg;
    sweep_cfg.T_list = {100, 1000};
    const std::vector<SweepRow> rows =
        threshold_sweep(sweep_cfg, cohort, {0.0, 0.5, 1.0});
    const int m = cfg.p * (cfg.p - 1) / 2;
    int zero_rows = 0, one_rows = 0;
    bool ok = !rows.empty();
    for (const SweepRow& r : rows) {
        const long e = std::llround(r.d * m);
        if (e <= 0 || double(e) / m != r.d) ok = false;
        if (r.tau == 0.0) {
            ++zero_rows;
            if (r.accuracy != r.d) ok = false;
        }
        if (r.tau == 1.0) {
            ++one_rows;
            if (r.accuracy != double(m - e) / m) ok = false;
        }
    }
    c.pass = ok && zero_rows == one_rows && zero_rows == int(cohort.size()) * 2;
    c.detail = fmt("%d tau=0 rows match d exactly, %d tau=1 rows match 1-d exactly",
                   zero_rows, one_rows);
    return c;
}

Check check_oracles() {
    Check c{"3. oracle equivalences"};
    std::ostringstream why;
    bool ok = true;

    // AUC rank formula vs exhaustive pair counting.
    {
        RngStream rng(777);
        double worst = 0.0;
        for (int rep = 0; rep < 1000; ++rep) {
            const int p = 3 + int(rng.below(8));
            SymMatrix scores(p);
            Adjacency truth(p);
            const bool quantize = rep % 2 == 0;
            for (int i = 0; i < p; ++i)
                for (int j = i + 1; j < p; ++j) {
                    double v = rng.uniform(-1.0, 1.0);
                    if (quantize) v = std::round(v * 5.0) / 5.0;
                    scores.set(i, j, v);
                    if (rng.below(2) == 0) truth.add_edge(i, j);
                }
            if (truth.edge_count() == 0) truth.add_edge(0, 1);
            if (truth.edge_count() == truth.node_count() * (truth.node_count() - 1) / 2)
                continue;
            worst = std::max(worst, std::fabs(auc(scores, truth) - auc_pairs(scores, truth)));
        }
        if (worst > 1e-6) {
            ok = false;
            why << " auc diff " << worst << ";";
        } else {
            why << fmt("auc<=%.1e", worst) << "; ";
        }
    }

    // Percolation union-find vs brute-force threshold scan.
    {
        RngStream rng(778);
        int mismatches = 0;
        for (int rep = 0; rep < 200; ++rep) {
            const int p = 2 + int(rng.below(11));
            SymMatrix v(p);
            const bool discrete = rep % 2 == 0;
            for (int i = 0; i < p; ++i) {
                v.set(i, i, 1.0);
                for (int j = i + 1; j < p; ++j) {
                    if (discrete) {
                        static const double levels[6] = {0.0, 0.0, 0.2, -0.4, 0.6, 0.8};
                        v.set(i, j, levels[rng.below(6)]);
                    } else {
                        v.set(i, j, rng.uniform(-1.0, 1.0));
                    }
                }
            }
            const ConnectivityMatrix conn(v, ConnectivityKind::empirical_corr);
            const Adjacency got = percolation_threshold(conn).adjacency;
            const Adjacency want = percolation_scan(conn);
            bool same = got.edge_count() == want.edge_count();
            for (int i = 0; same && i < p; ++i)
                for (int j = i + 1; j < p; ++j)
                    if (got.has_edge(i, j) != want.has_edge(i, j)) same = false;
            if (!same) ++mismatches;
        }
        if (mismatches > 0) {
            ok = false;
            why << " percolation mismatches " << mismatches << ";";
        } else {
            why << "percolation 200/200; ";
        }
    }

    // Glasso p=2 vs the closed-form soft-threshold solution.
    {
        double worst = 0.0;
        const double offs[5] = {-0.8, -0.3, 0.0, 0.5, 0.9};
        const double lambdas[4] = {0.0, 0.1, 0.3, 1.0};
        for (double off : offs)
            for (double lambda : lambdas) {
                SymMatrix s(2);
                s.set(0, 0, 1.0);
                s.set(1, 1, 1.0);
                s.set(0, 1, off);
                const GlassoResult res = graphical_lasso(s, lambda, 1e-10, 2000);
                const double w = off >= 0 ? std::max(off - lambda, 0.0)
                                          : -std::max(-off - lambda, 0.0);
                const double det = 1.0 - w * w;
                worst = std::max(worst, std::fabs(res.precision(0, 0) - 1.0 / det));
                worst = std::max(worst, std::fabs(res.precision(1, 1) - 1.0 / det));
                worst = std::max(worst, std::fabs(res.precision(0, 1) + w / det));
            }
        // Distinct diagonals exercise the same formula off the unit scale.
        SymMatrix s(2);
        s.set(0, 0, 2.0);
        s.set(1, 1, 3.0);
        s.set(0, 1, 0.5);
        const GlassoResult res = graphical_lasso(s, 0.2, 1e-10, 2000);
        const double w = 0.3, det = 6.0 - w * w;
        worst = std::max(worst, std::fabs(res.precision(0, 0) - 3.0 / det));
        worst = std::max(worst, std::fabs(res.precision(1, 1) - 2.0 / det));
        worst = std::max(worst, std::fabs(res.precision(0, 1) + w / det));
        if (worst > 1e-6) {
            ok = false;
            why << " glasso p2 diff " << worst << ";";
        } else {
            why << fmt("glasso p2<=%.1e", worst) << "; ";
        }
    }

    // Glasso at lambda = 0 vs the direct SPD inverse.
    {
        double worst = 0.0;
        RngStream rng(779);
        for (int rep = 0; rep < 10; ++rep) {
            const int p = 4 + int(rng.below(5));
            GaussianStream gs(derive_seed(rng.next(), "spd"));
            const int n = p + 4;
            std::vector<double> a(std::size_t(p) * n);
            for (double& x : a) x = gs.next();
            SymMatrix s(p);
            for (int i = 0; i < p; ++i)
                for (int j = i; j < p; ++j) {
                    double dot = 0.0;
                    for (int k = 0; k < n; ++k)
                        dot += a[std::size_t(i) * n + k] * a[std::size_t(j) * n + k];
                    s.set(i, j, dot / n + (i == j ? 0.5 : 0.0));
                }
            const GlassoResult res = graphical_lasso(s, 0.0, 1e-9, 5000);
            const SymMatrix direct = inverse_spd(s);
            for (int i = 0; i < p; ++i)
                for (int j = i; j < p; ++j)
                    worst = std::max(worst,
                                     std::fabs(res.precision(i, j) - direct(i, j)));
        }
        if (worst > 1e-5) {
            ok = false;
            why << " glasso lambda0 diff " << worst << ";";
        } else {
            why << fmt("glasso l0<=%.1e", worst) << "; ";
        }
    }

    // Student-t survival function vs adaptive quadrature of the density.
    {
        double worst = 0.0;
        const double nus[3] = {5.0, 98.0, 998.0};
        const double ts[7] = {0.0, 0.5, 1.349, 2.0, -2.0, 3.5, 5.715476066494083};
        for (double nu : nus)
            for (double t : ts)
                worst = std::max(worst,
                                 std::fabs(student_t_sf(t, nu) - t_sf_quadrature(t, nu)));
        if (worst > 1e-8) {
            ok = false;
            why << " t sf diff " << worst << ";";
        } else {
            why << fmt("t sf<=%.1e", worst);
        }
    }

    c.pass = ok;
    c.detail = why.str();
    return c;
}

Check check_error_control() {
    Check c{"4. FWER/FDR control on the null model"};
    const double t0 = now_seconds();
    const int p = 20, T = 100, reps = 1000;
    const SymMatrix identity = SymMatrix::identity(p);
    int fwer_hits = 0, fdr_hits = 0;
    for (int rep = 0; rep < reps; ++rep) {
        const SampleSet x = sample_mvn(identity, T, derive_seed(888, "null", rep),
                                       MatrixMode::covariance);
        const ConnectivityMatrix conn = cov_to_corr(empirical_cov(x));
        const SymMatrix pv = pearson_pvalues(conn, T, 0, Sidedness::two_sided);
        if (bonferroni(pv, 0.05).adjacency.edge_count() > 0) ++fwer_hits;
        // With an empty truth every discovery is false, so V/R is 1 whenever
        // anything is rejected.
        if (benjamini_yekutieli(pv, 0.05).adjacency.edge_count() > 0) ++fdr_hits;
    }
    const double elapsed = now_seconds() - t0;
    const double bound = 0.05 + 3.0 * std::sqrt(0.05 * 0.95 / reps);
    const double fwer = double(fwer_hits) / reps;
    const double fdr = double(fdr_hits) / reps;
    c.pass = fwer <= bound && fdr <= bound && elapsed <= 120.0;
    c.detail = fmt("FWER %.4f, FDR %.4f, bound %.4f, %.1fs", fwer, fdr, bound, elapsed);
    return c;
}

Check check_auc_trend(const std::vector<CohortEntry>& cohort,
                      const std::vector<RunRecord>& records, double elapsed) {
    Check c{"5. estimator information trend"};
    const auto auc_emp = cell_mean(records, "empirical_corr", "bonferroni", 100,
                                   [](const RunRecord& r) { return r.auc; });
    const auto auc_lw = cell_mean(records, "lw_pcorr", "bonferroni", 100,
                                  [](const RunRecord& r) { return r.auc; });
    std::vector<double> bs, aucs;
    double diff_sum = 0.0;
    int diff_n = 0;
    for (const CohortEntry& e : cohort) {
        if (!auc_emp.count(e.id)) continue;
        bs.push_back(e.b);
        aucs.push_back(auc_emp.at(e.id));
        if (e.d > 0.4 && auc_lw.count(e.id)) {
            diff_sum += auc_lw.at(e.id) - auc_emp.at(e.id);
            ++diff_n;
        }
    }
    const double rho = spearman(bs, aucs);
    const double mean_diff = diff_n ? diff_sum / diff_n : 0.0;
    c.pass = bs.size() == cohort.size() && rho >= 0.6 && diff_n > 0 && mean_diff < 0.0 &&
             elapsed <= 900.0;
    c.detail = fmt("spearman(b, auc)=%.3f, mean lw_pcorr-emp diff on d>0.4: %.4f "
                   "(%d cells), %.0fs",
                   rho, mean_diff, diff_n, elapsed);
    return c;
}

Check check_method_sensitivities(const std::vector<CohortEntry>& cohort,
                                 const std::vector<RunRecord>& records) {
    Check c{"6. method sensitivity pattern"};
    const auto tpr_bonf = cell_mean(records, "empirical_corr", "bonferroni", 100,
                                    [](const RunRecord& r) { return r.tpr; });
    const auto acc_perc = cell_mean(records, "empirical_corr", "percolation", 100,
                                    [](const RunRecord& r) { return r.accuracy; });
    std::vector<double> bs, ds, tprs, accs;
    for (const CohortEntry& e : cohort) {
        if (!tpr_bonf.count(e.id) || !acc_perc.count(e.id)) continue;
        bs.push_back(e.b);
        ds.push_back(e.d);
        tprs.push_back(tpr_bonf.at(e.id));
        accs.push_back(acc_perc.at(e.id));
    }
    const double tpr_b = partial_spearman(tprs, bs, ds);
    const double tpr_d = partial_spearman(tprs, ds, bs);
    const double acc_d = partial_spearman(accs, ds, bs);
    c.pass = bs.size() == cohort.size() && tpr_b >= 0.5 && std::fabs(tpr_d) <= 0.3 &&
             std::fabs(acc_d) >= 0.5;
    c.detail = fmt("bonferroni tpr~b %.3f (>=0.5), tpr~d %.3f (|.|<=0.3), "
                   "percolation acc~d %.3f (|.|>=0.5)",
                   tpr_b, tpr_d, acc_d);
    return c;
}

Check check_sample_size_trend(const std::vector<RunRecord>& records) {
    Check c{"7. sample size trend"};
    auto med = [&](const std::string& est, const std::string& method, int T) {
        std::vector<double> accs;
        for (const RunRecord& r : records)
            if (r.estimator == est && r.method == method && r.T == T && r.status == "ok")
                accs.push_back(r.accuracy);
        return accs.empty() ? -1.0 : median_of(accs);
    };
    const double bonf = med("empirical_corr", "bonferroni", 1000) -
                        med("empirical_corr", "bonferroni", 100);
    const double glasso = med("samples", "glasso_cv", 1000) -
                          med("samples", "glasso_cv", 100);
    const double perc = med("empirical_corr", "percolation", 1000) -
                        med("empirical_corr", "percolation", 100);
    c.pass = bonf > 0.0 && glasso > 0.0 && perc < 0.5 * bonf;
    c.detail = fmt("median accuracy gains T=100->1000: bonferroni %+.4f, "
                   "glasso_cv %+.4f, percolation %+.4f (< half of bonferroni)",
                   bonf, glasso, perc);
    return c;
}

Check check_determinism(const ExperimentConfig& cfg, const std::string& first_csv) {
    Check c{"8. determinism across runs and thread counts"};
    const std::vector<CohortEntry> cohort2 = build_cohort(cfg);
    const std::string rerun = records_csv(run_benchmark(cfg, cohort2));
    ExperimentConfig threaded = cfg;
    threaded.threads = 3;
    const std::string parallel = records_csv(run_benchmark(threaded, cohort2));
    const bool same_serial = strip_runtime(first_csv) == strip_runtime(rerun);
    const bool same_parallel = strip_runtime(first_csv) == strip_runtime(parallel);
    c.pass = same_serial && same_parallel;
    c.detail = fmt("rerun identical: %s, 3-thread run identical: %s",
                   same_serial ? "yes" : "no", same_parallel ? "yes" : "no");
    return c;
}

} // namespace

int main() {
    std::vector<Check> checks;

    checks.push_back(check_generation_contract());

    // Desk-scale cohort shared by the trend criteria: 60 feasible cells in
    // ten density columns. Per column, two cells request a deep-slack floor
    // (the support mean then lands at its natural value for that column) and
    // four request binding levels spread between the measured natural mean
    // and the feasibility cap, so the recorded signal level varies genuinely
    // within every column instead of collapsing onto the d-driven drift.
    ExperimentConfig desk;
    desk.p = 30;
    desk.master_seed = 303;
    desk.threads = 0;
    desk.T_list = {100};
    desk.replicates = 5;
    desk.estimators = {ConnectivityKind::empirical_corr, ConnectivityKind::lw_pcorr};
    desk.methods = {{"bonferroni", {}}, {"percolation", {}}};
    {
        const double dcol[10] = {0.08, 0.17, 0.26, 0.35, 0.44,
                                 0.53, 0.62, 0.71, 0.80, 0.89};
        const double nat[10] = {0.466, 0.441, 0.436, 0.433, 0.438,
                                0.447, 0.462, 0.470, 0.475, 0.480};
        const double cap[10] = {0.515, 0.530, 0.520, 0.528, 0.515,
                                0.562, 0.586, 0.572, 0.600, 0.615};
        for (int j = 0; j < 10; ++j) {
            const double lo = nat[j] + 0.005, hi = cap[j] - 0.015;
            desk.cohort_cells.emplace_back(0.21, dcol[j]);
            desk.cohort_cells.emplace_back(0.23, dcol[j]);
            for (int k = 0; k < 4; ++k)
                desk.cohort_cells.emplace_back(lo + (hi - lo) * k / 3.0, dcol[j]);
        }
    }

    const std::vector<CohortEntry> cohort = build_cohort(desk);

    checks.push_back(check_sweep_endpoints(desk, cohort));
    checks.push_back(check_oracles());
    checks.push_back(check_error_control());

    const double trend_t0 = now_seconds();
    const std::vector<RunRecord> desk_records = run_benchmark(desk, cohort);
    const double trend_elapsed = now_seconds() - trend_t0;
    checks.push_back(check_auc_trend(cohort, desk_records, trend_elapsed));
    checks.push_back(check_method_sensitivities(cohort, desk_records));

    // With the default grid floor of 1e-3, held-out likelihood always picks
    // the weakest penalty here and the refit graph is near-complete at every
    // T; a floor of 0.05 keeps the refit genuinely sparse so the sample-size
    // benefit is visible for sparse supports.
    ExperimentConfig growth = desk;
    growth.T_list = {100, 1000};
    growth.replicates = 1;
    growth.estimators = {ConnectivityKind::empirical_corr};
    DetectionParams glasso_params;
    glasso_params.lambda_grid.clear();
    for (int k = 0; k < 20; ++k)
        glasso_params.lambda_grid.push_back(0.05 * std::pow(1.0 / 0.05, k / 19.0));
    growth.methods = {{"bonferroni", {}}, {"percolation", {}}, {"glasso_cv", glasso_params}};
    checks.push_back(check_sample_size_trend(run_benchmark(growth, cohort)));

    checks.push_back(check_determinism(desk, records_csv(desk_records)));

    bool all = true;
    for (const Check& c : checks) {
        std::printf("[%s] %s | %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                    c.detail.c_str());
        all = all && c.pass;
    }
    std::printf("%s\n", all ? "acceptance: all criteria satisfied"
                            : "acceptance: FAILURES present");
    return all ? 0 : 1;
}
