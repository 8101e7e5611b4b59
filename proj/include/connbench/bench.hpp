#pragma once

#include <chrono>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "connbench/cohort.hpp"
#include "connbench/config.hpp"
#include "connbench/detect.hpp"
#include "connbench/gaussian.hpp"
#include "connbench/glasso.hpp"
#include "connbench/metrics.hpp"
#include "connbench/thread_pool.hpp"

namespace connbench {

struct RunRecord {
    std::string matrix_id;
    double b = 0.0;
    double d = 0.0;
    int T = 0;
    MatrixMode mode = MatrixMode::covariance;
    std::string estimator;
    std::string method;
    std::string param;
    long tp = 0, tn = 0, fp = 0, fn = 0;
    double accuracy = 0.0, tpr = 0.0, fpr = 0.0;
    double auc = std::numeric_limits<double>::quiet_NaN();
    std::string chosen_threshold = "-";
    double runtime_ms = 0.0;
    int replicate = 0;
    std::string status = "ok";
};

inline const char* run_csv_header() {
    return "matrix_id,b,d,T,mode,estimator,method,param,tp,tn,fp,fn,accuracy,tpr,fpr,"
           "auc,chosen_threshold,runtime_ms,replicate,status";
}

inline std::string records_csv(const std::vector<RunRecord>& records) {
    std::ostringstream os;
    os << run_csv_header() << "\n";
    for (const RunRecord& r : records) {
        os << r.matrix_id << "," << fmt_g17(r.b) << "," << fmt_g17(r.d) << "," << r.T
           << "," << to_string(r.mode) << "," << r.estimator << "," << r.method << ","
           << r.param << "," << r.tp << "," << r.tn << "," << r.fp << "," << r.fn << ","
           << fmt_g17(r.accuracy) << "," << fmt_g17(r.tpr) << "," << fmt_g17(r.fpr) << ","
           << (std::isnan(r.auc) ? std::string("-") : fmt_g17(r.auc)) << ","
           << r.chosen_threshold << "," << fmt_g17(r.runtime_ms) << "," << r.replicate
           << "," << r.status << "\n";
    }
    return os.str();
}

namespace detail {

inline int dof_adjust_for(ConnectivityKind kind, int p) {
    const bool partial = kind == ConnectivityKind::empirical_pcorr ||
                         kind == ConnectivityKind::lw_pcorr;
    return partial ? p - 2 : 0;
}

inline std::string error_name(const std::exception& e) {
    if (dynamic_cast<const NotPositiveDefinite*>(&e)) return "NotPositiveDefinite";
    if (dynamic_cast<const ZeroVariance*>(&e)) return "ZeroVariance";
    if (dynamic_cast<const DegreesOfFreedom*>(&e)) return "DegreesOfFreedom";
    if (dynamic_cast<const EMDegenerate*>(&e)) return "EMDegenerate";
    if (dynamic_cast<const UndefinedAUC*>(&e)) return "UndefinedAUC";
    if (dynamic_cast<const DimensionMismatch*>(&e)) return "DimensionMismatch";
    if (dynamic_cast<const SchemaMismatch*>(&e)) return "SchemaMismatch";
    if (dynamic_cast<const CohortInfeasible*>(&e)) return "CohortInfeasible";
    if (dynamic_cast<const std::domain_error*>(&e)) return "domain_error";
    if (dynamic_cast<const std::invalid_argument*>(&e)) return "invalid_argument";
    return "error";
}

inline void fill_metrics(RunRecord& r, const Adjacency& estimated, const Adjacency& truth) {
    const Confusion c = confusion(estimated, truth);
    r.tp = c.tp;
    r.tn = c.tn;
    r.fp = c.fp;
    r.fn = c.fn;
    r.accuracy = accuracy(c);
    r.tpr = tpr(c);
    r.fpr = fpr(c);
}

// One estimator-method record. EMDegenerate from the mixture is the
// documented "no edges detected" outcome, not a failure.
inline RunRecord run_method(const CohortEntry& entry, const ExperimentConfig& config,
                            int T, int replicate, const ConnectivityMatrix& conn,
                            const char* estimator_name, double estimator_auc,
                            const MethodSpec& spec) {
    RunRecord r;
    r.matrix_id = entry.id;
    r.b = entry.b;
    r.d = entry.d;
    r.T = T;
    r.mode = config.mode;
    r.estimator = estimator_name;
    r.method = spec.name;
    r.param = "-";
    r.auc = estimator_auc;
    r.replicate = replicate;

    const auto start = std::chrono::steady_clock::now();
    try {
        DetectionOutcome out;
        const int dof = dof_adjust_for(conn.kind, config.p);
        if (spec.name == "bonferroni") {
            out = bonferroni(pearson_pvalues(conn, T, dof, spec.params.sidedness),
                             spec.params.alpha);
            r.param = fmt_g17(spec.params.alpha);
        } else if (spec.name == "benjamini_yekutieli") {
            out = benjamini_yekutieli(pearson_pvalues(conn, T, dof, spec.params.sidedness),
                                      spec.params.alpha);
            r.param = fmt_g17(spec.params.alpha);
        } else if (spec.name == "fixed_threshold") {
            out = fixed_threshold(conn, spec.params.tau);
            r.param = fmt_g17(spec.params.tau);
        } else if (spec.name == "fixed_proportion") {
            out = fixed_proportion(conn, spec.params.q);
            r.param = fmt_g17(spec.params.q);
        } else if (spec.name == "mixture") {
            try {
                out = mixture_threshold(conn, spec.params);
            } catch (const EMDegenerate&) {
                out.adjacency = Adjacency(config.p);
                out.method = "mixture";
            }
        } else if (spec.name == "percolation") {
            out = percolation_threshold(conn);
        } else {
            throw std::invalid_argument("run_method: unknown method " + spec.name);
        }
        if (out.chosen_threshold) r.chosen_threshold = fmt_g17(*out.chosen_threshold);
        fill_metrics(r, out.adjacency, entry.graph);
    } catch (const std::exception& e) {
        r.status = error_name(e);
    }
    r.runtime_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    return r;
}

inline RunRecord run_glasso(const CohortEntry& entry, const ExperimentConfig& config,
                            int T, int replicate, const SampleSet& standardized,
                            const MethodSpec& spec) {
    RunRecord r;
    r.matrix_id = entry.id;
    r.b = entry.b;
    r.d = entry.d;
    r.T = T;
    r.mode = config.mode;
    r.estimator = "samples";
    r.method = spec.name;
    r.param = "-";
    r.replicate = replicate;

    const auto start = std::chrono::steady_clock::now();
    try {
        const GlassoResult res = glasso_cv(standardized, spec.params);
        if (res.outcome.chosen_lambda)
            r.chosen_threshold = fmt_g17(*res.outcome.chosen_lambda);
        fill_metrics(r, res.outcome.adjacency, entry.graph);
        try {
            r.auc = auc(res.precision, entry.graph);
        } catch (const UndefinedAUC&) {
        }
        if (!res.converged) r.status = "NotConverged";
    } catch (const std::exception& e) {
        r.status = error_name(e);
    }
    r.runtime_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    return r;
}

} // namespace detail

// The full sweep: every (matrix, T, replicate) is an independent task and
// records are merged in task order, so output is identical for any thread
// count.
inline std::vector<RunRecord> run_benchmark(const ExperimentConfig& config,
                                            const std::vector<CohortEntry>& cohort) {
    validate(config);
    const int n_t = static_cast<int>(config.T_list.size());
    const int n_rep = config.replicates;
    const int tasks = static_cast<int>(cohort.size()) * n_t * n_rep;
    std::vector<std::vector<RunRecord>> slots(static_cast<std::size_t>(tasks));

    parallel_for(tasks, config.threads, [&](int task) {
        const int cell = task / (n_t * n_rep);
        const int ti = (task / n_rep) % n_t;
        const int rep = task % n_rep;
        const CohortEntry& entry = cohort[static_cast<std::size_t>(cell)];
        const int T = config.T_list[static_cast<std::size_t>(ti)];
        std::vector<RunRecord>& records = slots[static_cast<std::size_t>(task)];

        const SampleSet x =
            sample_mvn(entry.matrix, T,
                       derive_seed(config.master_seed, "sample", cell, T, rep),
                       config.mode, entry.id);
        const SymMatrix s = empirical_cov(x);

        bool want_glasso = false;
        for (const MethodSpec& spec : config.methods)
            if (spec.name == "glasso_cv") want_glasso = true;

        for (ConnectivityKind kind : config.estimators) {
            ConnectivityMatrix conn(SymMatrix::identity(config.p), kind);
            std::string prep_error;
            try {
                switch (kind) {
                    case ConnectivityKind::empirical_corr:
                        conn = cov_to_corr(s);
                        break;
                    case ConnectivityKind::empirical_pcorr:
                        conn = partial_corr(s);
                        break;
                    case ConnectivityKind::lw_corr:
                        conn = cov_to_corr(ledoit_wolf(x).covariance);
                        break;
                    case ConnectivityKind::lw_pcorr:
                        conn = partial_corr(ledoit_wolf(x).covariance);
                        break;
                    default:
                        prep_error = "invalid_argument";
                }
            } catch (const std::exception& e) {
                prep_error = detail::error_name(e);
            }
            double kind_auc = std::numeric_limits<double>::quiet_NaN();
            if (prep_error.empty()) {
                try {
                    kind_auc = auc(conn, entry.graph);
                } catch (const UndefinedAUC&) {
                }
            }
            for (const MethodSpec& spec : config.methods) {
                if (spec.name == "glasso_cv") continue;
                if (!prep_error.empty()) {
                    RunRecord r;
                    r.matrix_id = entry.id;
                    r.b = entry.b;
                    r.d = entry.d;
                    r.T = T;
                    r.mode = config.mode;
                    r.estimator = to_string(kind);
                    r.method = spec.name;
                    r.replicate = rep;
                    r.status = prep_error;
                    records.push_back(std::move(r));
                    continue;
                }
                records.push_back(detail::run_method(entry, config, T, rep, conn,
                                                     to_string(kind), kind_auc, spec));
            }
        }

        if (want_glasso) {
            SampleSet standardized = x;
            for (int i = 0; i < config.p; ++i) {
                const double scale = s(i, i) > 0.0 ? 1.0 / std::sqrt(s(i, i)) : 1.0;
                for (int t = 0; t < T; ++t)
                    standardized.data[static_cast<std::size_t>(t) * config.p +
                                      static_cast<std::size_t>(i)] *= scale;
            }
            for (const MethodSpec& spec : config.methods)
                if (spec.name == "glasso_cv")
                    records.push_back(
                        detail::run_glasso(entry, config, T, rep, standardized, spec));
        }
    });

    std::vector<RunRecord> out;
    for (auto& slot : slots)
        for (RunRecord& r : slot) out.push_back(std::move(r));
    return out;
}

struct SweepRow {
    std::string matrix_id;
    double b = 0.0;
    double d = 0.0;
    int T = 0;
    double tau = 0.0;
    double accuracy = 0.0;
};

// Fixed-threshold accuracy curves on the empirical correlation matrix. The
// d column carries the realized support density, so the tau = 0 row equals
// it exactly: thresholding at zero keeps every (almost surely nonzero)
// empirical correlation.
inline std::vector<SweepRow> threshold_sweep(const ExperimentConfig& config,
                                             const std::vector<CohortEntry>& cohort,
                                             const std::vector<double>& grid) {
    validate(config);
    if (grid.empty()) throw std::invalid_argument("threshold_sweep: empty grid");
    for (double tau : grid)
        if (!(tau >= 0.0 && tau <= 1.0))
            throw std::invalid_argument("threshold_sweep: tau outside [0, 1]");

    const int n_t = static_cast<int>(config.T_list.size());
    const int tasks = static_cast<int>(cohort.size()) * n_t;
    std::vector<std::vector<SweepRow>> slots(static_cast<std::size_t>(tasks));
    parallel_for(tasks, config.threads, [&](int task) {
        const int cell = task / n_t;
        const int ti = task % n_t;
        const CohortEntry& entry = cohort[static_cast<std::size_t>(cell)];
        const int T = config.T_list[static_cast<std::size_t>(ti)];
        const SampleSet x = sample_mvn(entry.matrix, T,
                                       derive_seed(config.master_seed, "sweep", cell, T),
                                       config.mode, entry.id);
        const ConnectivityMatrix conn = cov_to_corr(empirical_cov(x));
        for (double tau : grid) {
            SweepRow row;
            row.matrix_id = entry.id;
            row.b = entry.b;
            row.d = entry.d;
            row.T = T;
            row.tau = tau;
            row.accuracy =
                accuracy(confusion(fixed_threshold(conn, tau).adjacency, entry.graph));
            slots[static_cast<std::size_t>(task)].push_back(std::move(row));
        }
    });

    std::vector<SweepRow> out;
    for (auto& slot : slots)
        for (SweepRow& row : slot) out.push_back(std::move(row));
    return out;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "matrix_id,b,d,T,tau,accuracy\n";
    for (const SweepRow& r : rows)
        os << r.matrix_id << "," << fmt_g17(r.b) << "," << fmt_g17(r.d) << "," << r.T
           << "," << fmt_g17(r.tau) << "," << fmt_g17(r.accuracy) << "\n";
    return os.str();
}

inline std::string manifest_json(const ExperimentConfig& config, std::size_t cohort_size,
                                 std::size_t records, int failures) {
    nlohmann::ordered_json j;
    char hex[32];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(config_hash(config)));
    j["config_hash"] = hex;
    j["master_seed"] = config.master_seed;
    j["seed_labels"] = {"cohort_graph", "cohort_target", "sample", "sweep"};
    j["cohort_size"] = cohort_size;
    j["records"] = records;
    j["failures"] = failures;
    return j.dump(2) + "\n";
}

inline int count_failures(const std::vector<RunRecord>& records) {
    int n = 0;
    for (const RunRecord& r : records)
        if (r.status != "ok") ++n;
    return n;
}

} // namespace connbench
