#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "connbench/detect.hpp"
#include "connbench/estimators.hpp"
#include "connbench/rng.hpp"
#include "connbench/sym_matrix.hpp"

namespace connbench {

inline const std::vector<std::string>& known_methods() {
    static const std::vector<std::string> names = {
        "bonferroni",     "benjamini_yekutieli", "fixed_threshold", "fixed_proportion",
        "mixture",        "percolation",         "glasso_cv"};
    return names;
}

struct MethodSpec {
    std::string name;
    DetectionParams params;
};

struct ExperimentConfig {
    int p = 51;
    std::vector<std::pair<double, double>> cohort_cells; // empty means auto
    int cohort_size = 300;
    double b_min = 0.2;
    std::vector<int> T_list = {100, 500, 1000};
    int replicates = 1;
    MatrixMode mode = MatrixMode::covariance;
    std::vector<ConnectivityKind> estimators = {
        ConnectivityKind::empirical_corr, ConnectivityKind::empirical_pcorr,
        ConnectivityKind::lw_corr, ConnectivityKind::lw_pcorr};
    std::vector<MethodSpec> methods = {
        {"bonferroni", {}}, {"benjamini_yekutieli", {}}, {"fixed_threshold", {}},
        {"fixed_proportion", {}}, {"mixture", {}},        {"percolation", {}},
        {"glasso_cv", {}}};
    std::uint64_t master_seed = 0;
    std::string output_dir = "out";
    int threads = 0; // 0 means auto
};

inline void validate(const ExperimentConfig& c) {
    if (c.p < 2) throw std::invalid_argument("config: p must be >= 2");
    for (const auto& [b, d] : c.cohort_cells)
        if (!(b > 0.0 && b < 1.0 && d > 0.0 && d < 1.0))
            throw std::invalid_argument("config: cohort cells need 0 < b < 1 and 0 < d < 1");
    if (c.cohort_cells.empty() && c.cohort_size < 1)
        throw std::invalid_argument("config: cohort_size must be >= 1");
    if (!(c.b_min >= 0.0 && c.b_min < 1.0))
        throw std::invalid_argument("config: b_min must lie in [0, 1)");
    if (c.T_list.empty()) throw std::invalid_argument("config: T_list must be non-empty");
    for (int T : c.T_list)
        if (T < 2) throw std::invalid_argument("config: every T must be >= 2");
    if (c.replicates < 1) throw std::invalid_argument("config: replicates must be >= 1");
    if (c.estimators.empty())
        throw std::invalid_argument("config: estimators must be non-empty");
    for (ConnectivityKind k : c.estimators)
        if (!correlation_like(k))
            throw std::invalid_argument(
                "config: estimators must be correlation-like (raw covariance scores "
                "are not comparable against thresholds in [0, 1])");
    if (c.methods.empty()) throw std::invalid_argument("config: methods must be non-empty");
    for (const MethodSpec& m : c.methods) {
        const auto& names = known_methods();
        if (std::find(names.begin(), names.end(), m.name) == names.end())
            throw std::invalid_argument("config: unknown method " + m.name);
        validate(m.params);
        if (m.name == "glasso_cv")
            for (int T : c.T_list)
                if (T < 2 * m.params.cv_folds)
                    throw std::invalid_argument(
                        "config: glasso_cv needs every T >= 2*cv_folds");
    }
    if (c.threads < 0) throw std::invalid_argument("config: threads must be >= 0");
}

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j,
                                const std::vector<std::string>& allowed,
                                const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
            throw std::invalid_argument("config: unknown key \"" + it.key() + "\" in " +
                                        where);
}

inline DetectionParams params_from_json(const nlohmann::json& j) {
    reject_unknown_keys(j,
                        {"alpha", "tau", "q", "sidedness", "lambda_grid", "cv_folds",
                         "em_max_iter", "em_tol"},
                        "method params");
    DetectionParams p;
    if (j.contains("alpha")) p.alpha = j.at("alpha").get<double>();
    if (j.contains("tau")) p.tau = j.at("tau").get<double>();
    if (j.contains("q")) p.q = j.at("q").get<double>();
    if (j.contains("sidedness"))
        p.sidedness = sidedness_from_string(j.at("sidedness").get<std::string>());
    if (j.contains("lambda_grid"))
        p.lambda_grid = j.at("lambda_grid").get<std::vector<double>>();
    if (j.contains("cv_folds")) p.cv_folds = j.at("cv_folds").get<int>();
    if (j.contains("em_max_iter")) p.em_max_iter = j.at("em_max_iter").get<int>();
    if (j.contains("em_tol")) p.em_tol = j.at("em_tol").get<double>();
    return p;
}

inline nlohmann::ordered_json params_to_json(const DetectionParams& p) {
    nlohmann::ordered_json j;
    j["alpha"] = p.alpha;
    j["tau"] = p.tau;
    j["q"] = p.q;
    j["sidedness"] = to_string(p.sidedness);
    j["lambda_grid"] = p.lambda_grid;
    j["cv_folds"] = p.cv_folds;
    j["em_max_iter"] = p.em_max_iter;
    j["em_tol"] = p.em_tol;
    return j;
}

} // namespace detail

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    detail::reject_unknown_keys(
        j,
        {"p", "cohort", "cohort_size", "b_min", "T_list", "replicates", "mode",
         "estimators", "methods", "master_seed", "output_dir", "threads"},
        "config");
    ExperimentConfig c;
    if (j.contains("p")) c.p = j.at("p").get<int>();
    if (j.contains("cohort")) {
        const auto& cohort = j.at("cohort");
        if (cohort.is_string()) {
            if (cohort.get<std::string>() != "auto")
                throw std::invalid_argument("config: cohort must be \"auto\" or a cell list");
        } else {
            for (const auto& cell : cohort) {
                if (!cell.is_array() || cell.size() != 2)
                    throw std::invalid_argument("config: each cohort cell is a [b, d] pair");
                c.cohort_cells.emplace_back(cell.at(0).get<double>(),
                                            cell.at(1).get<double>());
            }
        }
    }
    if (j.contains("cohort_size")) c.cohort_size = j.at("cohort_size").get<int>();
    if (j.contains("b_min")) c.b_min = j.at("b_min").get<double>();
    if (j.contains("T_list")) c.T_list = j.at("T_list").get<std::vector<int>>();
    if (j.contains("replicates")) c.replicates = j.at("replicates").get<int>();
    if (j.contains("mode"))
        c.mode = matrix_mode_from_string(j.at("mode").get<std::string>());
    if (j.contains("estimators")) {
        c.estimators.clear();
        for (const auto& e : j.at("estimators"))
            c.estimators.push_back(connectivity_kind_from_string(e.get<std::string>()));
    }
    if (j.contains("methods")) {
        c.methods.clear();
        const auto& methods = j.at("methods");
        if (methods.is_array()) {
            for (const auto& m : methods) c.methods.push_back({m.get<std::string>(), {}});
        } else {
            for (auto it = methods.begin(); it != methods.end(); ++it)
                c.methods.push_back({it.key(), detail::params_from_json(it.value())});
        }
    }
    if (j.contains("master_seed")) c.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("threads")) {
        const auto& t = j.at("threads");
        if (t.is_string()) {
            if (t.get<std::string>() != "auto")
                throw std::invalid_argument("config: threads must be \"auto\" or an integer");
            c.threads = 0;
        } else {
            c.threads = t.get<int>();
        }
    }
    validate(c);
    return c;
}

inline ExperimentConfig load_config(std::istream& is) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(is);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    try {
        return config_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
}

inline ExperimentConfig load_config_string(const std::string& text) {
    std::istringstream is(text);
    return load_config(is);
}

// Canonical serialization: fixed key order, so equal configs hash equal.
inline std::string config_json(const ExperimentConfig& c) {
    nlohmann::ordered_json j;
    j["p"] = c.p;
    if (c.cohort_cells.empty()) {
        j["cohort"] = "auto";
    } else {
        nlohmann::ordered_json cells = nlohmann::ordered_json::array();
        for (const auto& [b, d] : c.cohort_cells)
            cells.push_back(nlohmann::ordered_json::array({b, d}));
        j["cohort"] = cells;
    }
    j["cohort_size"] = c.cohort_size;
    j["b_min"] = c.b_min;
    j["T_list"] = c.T_list;
    j["replicates"] = c.replicates;
    j["mode"] = to_string(c.mode);
    nlohmann::ordered_json est = nlohmann::ordered_json::array();
    for (ConnectivityKind k : c.estimators) est.push_back(to_string(k));
    j["estimators"] = est;
    nlohmann::ordered_json methods;
    for (const MethodSpec& m : c.methods) methods[m.name] = detail::params_to_json(m.params);
    j["methods"] = methods;
    j["master_seed"] = c.master_seed;
    j["output_dir"] = c.output_dir;
    if (c.threads == 0)
        j["threads"] = "auto";
    else
        j["threads"] = c.threads;
    return j.dump(2) + "\n";
}

inline std::uint64_t config_hash(const ExperimentConfig& c) {
    return fnv1a64(config_json(c));
}

} // namespace connbench
