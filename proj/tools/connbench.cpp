#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "connbench/bench.hpp"
#include "connbench/cohort.hpp"
#include "connbench/config.hpp"
#include "connbench/plot.hpp"
#include "connbench/psd_generation.hpp"

namespace {

// a:b:step, endpoints inclusive with a small slack against step rounding.
std::vector<double> parse_grid(const std::string& text) {
    const std::vector<std::string> parts = connbench::split(text, ':');
    if (parts.size() != 3)
        throw std::invalid_argument("grid must be a:b:step, got \"" + text + "\"");
    double a = 0.0, b = 0.0, step = 0.0;
    try {
        a = std::stod(parts[0]);
        b = std::stod(parts[1]);
        step = std::stod(parts[2]);
    } catch (const std::exception&) {
        throw std::invalid_argument("grid must be numeric a:b:step, got \"" + text + "\"");
    }
    if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
    if (b < a) throw std::invalid_argument("grid end must be >= start");
    std::vector<double> values;
    for (int k = 0;; ++k) {
        const double v = a + k * step;
        if (v > b + 1e-12) break;
        values.push_back(std::min(v, b));
    }
    return values;
}

connbench::ExperimentConfig read_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("config: cannot open " + path);
    return connbench::load_config(is);
}

int cmd_generate(const std::string& config_path, const std::string& out_override) {
    const connbench::ExperimentConfig config = read_config(config_path);
    const std::string dir = out_override.empty() ? config.output_dir : out_override;
    const std::vector<connbench::CohortEntry> cohort = connbench::build_cohort(config);
    connbench::write_cohort(dir, cohort, config);
    std::cout << "wrote " << cohort.size() << " matrices to " << dir << "\n";
    return 0;
}

int cmd_feasibility(int p, const std::string& b_grid, const std::string& d_grid,
                    int seeds, std::uint64_t seed, int threads,
                    const std::string& out) {
    const std::vector<connbench::FeasibilityCell> cells = connbench::feasibility_map(
        p, parse_grid(b_grid), parse_grid(d_grid), seeds, seed, threads);
    connbench::write_file_atomic(out, connbench::feasibility_csv(cells));
    std::cout << "wrote " << cells.size() << " cells to " << out << "\n";
    return 0;
}

int cmd_bench(const std::string& config_path, const std::string& out, int threads) {
    connbench::ExperimentConfig config = read_config(config_path);
    if (threads >= 0) config.threads = threads;
    const std::vector<connbench::CohortEntry> cohort = connbench::build_cohort(config);
    connbench::write_cohort(out, cohort, config);
    const std::vector<connbench::RunRecord> records =
        connbench::run_benchmark(config, cohort);
    connbench::write_file_atomic(out + "/results.csv", connbench::records_csv(records));
    const int failures = connbench::count_failures(records);
    connbench::write_file_atomic(
        out + "/manifest.json",
        connbench::manifest_json(config, cohort.size(), records.size(), failures));
    std::cout << records.size() << " records, " << failures << " failures, written to "
              << out << "\n";
    return failures > 0 ? 4 : 0;
}

int cmd_sweep(const std::string& config_path, const std::string& grid_text,
              const std::string& out) {
    const connbench::ExperimentConfig config = read_config(config_path);
    const std::vector<connbench::CohortEntry> cohort = connbench::build_cohort(config);
    const std::vector<connbench::SweepRow> rows =
        connbench::threshold_sweep(config, cohort, parse_grid(grid_text));
    connbench::write_file_atomic(out, connbench::sweep_csv(rows));
    std::cout << "wrote " << rows.size() << " rows to " << out << "\n";
    return 0;
}

int cmd_plot(const std::string& figure, const std::string& in, const std::string& out) {
    std::ifstream is(in);
    if (!is) throw std::invalid_argument("plot: cannot open " + in);
    connbench::write_file_atomic(out, connbench::render_figure(figure, is));
    std::cout << "wrote " << out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Connectivity benchmark: matrix generation, detection methods, scoring"};
    app.require_subcommand(1);

    std::string config_path, out, in_path, figure, b_grid, d_grid, grid;
    int p = 51, seeds = 10, threads = -1;
    std::uint64_t seed = 0;

    CLI::App* generate = app.add_subcommand("generate", "Build and serialize the cohort");
    generate->add_option("--config", config_path, "JSON experiment config")->required();
    generate->add_option("--out", out, "Output directory (defaults to config output_dir)");

    CLI::App* feasibility =
        app.add_subcommand("feasibility", "Map the feasible (b, d) region");
    feasibility->add_option("--p", p, "Matrix dimension")->required();
    feasibility->add_option("--b-grid", b_grid, "Signal grid a:b:step")->required();
    feasibility->add_option("--d-grid", d_grid, "Density grid a:b:step")->required();
    feasibility->add_option("--seeds", seeds, "Attempts per cell")->required();
    feasibility->add_option("--seed", seed, "Base seed");
    feasibility->add_option("--threads", threads, "Worker threads (0 = auto)");
    feasibility->add_option("--out", out, "Output CSV path")->required();

    CLI::App* bench = app.add_subcommand("bench", "Run the full benchmark");
    bench->add_option("--config", config_path, "JSON experiment config")->required();
    bench->add_option("--out", out, "Output directory")->required();
    bench->add_option("--threads", threads, "Worker threads (overrides config)");

    CLI::App* sweep = app.add_subcommand("sweep", "Fixed-threshold accuracy sweep");
    sweep->add_option("--config", config_path, "JSON experiment config")->required();
    sweep->add_option("--grid", grid, "Threshold grid a:b:step")->required();
    sweep->add_option("--out", out, "Output CSV path")->required();

    CLI::App* plot = app.add_subcommand("plot", "Render a figure from a CSV");
    plot->add_option("--figure", figure,
                     "feasibility | auc_map | threshold_curves | method_map")
        ->required();
    plot->add_option("--in", in_path, "Input CSV path")->required();
    plot->add_option("--out", out, "Output SVG path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (generate->parsed()) return cmd_generate(config_path, out);
        if (feasibility->parsed())
            return cmd_feasibility(p, b_grid, d_grid, seeds, seed,
                                   threads < 0 ? 1 : threads, out);
        if (bench->parsed()) return cmd_bench(config_path, out, threads);
        if (sweep->parsed()) return cmd_sweep(config_path, grid, out);
        if (plot->parsed()) return cmd_plot(figure, in_path, out);
    } catch (const connbench::CohortInfeasible& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
