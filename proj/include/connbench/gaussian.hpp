#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "connbench/errors.hpp"
#include "connbench/io_util.hpp"
#include "connbench/rng.hpp"
#include "connbench/sym_matrix.hpp"

namespace connbench {

struct SampleSet {
    std::vector<double> data; // row-major, rows x cols
    int rows = 0;
    int cols = 0;
    std::uint64_t seed = 0;
    MatrixMode interpretation = MatrixMode::covariance;
    std::string source_id;

    double operator()(int t, int i) const {
        return data[static_cast<std::size_t>(t) * cols + i];
    }
};

// Draw T i.i.d. zero-mean Gaussian rows. Under the covariance interpretation
// x = L z with m = L L^T; under the precision interpretation we solve
// L^T x = z, giving cov(x) = m^{-1}. One matrix therefore serves as either a
// covariance or a precision ground truth without re-solving anything.
inline SampleSet sample_mvn(const SymMatrix& m, int T, std::uint64_t seed,
                            MatrixMode interpretation, std::string source_id = "") {
    if (T < 2) throw std::invalid_argument("sample_mvn: need at least two rows");
    const int p = m.dim();
    const CholeskyFactor L = cholesky(m);
    GaussianStream gs(derive_seed(seed, "sample_mvn"));

    SampleSet out;
    out.rows = T;
    out.cols = p;
    out.seed = seed;
    out.interpretation = interpretation;
    out.source_id = std::move(source_id);
    out.data.resize(static_cast<std::size_t>(T) * p);

    std::vector<double> z(static_cast<std::size_t>(p));
    for (int t = 0; t < T; ++t) {
        for (auto& v : z) v = gs.next();
        double* row = out.data.data() + static_cast<std::size_t>(t) * p;
        if (interpretation == MatrixMode::covariance) {
            for (int i = p - 1; i >= 0; --i) {
                double s = 0.0;
                for (int j = 0; j <= i; ++j) s += L(i, j) * z[static_cast<std::size_t>(j)];
                row[i] = s;
            }
        } else {
            L.solve_upper_transposed(z);
            for (int i = 0; i < p; ++i) row[i] = z[static_cast<std::size_t>(i)];
        }
    }
    return out;
}

// CSV with a sidecar comment first line; no column header, p columns per row.
inline void write_samples_csv(std::ostream& os, const SampleSet& x) {
    os << "# seed=" << x.seed << " interpretation=" << to_string(x.interpretation)
       << " source=" << (x.source_id.empty() ? "-" : x.source_id) << "\n";
    for (int t = 0; t < x.rows; ++t) {
        for (int i = 0; i < x.cols; ++i) {
            if (i) os << ",";
            os << fmt_g17(x(t, i));
        }
        os << "\n";
    }
}

inline SampleSet read_samples_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.empty() || line[0] != '#')
        throw SchemaMismatch("samples csv: missing sidecar comment line");
    SampleSet out;
    {
        std::istringstream hs(line.substr(1));
        std::string tok;
        while (hs >> tok) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = tok.substr(0, eq);
            const std::string val = tok.substr(eq + 1);
            if (key == "seed") out.seed = std::stoull(val);
            else if (key == "interpretation") out.interpretation = matrix_mode_from_string(val);
            else if (key == "source") out.source_id = (val == "-") ? "" : val;
        }
    }
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        if (out.cols == 0) {
            out.cols = static_cast<int>(fields.size());
        } else if (static_cast<int>(fields.size()) != out.cols) {
            throw SchemaMismatch("samples csv: ragged row");
        }
        for (const auto& f : fields) out.data.push_back(std::stod(f));
        ++out.rows;
    }
    if (out.rows < 2) throw SchemaMismatch("samples csv: need at least two rows");
    return out;
}

} // namespace connbench
