#pragma once

#include <stdexcept>
#include <string>

namespace connbench {

struct NotPositiveDefinite : std::runtime_error {
    explicit NotPositiveDefinite(const std::string& what) : std::runtime_error(what) {}
};

struct ZeroVariance : std::runtime_error {
    explicit ZeroVariance(const std::string& what) : std::runtime_error(what) {}
};

struct DegreesOfFreedom : std::runtime_error {
    explicit DegreesOfFreedom(const std::string& what) : std::runtime_error(what) {}
};

struct EMDegenerate : std::runtime_error {
    explicit EMDegenerate(const std::string& what) : std::runtime_error(what) {}
};

struct UndefinedAUC : std::runtime_error {
    explicit UndefinedAUC(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : std::runtime_error {
    explicit DimensionMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct CohortInfeasible : std::runtime_error {
    explicit CohortInfeasible(const std::string& what) : std::runtime_error(what) {}
};

struct SchemaMismatch : std::runtime_error {
    explicit SchemaMismatch(const std::string& what) : std::runtime_error(what) {}
};

} // namespace connbench
