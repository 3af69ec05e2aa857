#pragma once

#include <filesystem>
#include <string>

#include "vcm/design.hpp"
#include "vcm/model_core.hpp"
#include "vcm/solver.hpp"

namespace vcm {

// shortest round-trip decimal of a double (17 significant digits)
std::string fmt17(double x);

// write-to-temp then rename; no partial files on failure
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

// header j,k,value; row-major over (j,k)
std::string coefficients_to_csv(const CoefficientMatrix& a);
Eigen::MatrixXd coefficient_entries_from_csv(const std::string& text);

// header i,t,Y,W_1,...,W_p; sigma travels separately
std::string dataset_to_csv(const Dataset& data);
Dataset dataset_from_csv(const std::string& text, double sigma);

// coefficients.csv plus a key=value sidecar with delta, iterations,
// kkt_residual, convergence flag, seed and solver settings
void write_fit_result(const std::filesystem::path& dir, const FitResult& result,
                      const SolverSettings& settings, std::uint64_t seed);

}  // namespace vcm
