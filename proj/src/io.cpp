#include "vcm/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace vcm {

namespace fs = std::filesystem;

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void atomic_write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad number: " + s);
  return v;
}

}  // namespace

std::string coefficients_to_csv(const CoefficientMatrix& a) {
  std::string out = "j,k,value\n";
  for (int j = 0; j < a.p(); ++j)
    for (int k = 0; k < a.cols(); ++k)
      out += std::to_string(j) + ',' + std::to_string(k) + ',' +
             fmt17(a.entries(j, k)) + '\n';
  return out;
}

Eigen::MatrixXd coefficient_entries_from_csv(const std::string& text) {
  const auto rows = lines_of(text);
  if (rows.empty() || rows[0] != "j,k,value")
    throw std::invalid_argument("coefficient csv: bad header");
  int max_j = -1, max_k = -1;
  std::vector<std::tuple<int, int, double>> cells;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = split(rows[i], ',');
    if (f.size() != 3) throw std::invalid_argument("coefficient csv: bad row");
    const int j = std::stoi(f[0]), k = std::stoi(f[1]);
    cells.emplace_back(j, k, parse_double(f[2]));
    max_j = std::max(max_j, j);
    max_k = std::max(max_k, k);
  }
  if (max_j < 0) throw std::invalid_argument("coefficient csv: empty");
  Eigen::MatrixXd entries = Eigen::MatrixXd::Zero(max_j + 1, max_k + 1);
  for (auto [j, k, v] : cells) entries(j, k) = v;
  return entries;
}

std::string dataset_to_csv(const Dataset& data) {
  std::string out = "i,t,Y";
  for (int j = 1; j <= data.p(); ++j) out += ",W_" + std::to_string(j);
  out += '\n';
  for (int i = 0; i < data.n(); ++i) {
    out += std::to_string(i) + ',' + fmt17(data.times[i]) + ',' + fmt17(data.Y(i));
    for (int j = 0; j < data.p(); ++j) out += ',' + fmt17(data.W(j, i));
    out += '\n';
  }
  return out;
}

Dataset dataset_from_csv(const std::string& text, double sigma) {
  const auto rows = lines_of(text);
  if (rows.empty()) throw std::invalid_argument("dataset csv: empty");
  const auto header = split(rows[0], ',');
  if (header.size() < 4 || header[0] != "i" || header[1] != "t" || header[2] != "Y")
    throw std::invalid_argument("dataset csv: bad header, expected i,t,Y,W_1,...");
  const int p = static_cast<int>(header.size()) - 3;
  const int n = static_cast<int>(rows.size()) - 1;
  if (n < 1) throw std::invalid_argument("dataset csv: no observations");
  Dataset data;
  data.sigma = sigma;
  data.W.resize(p, n);
  data.times.resize(static_cast<std::size_t>(n));
  data.Y.resize(n);
  for (int i = 0; i < n; ++i) {
    const auto f = split(rows[static_cast<std::size_t>(i) + 1], ',');
    if (static_cast<int>(f.size()) != p + 3)
      throw std::invalid_argument("dataset csv: row width mismatch");
    data.times[static_cast<std::size_t>(i)] = parse_double(f[1]);
    data.Y(i) = parse_double(f[2]);
    for (int j = 0; j < p; ++j) data.W(j, i) = parse_double(f[static_cast<std::size_t>(j) + 3]);
  }
  data.validate();
  return data;
}

void write_fit_result(const fs::path& dir, const FitResult& result,
                      const SolverSettings& settings, std::uint64_t seed) {
  fs::create_directories(dir);
  atomic_write_file(dir / "coefficients.csv", coefficients_to_csv(result.A_hat));
  std::string meta;
  meta += "delta = " + fmt17(result.delta_used) + '\n';
  meta += "iterations = " + std::to_string(result.iterations) + '\n';
  meta += "kkt_residual = " + fmt17(result.kkt_residual) + '\n';
  meta += "converged = " + std::string(result.converged ? "1" : "0") + '\n';
  meta += "objective = " +
          fmt17(result.objective_trace.empty() ? 0.0 : result.objective_trace.back()) +
          '\n';
  meta += "seed = " + std::to_string(seed) + '\n';
  meta += "solver.max_iters = " + std::to_string(settings.max_iters) + '\n';
  meta += "solver.rel_tol = " + fmt17(settings.rel_tol) + '\n';
  meta += "solver.backtrack = " + fmt17(settings.step_backtrack_factor) + '\n';
  meta += "solver.restart = " + std::string(settings.restart ? "1" : "0") + '\n';
  atomic_write_file(dir / "fit_meta.txt", meta);
}

}  // namespace vcm
