#include "nonclass/moment_matrix.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace nonclass {

BlockIndex index_map(int j) {
  if (j < 1) throw std::invalid_argument("index_map: j must be >= 1");
  int n = 0;
  while ((n + 1) * (n + 2) / 2 + 1 <= j) ++n;
  const int l = j - n * (n + 1) / 2 - 1;
  return {n, l};
}

std::pair<int, int> first_row_operator(int j) {
  const auto [n, l] = index_map(j);
  return {l, n - l};
}

cd moment(const FockDensityOperator& rho, int k, int l) {
  if (k < 0 || l < 0) throw std::invalid_argument("moment: negative order");
  if (k + l > rho.cutoff)
    throw std::invalid_argument("moment: cutoff margin below operator order " +
                                std::to_string(k + l));
  return moment_expectation(rho, k, l);
}

MomentMatrix build_moment_matrix(const FockDensityOperator& rho, int n) {
  if (n < 1 || n > 6)
    throw std::invalid_argument("build_moment_matrix: N must be in 1..6");
  MomentMatrix m;
  m.size = n;
  m.entries.resize(n, n);
  m.provenance = "numeric";
  for (int i = 1; i <= n; ++i) {
    const auto [ni, li] = index_map(i);
    for (int j = 1; j <= n; ++j) {
      const auto [nj, lj] = index_map(j);
      m.entries(i - 1, j - 1) = moment(rho, (ni - li) + lj, li + (nj - lj));
    }
  }
  const double scale = std::max(1.0, m.entries.cwiseAbs().maxCoeff());
  if ((m.entries - m.entries.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::runtime_error("build_moment_matrix: Hermiticity residue above 1e-10");
  return m;
}

cd gaussian_moment_closed_form(double nbar, double r, int k, int l) {
  if (k < 0 || l < 0)
    throw std::invalid_argument("gaussian_moment_closed_form: negative order");
  if ((k + l) % 2 == 1) return 0.0;  // centered Gaussian, odd totals vanish
  const double m = nbar + 0.5;
  if (k == 0 && l == 0) return 1.0;
  if (k == 1 && l == 1) return m * std::cosh(2 * r) - 0.5;
  if ((k == 2 && l == 0) || (k == 0 && l == 2)) return -m * std::sinh(2 * r);
  if (k == 2 && l == 2)
    return 0.5 * m * m * (3 * std::cosh(4 * r) + 1) - 2 * m * std::cosh(2 * r) + 0.5;
  if ((k == 1 && l == 3) || (k == 3 && l == 1))
    return -1.5 * m * m * std::sinh(4 * r) + 1.5 * m * std::sinh(2 * r);
  if ((k == 4 && l == 0) || (k == 0 && l == 4))
    return 1.5 * m * m * (std::cosh(4 * r) - 1);
  throw std::invalid_argument("gaussian_moment_closed_form: untabulated order (" +
                              std::to_string(k) + "," + std::to_string(l) + ")");
}

MomentMatrix analytic_moment_matrix_gaussian(double nbar, double r, int n) {
  if (n < 1 || n > 6)
    throw std::invalid_argument("analytic_moment_matrix_gaussian: N must be in 1..6");
  MomentMatrix m;
  m.size = n;
  m.entries.resize(n, n);
  m.provenance = "analytic:squeezed_thermal";
  for (int i = 1; i <= n; ++i) {
    const auto [ni, li] = index_map(i);
    for (int j = 1; j <= n; ++j) {
      const auto [nj, lj] = index_map(j);
      m.entries(i - 1, j - 1) =
          gaussian_moment_closed_form(nbar, r, (ni - li) + lj, li + (nj - lj));
    }
  }
  return m;
}

std::string moment_matrix_to_json(const MomentMatrix& m) {
  nlohmann::json j;
  j["N"] = m.size;
  j["provenance"] = m.provenance;
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.size; ++i)
    for (int k = 0; k < m.size; ++k)
      rows.push_back({{"re", m.entries(i, k).real()}, {"im", m.entries(i, k).imag()}});
  j["entries_row_major"] = rows;
  return j.dump(2);
}

MomentMatrix moment_matrix_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  MomentMatrix m;
  m.size = j.at("N").get<int>();
  m.provenance = j.at("provenance").get<std::string>();
  m.entries.resize(m.size, m.size);
  const auto& rows = j.at("entries_row_major");
  for (int i = 0; i < m.size; ++i)
    for (int k = 0; k < m.size; ++k) {
      const auto& e = rows.at(i * m.size + k);
      m.entries(i, k) = cd(e.at("re").get<double>(), e.at("im").get<double>());
    }
  return m;
}

}  // namespace nonclass
