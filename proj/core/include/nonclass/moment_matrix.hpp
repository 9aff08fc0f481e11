#ifndef NONCLASS_MOMENT_MATRIX_HPP
#define NONCLASS_MOMENT_MATRIX_HPP

#include <string>

#include <Eigen/Dense>

#include "nonclass/fock_engine.hpp"
#include "nonclass/state_library.hpp"

namespace nonclass {

/// Column indices j are 1-based throughout, matching the d-subscripts in
/// reported minors.  Column j decomposes as j = n(n+1)/2 + l + 1 with
/// 0 <= l <= n: n is the block (total operator order), l the dagger order.
struct BlockIndex {
  int n_block;
  int l;
};

BlockIndex index_map(int j);

/// First-row operator of column j: a^dag^l a^(n-l), returned as exponents.
std::pair<int, int> first_row_operator(int j);

/// Hermitian matrix of normally-ordered moments.  entry(i,j) (1-based) is
/// <a^dag^((n_i - l_i) + l_j) a^(l_i + (n_j - l_j))>.
struct MomentMatrix {
  int size = 0;
  Eigen::MatrixXcd entries;
  std::string provenance;

  cd entry(int i, int j) const { return entries(i - 1, j - 1); }  // 1-based
};

/// <a^dag^k a^l> of a single-mode state; requires the cutoff margin to
/// cover the operator order.
cd moment(const FockDensityOperator& rho, int k, int l);

/// Builds D_N for N <= 6 and asserts Hermiticity to 1e-10.
MomentMatrix build_moment_matrix(const FockDensityOperator& rho, int n);

/// Moment matrix evaluated from tabulated closed forms instead of a state.
MomentMatrix analytic_moment_matrix_gaussian(double nbar, double r, int n);

/// Centered-Gaussian (squeezed thermal) closed-form moments; odd totals are
/// exactly zero, totals above 4 are untabulated and throw.
cd gaussian_moment_closed_form(double nbar, double r, int k, int l);

std::string moment_matrix_to_json(const MomentMatrix& m);
MomentMatrix moment_matrix_from_json(const std::string& text);

}  // namespace nonclass

#endif  // NONCLASS_MOMENT_MATRIX_HPP
