#ifndef NONCLASS_FOCK_ENGINE_HPP
#define NONCLASS_FOCK_ENGINE_HPP

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "nonclass/boson_algebra.hpp"

namespace nonclass {

/// Truncated Fock-space density operator on `modes` modes with a common
/// per-mode dimension `cutoff` (levels 0..cutoff-1).  `tail_mass` records
/// the probability weight lost to truncation as declared by the
/// constructor; `renormalization` is the trace deficit that was explicitly
/// scaled away (never silently).  Construction enforces Hermiticity (1e-12),
/// unit trace (1e-9) and spectrum >= -1e-10; a negative eigenvalue is a
/// constructor bug and throws rather than being clipped.
struct FockDensityOperator {
  int modes = 1;
  int cutoff = 2;
  Eigen::MatrixXcd matrix;
  double tail_mass = 0.0;
  double renormalization = 0.0;
  std::optional<Eigen::VectorXcd> pure_vector;  // set when the state is pure

  Eigen::Index dim() const { return matrix.rows(); }
  bool is_pure() const { return pure_vector.has_value(); }
};

/// Validating factory. `check_spectrum` may be disabled by callers that
/// construct from a manifestly positive form (unitary conjugation of a
/// checked state, tensor products of checked states).
FockDensityOperator make_density(int modes, int cutoff, Eigen::MatrixXcd matrix,
                                 double tail_mass, double renormalization,
                                 std::optional<Eigen::VectorXcd> pure_vector = {},
                                 bool check_spectrum = true);

/// Pure-state convenience: normalizes `psi`, records the normalization
/// deficit as tail mass.
FockDensityOperator density_from_vector(int modes, int cutoff,
                                        Eigen::VectorXcd psi,
                                        double declared_tail = 0.0);

/// Truncated ladder pair: a|n> = sqrt(n)|n-1>, adag = a^dagger.
/// Throws for cutoff < 2.
std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> ladder(int cutoff);

/// Matrix of a^dag^p a^q on the truncated single-mode space.  Elements of a
/// normal-ordered monomial are exact at any cutoff (no boundary loss).
Eigen::MatrixXcd single_mode_op(int cutoff, int dag_p, int plain_q);

/// <m| a^dag^p a^q |n> without building the matrix.
double ladder_amplitude(int n, int dag_p, int plain_q);

/// Dense matrix of a BosonPolynomial on the `modes`-mode tensor space with
/// per-mode dimension `cutoff`.  Mode 0 is the most significant index.
/// Throws when a mode index is out of range or the dimension is excessive.
Eigen::MatrixXcd eval_polynomial(const BosonPolynomial& p, int cutoff, int modes);

/// Tr(rho . op); dimension mismatch throws.
cd expectation(const FockDensityOperator& rho, const Eigen::MatrixXcd& op);

/// Tr(rho . op) for Hermitian op: asserts |Im| <= 1e-9 (1 + |Re|).
double real_expectation(const FockDensityOperator& rho, const Eigen::MatrixXcd& op);

/// Tr(rho . a^dag^p a^q) for a single-mode state, O(cutoff) banded trace.
cd moment_expectation(const FockDensityOperator& rho, int dag_p, int plain_q);

/// Tr(rho^(x)k . p) for a single-mode rho and a polynomial over k replica
/// modes: every monomial factorizes across the product state, so the trace
/// is evaluated exactly without materializing rho^(x)k.
cd product_state_expectation(const FockDensityOperator& rho, int copies,
                             const BosonPolynomial& p);

/// rho^(x)k as a dense operator.  The Hilbert-space dimension cutoff^k
/// must stay within `max_dim` or a resource error naming the required
/// dimension is thrown.
FockDensityOperator tensor_power(const FockDensityOperator& rho, int copies,
                                 Eigen::Index max_dim = 4096);

double purity(const FockDensityOperator& rho);

/// Photon-number distribution (diagonal in the Fock basis).
Eigen::VectorXd number_distribution(const FockDensityOperator& rho);

}  // namespace nonclass

#endif  // NONCLASS_FOCK_ENGINE_HPP
