#ifndef NONCLASS_MULTICOPY_HPP
#define NONCLASS_MULTICOPY_HPP

#include <string>
#include <vector>

#include "nonclass/boson_algebra.hpp"
#include "nonclass/fock_engine.hpp"
#include "nonclass/moment_matrix.hpp"

namespace nonclass {

enum class CompactFormTag {
  L0_minus_Lx,         // B_12
  two_L0sq_minus_Lxsq,  // B_14
  two_Lysq_normal,     // B_23
  B123_form,
  f1235_form,          // B_1235 = :f f: with Hermitian f
  B25_form,
  none,
};

/// Hermitian observable on |S| replicas whose expectation on rho^(x)|S|
/// equals the principal minor d_S.
struct MulticopyObservable {
  std::vector<int> subset;  // sorted 1-based minor indices
  int copies = 0;
  BosonPolynomial polynomial;  // over replica modes 0..copies-1
  CompactFormTag tag = CompactFormTag::none;
};

/// Symmetrized operator determinant over all replica permutations.  The
/// (i,j) entry of the un-averaged operator matrix is the normal-ordered
/// product (first-column operator of row i)^dag . (first-row operator of
/// column j) placed wholly on row i's replica mode.  |S| must be 2..4 and
/// max(S) <= 6.
MulticopyObservable build_multicopy(std::vector<int> subset);

/// Tr(rho^(x)k B): evaluated by exact per-monomial factorization over the
/// product state; the imaginary part must vanish to 1e-9 relative.
double multicopy_expectation(const FockDensityOperator& rho,
                             const MulticopyObservable& b);

/// The tagged compact form rebuilt from Schwinger operators.
BosonPolynomial compact_form(CompactFormTag tag);

/// Hermitian f_1235 with B_1235 = :f f:, built as
/// (1/sqrt(6)) sum_{sigma in P_4} L_z^{s1 s2} L_y^{s3 s4} over even
/// permutations.
BosonPolynomial f1235();

struct FormCheck {
  bool ok = false;
  std::string report;  // differing monomials on failure
};

/// Exact polynomial equality between the symmetrized-determinant
/// construction and the compact angular-momentum form.
FormCheck compact_form_check(const MulticopyObservable& b);

/// Under the three-mode rotation that concentrates the coherent component,
/// the vector (L_y^23, L_y^31, L_y^12) transforms by the same orthogonal
/// matrix as the mode operators; the analogous statement fails for the
/// L_x and L_z component vectors.
bool ly_vector_rotation_check();

/// Transforming f_1235 by the tensor product of two 2-dimensional discrete
/// Fourier transforms yields
///   -sqrt(2/3) (L_x^23 L_y^23 + L_x^34 L_y^34 + L_x^42 L_y^42)
/// on the primed modes, up to a global sign (unobservable in :f f:).
FormCheck f1235_dft_form_check();

}  // namespace nonclass

#endif  // NONCLASS_MULTICOPY_HPP
