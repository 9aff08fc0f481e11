#ifndef NONCLASS_MINOR_CRITERIA_HPP
#define NONCLASS_MINOR_CRITERIA_HPP

#include <optional>
#include <string>
#include <vector>

#include "nonclass/moment_matrix.hpp"
#include "nonclass/state_library.hpp"

namespace nonclass {

/// Minors below -detection_epsilon flag nonclassicality; threshold
/// conditions held with equality are classified classical (the
/// inequalities are strict).
inline constexpr double kDetectionEpsilon = 1e-9;

struct MinorResult {
  std::vector<int> subset;  // sorted, 1-based
  double value = 0.0;
  bool nonclassical_detected = false;
  std::string provenance;
  bool dominant = false;
};

/// Dominant per the relaxed block rule: S must contain every index of the
/// leading complete blocks {1}, {2,3}, {4,5,6}, ... plus any subset of the
/// single next block.
bool is_dominant_subset(std::vector<int> subset);

/// Determinant of the submatrix of rows and columns S (1-based), via
/// pivoted LU in complex arithmetic.  The imaginary residue must stay below
/// 1e-9 (1 + |Re|); Hermiticity violations fail loudly.
MinorResult principal_minor(const MomentMatrix& m, std::vector<int> subset);

/// Closed forms of Tables I (Fock / squeezed / odd cat / even cat) and III
/// (squeezed thermal).  Throws for (family, subset) pairs that are not
/// tabulated.
double analytic_minor(const StateSpec& spec, std::vector<int> subset);

bool has_analytic_minor(const StateSpec& spec, std::vector<int> subset);

/// (nbar + 1/2) e^{-2r} < 1/2, the necessary-and-sufficient Gaussian
/// nonclassicality condition; coincides with analytic d_23 < 0.
bool gaussian_nonclassical(double nbar, double r);

/// Shift of d_15 under displacement by alpha: d_15(displaced) - d_15.
/// For squeezed states the squeezing angle enters through the phase of
/// <a^2> = -e^{i phi} sinh r cosh r.  Supported families: fock, squeezed,
/// cat_odd, cat_even.
double displacement_delta_d15(const StateSpec& spec, cd alpha);

/// The three factorizations of d_1235 for centered states.
struct D1235Forms {
  double direct = 0.0;        // 4x4 determinant
  double cofactor = 0.0;      // d_235 - <n>^2 d_23
  std::optional<double> block;  // d_23 (d_15 - c D_23^{-1} b); absent when
                                // D_23 is singular
  double product = 0.0;       // d_23 d_15 - x
  double x = 0.0;
};

/// Requires a centered state: |<a>| <= 1e-10 or throws.
D1235Forms d1235_decompositions(const MomentMatrix& m);

/// CSV row "family,params,subset,value,verdict,provenance" (no newline).
std::string minor_result_csv_row(const MinorResult& r, const std::string& family,
                                 const std::string& params);
inline constexpr const char* kMinorResultCsvHeader =
    "family,params,subset,value,verdict,provenance";

}  // namespace nonclass

#endif  // NONCLASS_MINOR_CRITERIA_HPP
