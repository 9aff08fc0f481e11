#include "nonclass/multicopy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nonclass {

namespace {

BosonPolynomial entry_operator(int row_index, int col_index) {
  // Normal-ordered product of the daggered first-column operator of the
  // row and the first-row operator of the column, on mode 0.
  const auto [ni, li] = index_map(row_index);
  const auto [nj, lj] = index_map(col_index);
  return BosonPolynomial::monomial(
      make_monomial(0, (ni - li) + lj, li + (nj - lj)));
}

CompactFormTag tag_for_subset(const std::vector<int>& s) {
  if (s == std::vector<int>{1, 2}) return CompactFormTag::L0_minus_Lx;
  if (s == std::vector<int>{1, 4}) return CompactFormTag::two_L0sq_minus_Lxsq;
  if (s == std::vector<int>{2, 3}) return CompactFormTag::two_Lysq_normal;
  if (s == std::vector<int>{2, 5}) return CompactFormTag::B25_form;
  if (s == std::vector<int>{1, 2, 3}) return CompactFormTag::B123_form;
  if (s == std::vector<int>{1, 2, 3, 5}) return CompactFormTag::f1235_form;
  return CompactFormTag::none;
}

}  // namespace

MulticopyObservable build_multicopy(std::vector<int> subset) {
  std::sort(subset.begin(), subset.end());
  const int k = static_cast<int>(subset.size());
  if (k < 2 || k > 4)
    throw std::invalid_argument("build_multicopy: |S| must be 2..4");
  if (subset.front() < 1 || subset.back() > 6)
    throw std::invalid_argument("build_multicopy: indices must lie in 1..6");
  if (std::adjacent_find(subset.begin(), subset.end()) != subset.end())
    throw std::invalid_argument("build_multicopy: repeated index");

  std::vector<std::vector<BosonPolynomial>> entries(k,
                                                    std::vector<BosonPolynomial>(k));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      entries[i][j] = entry_operator(subset[i], subset[j]);

  std::vector<int> row_to_mode(k);
  std::iota(row_to_mode.begin(), row_to_mode.end(), 0);

  MulticopyObservable b;
  b.subset = subset;
  b.copies = k;
  b.polynomial = operator_determinant(entries, row_to_mode,
                                      PermutationGroup::all_permutations);
  b.tag = tag_for_subset(subset);
  return b;
}

double multicopy_expectation(const FockDensityOperator& rho,
                             const MulticopyObservable& b) {
  if (rho.cutoff < b.polynomial.max_single_exponent())
    throw std::invalid_argument(
        "multicopy_expectation: cutoff below polynomial degree");
  const cd v = product_state_expectation(rho, b.copies, b.polynomial);
  if (std::abs(v.imag()) > 1e-9 * (1.0 + std::abs(v.real())))
    throw std::runtime_error("multicopy_expectation: imaginary residue " +
                             std::to_string(v.imag()));
  return v.real();
}

BosonPolynomial f1235() {
  BosonPolynomial f;
  std::vector<int> perm{0, 1, 2, 3};
  do {
    int inversions = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (perm[i] > perm[j]) ++inversions;
    if (inversions % 2 != 0) continue;  // even permutations only
    f += multiply(schwinger(Schwinger::z, perm[0], perm[1]),
                  schwinger(Schwinger::y, perm[2], perm[3]));
  } while (std::next_permutation(perm.begin(), perm.end()));
  f *= cd(1.0 / std::sqrt(6.0));
  f.prune();
  return f;
}

BosonPolynomial compact_form(CompactFormTag tag) {
  const auto l0 = schwinger(Schwinger::zero, 0, 1);
  const auto lx = schwinger(Schwinger::x, 0, 1);
  const auto ly = schwinger(Schwinger::y, 0, 1);
  const auto lz = schwinger(Schwinger::z, 0, 1);
  switch (tag) {
    case CompactFormTag::L0_minus_Lx:
      return l0 - lx;
    case CompactFormTag::two_L0sq_minus_Lxsq:
      return 2.0 * (multiply(l0, l0) - multiply(lx, lx));
    case CompactFormTag::two_Lysq_normal:
      return 2.0 * nmul(ly, ly);
    case CompactFormTag::B123_form: {
      const BosonPolynomial sum = schwinger(Schwinger::y, 0, 1) +
                                  schwinger(Schwinger::y, 1, 2) +
                                  schwinger(Schwinger::y, 2, 0);
      return (2.0 / 3.0) * nmul(sum, sum);
    }
    case CompactFormTag::f1235_form: {
      const BosonPolynomial f = f1235();
      return nmul(f, f);  // B_1235 = :f f: with f Hermitian
    }
    case CompactFormTag::B25_form:
      return nmul(l0 - lx, nmul(l0, l0) - nmul(lz, lz));
    case CompactFormTag::none:
      break;
  }
  throw std::invalid_argument("compact_form: observable has no tagged form");
}

FormCheck compact_form_check(const MulticopyObservable& b) {
  if (b.tag == CompactFormTag::none)
    return {false, "no compact form tagged for this subset"};
  const BosonPolynomial expected = compact_form(b.tag);
  FormCheck out;
  out.ok = approx_equal(b.polynomial, expected, 1e-12);
  if (!out.ok) out.report = diff_report(b.polynomial, expected, 1e-12);
  return out;
}

namespace {

ModeUnitary three_mode_concentrator() {
  Eigen::MatrixXcd r(3, 3);
  const double s3 = 1.0 / std::sqrt(3.0), s2 = 1.0 / std::sqrt(2.0),
               s6 = 1.0 / std::sqrt(6.0);
  r << s3, s3, s3, s2, -s2, 0.0, s6, s6, -2.0 * s6;
  return ModeUnitary(r);
}

}  // namespace

bool ly_vector_rotation_check() {
  const ModeUnitary r = three_mode_concentrator();
  // Paper pairs (2,3), (3,1), (1,2) are modes (1,2), (2,0), (0,1) here.
  const auto component = [](Schwinger c) {
    return std::array<BosonPolynomial, 3>{schwinger(c, 1, 2), schwinger(c, 2, 0),
                                          schwinger(c, 0, 1)};
  };
  const double s3 = 1.0 / std::sqrt(3.0), s2 = 1.0 / std::sqrt(2.0),
               s6 = 1.0 / std::sqrt(6.0);

  const auto rotates_identically = [&](Schwinger c) {
    const auto v = component(c);
    const BosonPolynomial row1 = s3 * (v[0] + v[1] + v[2]);
    const BosonPolynomial row2 = s2 * (v[0] - v[1]);
    const BosonPolynomial row3 = s6 * (v[0] + v[1] - 2.0 * v[2]);
    return approx_equal(transform_modes(v[0], r), row1) &&
           approx_equal(transform_modes(v[1], r), row2) &&
           approx_equal(transform_modes(v[2], r), row3);
  };

  return rotates_identically(Schwinger::y) &&
         !rotates_identically(Schwinger::x) &&
         !rotates_identically(Schwinger::z);
}

FormCheck f1235_dft_form_check() {
  Eigen::MatrixXcd h(4, 4);
  h << 1, 1, 1, 1, 1, -1, 1, -1, 1, 1, -1, -1, 1, -1, -1, 1;
  h *= 0.5;
  const BosonPolynomial transformed = transform_modes(f1235(), ModeUnitary(h));

  // Pairs (2,3), (3,4), (4,2) on the primed modes are (1,2), (2,3), (3,1).
  BosonPolynomial expected;
  for (const auto& [k, l] : std::vector<std::pair<int, int>>{{1, 2}, {2, 3}, {3, 1}})
    expected += multiply(schwinger(Schwinger::x, k, l), schwinger(Schwinger::y, k, l));
  expected *= cd(-std::sqrt(2.0 / 3.0));

  FormCheck out;
  out.ok = approx_equal(transformed, expected, 1e-12) ||
           approx_equal(transformed, cd(-1.0) * expected, 1e-12);
  if (!out.ok) out.report = diff_report(transformed, expected, 1e-12);
  return out;
}

}  // namespace nonclass
