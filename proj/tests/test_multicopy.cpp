#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nonclass/minor_criteria.hpp"
#include "nonclass/multicopy.hpp"

using namespace nonclass;

namespace {

BosonPolynomial mono4(std::initializer_list<std::array<int, 3>> factors,
                      cd coeff) {
  MonomialKey key = 0;
  for (const auto& f : factors) key |= make_monomial(f[0], f[1], f[2]);
  return BosonPolynomial::monomial(key, coeff);
}

}  // namespace

TEST_CASE("B12 equals the displayed two-copy expansion") {
  const MulticopyObservable b = build_multicopy({1, 2});
  BosonPolynomial expected = 0.5 * BosonPolynomial::number(1);
  expected += 0.5 * BosonPolynomial::number(0);
  expected -= mono4({{0, 0, 1}, {1, 1, 0}}, 0.5);  // a_1 adag_2
  expected -= mono4({{1, 0, 1}, {0, 1, 0}}, 0.5);  // a_2 adag_1
  CHECK(approx_equal(b.polynomial, expected));
  CHECK(is_hermitian(b.polynomial));
}

TEST_CASE("B14 equals the displayed two-copy expansion") {
  const MulticopyObservable b = build_multicopy({1, 4});
  BosonPolynomial expected = mono4({{1, 2, 2}}, 0.5);
  expected += mono4({{0, 2, 2}}, 0.5);
  expected -= mono4({{0, 0, 2}, {1, 2, 0}}, 0.5);
  expected -= mono4({{1, 0, 2}, {0, 2, 0}}, 0.5);
  CHECK(approx_equal(b.polynomial, expected));
}

TEST_CASE("B23 equals n n - (adag^2 a^2 pair)/2") {
  const MulticopyObservable b = build_multicopy({2, 3});
  BosonPolynomial expected = mono4({{0, 1, 1}, {1, 1, 1}}, 1.0);
  expected -= mono4({{0, 2, 0}, {1, 0, 2}}, 0.5);
  expected -= mono4({{1, 2, 0}, {0, 0, 2}}, 0.5);
  CHECK(approx_equal(b.polynomial, expected));
}

TEST_CASE("B123 equals the displayed 21-term three-copy polynomial") {
  const MulticopyObservable b = build_multicopy({1, 2, 3});
  BosonPolynomial e;
  const double third = 1.0 / 3.0, sixth = 1.0 / 6.0;
  // (n_1 n_2 + n_0 n_2 + n_0 n_1)/3
  e += mono4({{1, 1, 1}, {2, 1, 1}}, third);
  e += mono4({{0, 1, 1}, {2, 1, 1}}, third);
  e += mono4({{0, 1, 1}, {1, 1, 1}}, third);
  // -(adag^2 a^2 pairs)/6
  e -= mono4({{1, 2, 0}, {2, 0, 2}}, sixth);
  e -= mono4({{1, 0, 2}, {2, 2, 0}}, sixth);
  e -= mono4({{0, 2, 0}, {2, 0, 2}}, sixth);
  e -= mono4({{0, 0, 2}, {2, 2, 0}}, sixth);
  e -= mono4({{0, 2, 0}, {1, 0, 2}}, sixth);
  e -= mono4({{0, 0, 2}, {1, 2, 0}}, sixth);
  // -(number-times-hopping terms)/3
  e -= mono4({{0, 1, 1}, {1, 1, 0}, {2, 0, 1}}, third);
  e -= mono4({{0, 1, 1}, {1, 0, 1}, {2, 1, 0}}, third);
  e -= mono4({{0, 0, 1}, {1, 1, 1}, {2, 1, 0}}, third);
  e -= mono4({{0, 1, 0}, {1, 1, 1}, {2, 0, 1}}, third);
  e -= mono4({{0, 0, 1}, {1, 1, 0}, {2, 1, 1}}, third);
  e -= mono4({{0, 1, 0}, {1, 0, 1}, {2, 1, 1}}, third);
  // +(adag^2 a a + permutations)/3
  e += mono4({{0, 2, 0}, {1, 0, 1}, {2, 0, 1}}, third);
  e += mono4({{0, 0, 1}, {1, 2, 0}, {2, 0, 1}}, third);
  e += mono4({{0, 0, 1}, {1, 0, 1}, {2, 2, 0}}, third);
  // +(a^2 adag adag + permutations)/3
  e += mono4({{0, 0, 2}, {1, 1, 0}, {2, 1, 0}}, third);
  e += mono4({{0, 1, 0}, {1, 0, 2}, {2, 1, 0}}, third);
  e += mono4({{0, 1, 0}, {1, 1, 0}, {2, 0, 2}}, third);
  CHECK(approx_equal(b.polynomial, e));
}

TEST_CASE("f1235 equals the displayed 24-term form") {
  const cd c = cd(0, -1.0) / (2.0 * std::sqrt(6.0));
  BosonPolynomial e;
  e += mono4({{0, 1, 1}, {1, 1, 0}, {2, 0, 1}}, c);
  e -= mono4({{0, 1, 0}, {1, 1, 1}, {2, 0, 1}}, c);
  e -= mono4({{0, 1, 1}, {1, 0, 1}, {2, 1, 0}}, c);
  e += mono4({{0, 0, 1}, {1, 1, 1}, {2, 1, 0}}, c);
  e += mono4({{0, 1, 0}, {1, 0, 1}, {2, 1, 1}}, c);
  e -= mono4({{0, 0, 1}, {1, 1, 0}, {2, 1, 1}}, c);
  e -= mono4({{0, 1, 1}, {1, 1, 0}, {3, 0, 1}}, c);
  e += mono4({{0, 1, 0}, {1, 1, 1}, {3, 0, 1}}, c);
  e += mono4({{0, 1, 1}, {2, 1, 0}, {3, 0, 1}}, c);
  e -= mono4({{1, 1, 1}, {2, 1, 0}, {3, 0, 1}}, c);
  e -= mono4({{0, 1, 0}, {2, 1, 1}, {3, 0, 1}}, c);
  e += mono4({{1, 1, 0}, {2, 1, 1}, {3, 0, 1}}, c);
  e += mono4({{0, 1, 1}, {1, 0, 1}, {3, 1, 0}}, c);
  e -= mono4({{0, 0, 1}, {1, 1, 1}, {3, 1, 0}}, c);
  e -= mono4({{0, 1, 1}, {2, 0, 1}, {3, 1, 0}}, c);
  e += mono4({{1, 1, 1}, {2, 0, 1}, {3, 1, 0}}, c);
  e += mono4({{0, 0, 1}, {2, 1, 1}, {3, 1, 0}}, c);
  e -= mono4({{1, 0, 1}, {2, 1, 1}, {3, 1, 0}}, c);
  e -= mono4({{0, 1, 0}, {1, 0, 1}, {3, 1, 1}}, c);
  e += mono4({{0, 0, 1}, {1, 1, 0}, {3, 1, 1}}, c);
  e += mono4({{0, 1, 0}, {2, 0, 1}, {3, 1, 1}}, c);
  e -= mono4({{1, 1, 0}, {2, 0, 1}, {3, 1, 1}}, c);
  e -= mono4({{0, 0, 1}, {2, 1, 0}, {3, 1, 1}}, c);
  e += mono4({{1, 0, 1}, {2, 1, 0}, {3, 1, 1}}, c);

  const BosonPolynomial f = f1235();
  CHECK(is_hermitian(f));
  CHECK(approx_equal(f, e, 1e-12));
}

TEST_CASE("compact forms hold as exact polynomial identities") {
  for (const auto& subset : std::vector<std::vector<int>>{
           {1, 2}, {1, 4}, {2, 3}, {2, 5}, {1, 2, 3}, {1, 2, 3, 5}}) {
    const MulticopyObservable b = build_multicopy(subset);
    REQUIRE(b.tag != CompactFormTag::none);
    const FormCheck check = compact_form_check(b);
    INFO(check.report);
    CHECK(check.ok);
  }
}

TEST_CASE("every built observable is Hermitian and permutation symmetric") {
  for (const auto& subset : std::vector<std::vector<int>>{
           {1, 2}, {1, 4}, {1, 5}, {2, 3}, {2, 5}, {1, 2, 3}, {1, 2, 3, 5}}) {
    const MulticopyObservable b = build_multicopy(subset);
    CHECK(is_hermitian(b.polynomial));
    // Relabel the replica modes by a cyclic shift: the observable must be
    // unchanged.
    Eigen::MatrixXcd perm = Eigen::MatrixXcd::Zero(b.copies, b.copies);
    for (int m = 0; m < b.copies; ++m) perm((m + 1) % b.copies, m) = 1.0;
    CHECK(approx_equal(transform_modes(b.polynomial, ModeUnitary(perm)),
                       b.polynomial, 1e-12));
  }
}

TEST_CASE("build_multicopy validates its subset") {
  CHECK_THROWS_AS(build_multicopy({1}), std::invalid_argument);
  CHECK_THROWS_AS(build_multicopy({1, 2, 3, 4, 5}), std::invalid_argument);
  CHECK_THROWS_AS(build_multicopy({1, 7}), std::invalid_argument);
}

TEST_CASE("L_y vector rotates like the mode operators; L_x and L_z do not") {
  CHECK(ly_vector_rotation_check());
}

TEST_CASE("DFT^(x)2 transform of f1235 matches the L_x L_y scalar product") {
  const FormCheck check = f1235_dft_form_check();
  INFO(check.report);
  CHECK(check.ok);
}

TEST_CASE("two-copy expectations reproduce the minors") {
  const MulticopyObservable b15 = build_multicopy({1, 5});
  const FockDensityOperator one = make_state(fock_state(1), 8);
  CHECK(multicopy_expectation(one, b15) == doctest::Approx(-1.0).epsilon(1e-12));

  const MulticopyObservable b23 = build_multicopy({2, 3});
  const StateSpec cat = cat_state(true, 1.0);
  const FockDensityOperator rho = make_state(cat, auto_cutoff(cat, 1e-12, 4));
  CHECK(multicopy_expectation(rho, b23) ==
        doctest::Approx(analytic_minor(cat, {2, 3})).epsilon(1e-9));

  const StateSpec coh = coherent_state(cd(0.8, 0.0));
  const FockDensityOperator c = make_state(coh, auto_cutoff(coh, 1e-12, 4));
  for (const auto& b : {b15, b23, build_multicopy({1, 2, 3, 5})})
    CHECK(std::abs(multicopy_expectation(c, b)) < 1e-8);
}

TEST_CASE("factorized expectation equals the materialized replica trace") {
  const FockDensityOperator th = make_state(thermal_state(0.6), 8);
  for (const auto& subset : std::vector<std::vector<int>>{{1, 5}, {2, 3}, {1, 2, 3}}) {
    const MulticopyObservable b = build_multicopy(subset);
    const FockDensityOperator big = tensor_power(th, b.copies, 1 << 10);
    const cd direct =
        expectation(big, eval_polynomial(b.polynomial, th.cutoff, b.copies));
    CHECK(std::abs(direct - cd(multicopy_expectation(th, b))) < 1e-10);
  }
}

TEST_CASE("B1235 expectation is displacement invariant") {
  const MulticopyObservable b = build_multicopy({1, 2, 3, 5});
  const FockDensityOperator base = make_state(fock_state(1), 24);
  const FockDensityOperator moved =
      make_state(displaced(fock_state(1), cd(0.5, 0.0)), 24);
  CHECK(multicopy_expectation(base, b) ==
        doctest::Approx(multicopy_expectation(moved, b)).epsilon(1e-6));
  CHECK(multicopy_expectation(base, b) == doctest::Approx(-1.0).epsilon(1e-10));
}
