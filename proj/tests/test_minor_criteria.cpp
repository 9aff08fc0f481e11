#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nonclass/minor_criteria.hpp"

using namespace nonclass;

namespace {

MomentMatrix matrix_for(const StateSpec& spec, double tail = 1e-12) {
  return build_moment_matrix(make_state(spec, auto_cutoff(spec, tail, 4)), 6);
}

}  // namespace

TEST_CASE("fock |2>: d15 = -2 and the verdict fires") {
  const MinorResult r = principal_minor(matrix_for(fock_state(2)), {1, 5});
  CHECK(r.value == doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(r.nonclassical_detected);
  CHECK_FALSE(r.dominant);
}

TEST_CASE("squeezed r = 0.5: d23 = -sinh^2 r") {
  const MinorResult r = principal_minor(matrix_for(squeezed_state(0.5)), {2, 3});
  CHECK(r.value == doctest::Approx(-std::pow(std::sinh(0.5), 2)).epsilon(1e-9));
  CHECK(r.value == doctest::Approx(-0.27154).epsilon(1e-4));
  CHECK(r.nonclassical_detected);
}

TEST_CASE("coherent states null every minor") {
  const MomentMatrix m = matrix_for(coherent_state(cd(0.7, 0.3)));
  for (const auto& s : std::vector<std::vector<int>>{
           {1, 2}, {1, 5}, {2, 3}, {4, 6}, {1, 2, 3}, {2, 3, 5}, {1, 2, 3, 5}}) {
    const MinorResult r = principal_minor(m, s);
    CHECK(std::abs(r.value) < 1e-9);
    CHECK_FALSE(r.nonclassical_detected);
  }
}

TEST_CASE("principal_minor rejects bad subsets") {
  const MomentMatrix m = matrix_for(fock_state(1));
  CHECK_THROWS_AS(principal_minor(m, {}), std::invalid_argument);
  CHECK_THROWS_AS(principal_minor(m, {0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(principal_minor(m, {1, 7}), std::invalid_argument);
  CHECK_THROWS_AS(principal_minor(m, {2, 2}), std::invalid_argument);
}

TEST_CASE("dominance follows the relaxed block rule") {
  CHECK(is_dominant_subset({1}));
  CHECK(is_dominant_subset({1, 2}));
  CHECK(is_dominant_subset({1, 3}));
  CHECK(is_dominant_subset({1, 2, 3}));
  CHECK(is_dominant_subset({1, 2, 3, 5}));
  CHECK(is_dominant_subset({1, 2, 3, 4, 5, 6}));
  CHECK_FALSE(is_dominant_subset({1, 5}));
  CHECK_FALSE(is_dominant_subset({2, 3}));
  CHECK_FALSE(is_dominant_subset({1, 2, 5}));
  CHECK_FALSE(is_dominant_subset({4, 5, 6}));
}

TEST_CASE("analytic minors: the displayed closed forms") {
  CHECK(analytic_minor(fock_state(3), {1, 2, 3, 5}) == doctest::Approx(-27.0));
  CHECK(analytic_minor(fock_state(2), {1, 5}) == doctest::Approx(-2.0));
  const double r = 0.4;
  CHECK(analytic_minor(squeezed_state(r), {4, 6}) ==
        doctest::Approx(-2 * (1 + 3 * std::cosh(2 * r)) * std::pow(std::sinh(r), 4)));
  const double nbar = 0.5;
  CHECK(analytic_minor(squeezed_thermal_state(nbar, r), {1, 5}) ==
        doctest::Approx(0.25 * (1 - 2 * (1 + 2 * nbar) * std::cosh(2 * r) +
                                std::pow(1 + 2 * nbar, 2) * std::cosh(4 * r))));
  CHECK_THROWS_AS(analytic_minor(fock_state(1), {1, 2, 4, 5}),
                  std::invalid_argument);
  CHECK_THROWS_AS(analytic_minor(thermal_state(0.5), {1, 5}),
                  std::invalid_argument);
}

TEST_CASE("analytic minors match numerics across the four families") {
  for (const StateSpec& spec :
       {fock_state(2), squeezed_state(0.5), cat_state(false, 1.0),
        cat_state(true, 1.2)}) {
    const MomentMatrix m = matrix_for(spec);
    for (const auto& s : std::vector<std::vector<int>>{
             {1, 2}, {1, 5}, {2, 3}, {2, 5}, {4, 5}, {1, 2, 5}, {2, 3, 5},
             {1, 2, 3, 5}, {1, 2, 3, 4, 5}}) {
      const double ana = analytic_minor(spec, s);
      const double num = principal_minor(m, s).value;
      CHECK(std::abs(num - ana) <= 1e-8 * std::abs(ana) + 1e-10);
    }
  }
}

TEST_CASE("gaussian nonclassicality condition") {
  CHECK(gaussian_nonclassical(0.0, 0.1));
  CHECK_FALSE(gaussian_nonclassical(0.5, 0.0));
  // boundary (nbar + 1/2) e^{-2r} = 1/2 is classified classical
  const double r_boundary = 0.5 * std::log(2.0);
  CHECK_FALSE(gaussian_nonclassical(0.5, r_boundary));
  CHECK(gaussian_nonclassical(0.5, r_boundary + 1e-9));
}

TEST_CASE("gaussian verdict coincides with analytic d23 sign") {
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= 20; ++j) {
      const double nbar = 0.1 * i, r = 0.06 * j;
      const double d23 = analytic_minor(squeezed_thermal_state(nbar, r), {2, 3});
      CHECK(gaussian_nonclassical(nbar, r) == (d23 < 0.0));
    }
}

TEST_CASE("displacement deltas: fock and squeezed rows") {
  CHECK(displacement_delta_d15(fock_state(1), cd(1.0, 0.0)) == doctest::Approx(2.0));
  // theta_alpha = psi/2 +- pi/2 enhances: delta = 2 sinh r (sinh r - cosh r) < 0
  const double r = 0.5;
  const double delta =
      displacement_delta_d15(squeezed_state(r), std::exp(cd(0, M_PI / 2)));
  CHECK(delta ==
        doctest::Approx(2 * std::sinh(r) * (std::sinh(r) + std::cosh(r))));
  const double enhancing = displacement_delta_d15(squeezed_state(r), cd(1.0, 0.0));
  CHECK(enhancing ==
        doctest::Approx(2 * std::sinh(r) * (std::sinh(r) - std::cosh(r))));
  CHECK(enhancing < 0.0);
  CHECK_THROWS_AS(displacement_delta_d15(thermal_state(0.5), cd(1.0, 0.0)),
                  std::invalid_argument);
}

TEST_CASE("displacement deltas match numerics for all four families") {
  const cd alpha(0.6, 0.35);
  for (const StateSpec& spec : {fock_state(1), squeezed_state(0.4),
                                cat_state(false, 1.0), cat_state(true, 1.0)}) {
    const double d0 = principal_minor(matrix_for(spec), {1, 5}).value;
    const double d1 = principal_minor(matrix_for(displaced(spec, alpha)), {1, 5}).value;
    const double ana = displacement_delta_d15(spec, alpha);
    CHECK(std::abs((d1 - d0) - ana) < 1e-6 * (1.0 + std::abs(ana)));
  }
}

TEST_CASE("d1235 decompositions agree for fock and squeezed states") {
  for (const StateSpec& spec : {fock_state(2), squeezed_state(0.5)}) {
    const D1235Forms f = d1235_decompositions(matrix_for(spec));
    CHECK(f.cofactor == doctest::Approx(f.direct).epsilon(1e-9));
    CHECK(f.product == doctest::Approx(f.direct).epsilon(1e-9));
    REQUIRE(f.block.has_value());
    CHECK(*f.block == doctest::Approx(f.direct).epsilon(1e-9));
    CHECK(std::abs(f.x) < 1e-10);  // odd-order moments vanish
  }
  // Closed-form cross-check: fock d_1235 = d_15 d_23 = -n^3.
  const D1235Forms f = d1235_decompositions(matrix_for(fock_state(2)));
  CHECK(f.direct == doctest::Approx(-8.0).epsilon(1e-9));
}

TEST_CASE("d1235 decompositions with x != 0 on a centered ternary state") {
  const double b = 0.6, c = std::sqrt((1.0 - b * b) / 3.0);
  const StateSpec spec = superposition012_state(-std::sqrt(2.0) * c, b, c);
  const MomentMatrix m = matrix_for(spec);
  REQUIRE(std::abs(m.entry(1, 2)) < 1e-12);  // centered by construction
  const D1235Forms f = d1235_decompositions(m);
  CHECK(std::abs(f.x) > 1e-3);
  CHECK(std::abs(f.cofactor - f.direct) < 1e-10);
  CHECK(std::abs(f.product - f.direct) < 1e-10);
  REQUIRE(f.block.has_value());
  CHECK(std::abs(*f.block - f.direct) < 1e-10);
}

TEST_CASE("d1235 decompositions reject non-centered states") {
  CHECK_THROWS_AS(d1235_decompositions(matrix_for(coherent_state(cd(0.5, 0.0)))),
                  std::invalid_argument);
}

TEST_CASE("minor results serialize to the documented CSV schema") {
  const MinorResult r = principal_minor(matrix_for(fock_state(2)), {1, 5});
  const std::string row = minor_result_csv_row(r, "fock", "n=2");
  CHECK(row.rfind("fock,n=2,d15,-2.0000", 0) == 0);
  CHECK(row.find("nonclassical_detected") != std::string::npos);
  CHECK(row.find("numeric") != std::string::npos);
  CHECK(std::string(kMinorResultCsvHeader) ==
        "family,params,subset,value,verdict,provenance");
}

TEST_CASE("singular D23 skips the block form") {
  const D1235Forms f = d1235_decompositions(matrix_for(fock_state(0)));
  CHECK_FALSE(f.block.has_value());
  CHECK(f.direct == doctest::Approx(0.0));
}
