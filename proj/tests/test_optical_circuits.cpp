#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nonclass/minor_criteria.hpp"
#include "nonclass/moment_matrix.hpp"
#include "nonclass/optical_circuits.hpp"

using namespace nonclass;

TEST_CASE("fig1 compiles to the balanced beam-splitter matrix") {
  const ModeUnitary u = compile_mode_unitary(CircuitSpec::fig1());
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXcd expected(2, 2);
  expected << s, s, s, -s;
  CHECK((u.u - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("fig2 applies the -i phase before the beam splitter") {
  const ModeUnitary u = compile_mode_unitary(CircuitSpec::fig2());
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXcd expected(2, 2);
  expected << s, s * cd(0, -1), s, -s * cd(0, -1);
  CHECK((u.u - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("fig4's first two beam splitters realize the concentrator rotation") {
  CircuitSpec first_two = CircuitSpec::fig4();
  first_two.elements.resize(2);
  const ModeUnitary u = compile_mode_unitary(first_two);
  Eigen::MatrixXcd expected(3, 3);
  const double s3 = 1 / std::sqrt(3.0), s2 = 1 / std::sqrt(2.0), s6 = 1 / std::sqrt(6.0);
  expected << s3, s3, s3, s2, -s2, 0, s6, s6, -2 * s6;
  CHECK((u.u - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("transmittance-1 beam splitter only flips a sign") {
  const CircuitSpec c{2, {{ElementType::beam_splitter, 0, 1, 1.0}}};
  const ModeUnitary u = compile_mode_unitary(c);
  CHECK(std::abs(u.u(0, 0) - cd(1.0)) < 1e-14);
  CHECK(std::abs(u.u(1, 1) + cd(1.0)) < 1e-14);
  CHECK(std::abs(u.u(0, 1)) < 1e-14);
  // photon statistics unaffected
  const FockDensityOperator rho = make_state(fock_state(1), 6);
  CHECK(evolve_and_measure(c, rho, 2, {FunctionalKind::mean_n, 1, -1}) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("element validation") {
  CHECK_THROWS_AS(element_matrix({ElementType::beam_splitter, 0, 2, 0.5}, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(element_matrix({ElementType::beam_splitter, 0, 1, 1.5}, 2),
                  std::invalid_argument);
}

TEST_CASE("mode generator reproduces the unitary and flags the branch cut") {
  const ModeUnitary u = compile_mode_unitary(CircuitSpec::fig1());
  const ModeGenerator gen = mode_log_generator(u);
  CHECK(gen.branch_adjusted);  // the real beam splitter has eigenvalue -1
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gen.h);
  Eigen::MatrixXcd rebuilt = Eigen::MatrixXcd::Zero(2, 2);
  for (int i = 0; i < 2; ++i)
    rebuilt += std::exp(cd(0, -es.eigenvalues()(i))) *
               es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  CHECK((rebuilt - u.u).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("fock_unitary of the identity is the identity") {
  const ModeUnitary id(Eigen::MatrixXcd::Identity(2, 2));
  const Eigen::MatrixXcd u = fock_unitary(id, 4, 2);
  CHECK((u - Eigen::MatrixXcd::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("fock_unitary conserves total photon number") {
  const ModeUnitary u = compile_mode_unitary(CircuitSpec::fig2());
  const int d = 6;
  const Eigen::MatrixXcd uf = fock_unitary(u, d, 2);
  for (int n0 = 0; n0 < d; ++n0)
    for (int n1 = 0; n1 < d; ++n1)
      for (int m0 = 0; m0 < d; ++m0)
        for (int m1 = 0; m1 < d; ++m1)
          if (n0 + n1 != m0 + m1)
            CHECK(std::abs(uf(n0 * d + n1, m0 * d + m1)) < 1e-10);
}

TEST_CASE("fig1 splits a single photon evenly") {
  const int d = 5;
  const Eigen::MatrixXcd uf =
      fock_unitary(compile_mode_unitary(CircuitSpec::fig1()), d, 2);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(d * d);
  psi(1 * d + 0) = 1.0;  // |1, 0>
  const Eigen::VectorXcd out = uf * psi;
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(out(1 * d + 0) - cd(s)) < 1e-10);
  CHECK(std::abs(out(0 * d + 1) - cd(s)) < 1e-10);
  CHECK(std::abs(out.squaredNorm() - 1.0) < 1e-12);
}

TEST_CASE("dense fock unitary agrees with the sector evolution engine") {
  // Bounded support (2 photons per copy) keeps every populated sector
  // complete for both routes, so the two evolutions are both exact.
  const int d = 8;
  const FockDensityOperator rho = make_state(superposition012_state(0.6, 0.64, 0.48), d);
  const FockDensityOperator two = tensor_power(rho, 2, 128);
  for (const CircuitSpec& c : {CircuitSpec::fig1(), CircuitSpec::fig2(),
                               CircuitSpec::fig3(0.9, 0.7)}) {
    const Eigen::MatrixXcd uf = fock_unitary(compile_mode_unitary(c), d, 2, 4);
    const FockDensityOperator evolved = apply_fock_unitary(two, uf);
    for (const Functional f :
         {Functional{FunctionalKind::mean_n, 1, -1},
          Functional{FunctionalKind::mean_product, 0, 1},
          Functional{FunctionalKind::half_sq_diff_minus_half_sum, 0, 1}}) {
      const double dense = measure_functional(evolved, f);
      const double sector = evolve_and_measure(c, rho, 2, f);
      CHECK(dense == doctest::Approx(sector).epsilon(1e-9));
    }
  }
}

TEST_CASE("fig1 on two coherent copies leaves the second port dark") {
  const StateSpec spec = coherent_state(cd(0.8, 0.0));
  const FockDensityOperator rho = make_state(spec, auto_cutoff(spec, 1e-12, 2));
  const double dark = evolve_and_measure(CircuitSpec::fig1(), rho, 2,
                                         {FunctionalKind::mean_n, 1, -1});
  CHECK(std::abs(dark) < 1e-9);
}

TEST_CASE("fig1 on two thermal copies reports the thermal photon number") {
  const double nbar = 0.7;
  const FockDensityOperator rho = make_state(thermal_state(nbar), 40);
  const double d12 = evolve_and_measure(CircuitSpec::fig1(), rho, 2,
                                        {FunctionalKind::mean_n, 1, -1});
  CHECK(d12 == doctest::Approx(nbar).epsilon(1e-9));
}

TEST_CASE("fig2 on two single photons gives d23 = 1") {
  const FockDensityOperator rho = make_state(fock_state(1), 6);
  const double v = evolve_and_measure(
      CircuitSpec::fig2(), rho, 2,
      {FunctionalKind::half_sq_diff_minus_half_sum, 0, 1});
  CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("fig2 on squeezed copies produces perfect photon correlation") {
  const StateSpec spec = squeezed_state(0.5);
  const FockDensityOperator rho = make_state(spec, auto_cutoff(spec, 1e-12, 0));
  const auto [dist, embed] = evolve_joint_distribution(CircuitSpec::fig2(), rho, 2);
  double off = 0.0;
  for (int a = 0; a < embed; ++a)
    for (int b = 0; b < embed; ++b)
      if (a != b) off += dist(Eigen::Index(a) * embed + b);
  CHECK(off <= 1e-9);
}

TEST_CASE("circuit presets reproduce the minors") {
  const FockDensityOperator fock3 = make_state(fock_state(3), 9);
  CHECK(circuit_minor(MinorPreset::d15, fock3) == doctest::Approx(-3.0).epsilon(1e-11));

  // Displaced squeezed state: d123 is displacement invariant; value from
  // the Table-I squeezed row.
  const StateSpec moved = displaced(squeezed_state(0.4), cd(1.0, 0.0));
  const FockDensityOperator rho = make_state(moved, 40);
  const double v = circuit_minor(MinorPreset::d123, rho);
  CHECK(v == doctest::Approx(-std::pow(std::sinh(0.4), 2)).epsilon(1e-6));
  CHECK(v == doctest::Approx(-0.168717).epsilon(1e-4));

  const StateSpec cat = cat_state(true, 1.0);
  const FockDensityOperator catrho = make_state(cat, auto_cutoff(cat, 1e-12, 4));
  const double d23 = circuit_minor(MinorPreset::d23, catrho);
  CHECK(d23 == doctest::Approx(analytic_minor(cat, {2, 3})).epsilon(1e-8));
  CHECK(d23 < 0.0);
}

TEST_CASE("evolution route equals the Heisenberg pullback") {
  const FockDensityOperator th = make_state(thermal_state(0.8), 14);
  for (const MinorPreset p : {MinorPreset::d12, MinorPreset::d14, MinorPreset::d15,
                              MinorPreset::d23, MinorPreset::d123})
    CHECK(circuit_minor(p, th) ==
          doctest::Approx(circuit_minor_heisenberg(p, th)).epsilon(1e-10));

  const FockDensityOperator sq = make_state(squeezed_state(0.5), 48);
  for (double tau : {0.55, 0.72, 0.91})
    CHECK(interpolation_value(tau, M_PI / 2, sq) ==
          doctest::Approx(interpolation_value_heisenberg(tau, M_PI / 2, sq))
              .epsilon(1e-9));
}

TEST_CASE("circuit route equals the moment-matrix minors on mixed states") {
  const StateSpec spec = squeezed_thermal_state(0.5, 0.35);
  const FockDensityOperator rho = make_state(spec, 12);
  const MomentMatrix m = build_moment_matrix(rho, 6);
  CHECK(circuit_minor(MinorPreset::d12, rho) ==
        doctest::Approx(principal_minor(m, {1, 2}).value).epsilon(1e-9));
  CHECK(circuit_minor(MinorPreset::d23, rho) ==
        doctest::Approx(principal_minor(m, {2, 3}).value).epsilon(1e-9));
  CHECK(circuit_minor(MinorPreset::d123, rho) ==
        doctest::Approx(principal_minor(m, {1, 2, 3}).value).epsilon(1e-9));
}

TEST_CASE("interpolation endpoints reduce to d15 and d23") {
  const FockDensityOperator fock2 = make_state(fock_state(2), 8);
  CHECK(interpolation_value(1.0, M_PI / 2, fock2) ==
        doctest::Approx(-2.0).epsilon(1e-10));
  const StateSpec sq = squeezed_state(0.5);
  const FockDensityOperator rho = make_state(sq, auto_cutoff(sq, 1e-12, 4));
  CHECK(interpolation_value(0.5, M_PI / 2, rho) ==
        doctest::Approx(-std::pow(std::sinh(0.5), 2)).epsilon(1e-8));
  CHECK_THROWS_AS(interpolation_value(0.3, M_PI / 2, rho), std::invalid_argument);
}

TEST_CASE("just above the threshold only |1> stays detected") {
  const double tau_star = (2.0 + std::sqrt(2.0)) / 4.0;
  const double tau = tau_star + 0.01;
  for (int n = 1; n <= 4; ++n) {
    const FockDensityOperator rho = make_state(fock_state(n), n + 5);
    const double v = interpolation_value(tau, M_PI / 2, rho);
    if (n == 1)
      CHECK(v < -1e-9);
    else
      CHECK(v > -1e-9);
  }
}

TEST_CASE("squeezed r=0.3 is detected at tau 0.8 but not 0.9") {
  const StateSpec sq = squeezed_state(0.3);
  const FockDensityOperator rho = make_state(sq, auto_cutoff(sq, 1e-12, 4));
  CHECK(interpolation_value(0.8, M_PI / 2, rho) < -1e-9);
  CHECK(interpolation_value(0.9, M_PI / 2, rho) > -1e-9);
}

TEST_CASE("cat states split across the threshold") {
  const StateSpec odd = cat_state(false, 1.0), even = cat_state(true, 1.0);
  const FockDensityOperator rho_o = make_state(odd, auto_cutoff(odd, 1e-12, 4));
  const FockDensityOperator rho_e = make_state(even, auto_cutoff(even, 1e-12, 4));
  CHECK(interpolation_value(0.95, M_PI / 2, rho_o) < -1e-9);
  CHECK(interpolation_value(0.60, M_PI / 2, rho_e) < -1e-9);
}

TEST_CASE("detection boundary scan localizes the Fock thresholds") {
  std::vector<double> grid;
  for (int k = 0; k <= 128; ++k) grid.push_back(0.5 + 0.5 * k / 128.0);
  const ScanResult scan = detection_boundary_scan(
      {fock_state(1), fock_state(2), squeezed_state(0.3)}, {1, 2, 0.3}, grid,
      M_PI / 2);
  REQUIRE(scan.boundaries.size() == 3);
  const double tau_star = (2.0 + std::sqrt(2.0)) / 4.0;
  REQUIRE(scan.boundaries[0].boundary_tau.has_value());
  CHECK(*scan.boundaries[0].boundary_tau == doctest::Approx(tau_star).epsilon(1e-4));
  REQUIRE(scan.boundaries[1].boundary_tau.has_value());
  CHECK(*scan.boundaries[1].boundary_tau ==
        doctest::Approx(0.5 * (1.0 + std::sqrt(2.0 / 3.0))).epsilon(1e-4));
  REQUIRE(scan.boundaries[2].boundary_tau.has_value());
  CHECK(*scan.boundaries[2].boundary_tau ==
        doctest::Approx(0.5 * (1.0 + 1.0 / (std::sqrt(2.0) * std::cosh(0.3))))
            .epsilon(1e-4));
}

TEST_CASE("mandel reformulation of d23 from output statistics") {
  const StateSpec spec = squeezed_state(0.4);
  const FockDensityOperator rho = make_state(spec, auto_cutoff(spec, 1e-12, 4));
  const CircuitSpec fig2 = CircuitSpec::fig2();
  const double n1 = evolve_and_measure(fig2, rho, 2, {FunctionalKind::mean_n, 0, -1});
  const double n2 = evolve_and_measure(fig2, rho, 2, {FunctionalKind::mean_n, 1, -1});
  const double n1sq = evolve_and_measure(fig2, rho, 2, {FunctionalKind::mean_n_sq, 0, -1});
  const double n2sq = evolve_and_measure(fig2, rho, 2, {FunctionalKind::mean_n_sq, 1, -1});
  const double n1n2 =
      evolve_and_measure(fig2, rho, 2, {FunctionalKind::mean_product, 0, 1});
  const double q1 = (n1sq - n1 * n1 - n1) / n1;
  const double q2 = (n2sq - n2 * n2 - n2) / n2;
  const double mandel_form =
      0.5 * (q1 * n1 + q2 * n2 + n1 * n1 + n2 * n2 - 2 * n1n2);
  const double direct = circuit_minor(MinorPreset::d23, rho);
  CHECK(mandel_form == doctest::Approx(direct).epsilon(1e-9));
}

TEST_CASE("the three-mode discrete Fourier transform accesses the same d123") {
  // The DFT circuit differs from fig4 only by output phase shifters, which
  // drop out of photon-number functionals.
  const cd w = std::exp(cd(0, 2.0 * M_PI / 3.0));
  Eigen::MatrixXcd f(3, 3);
  f << 1, 1, 1, 1, w, w * w, 1, w * w, w;
  const ModeUnitary dft(f / std::sqrt(3.0));
  const Functional func{FunctionalKind::half_sq_diff_minus_half_sum, 1, 2};
  const BosonPolynomial pulled = transform_modes(functional_operator(func), dft);

  for (const StateSpec& spec :
       {squeezed_state(0.5), displaced(squeezed_state(0.4), cd(1.0, 0.0)),
        thermal_state(0.6)}) {
    const FockDensityOperator rho = make_state(spec, auto_cutoff(spec, 1e-12, 4));
    const cd via_dft = product_state_expectation(rho, 3, pulled);
    const double via_fig4 = circuit_minor_heisenberg(MinorPreset::d123, rho);
    CHECK(std::abs(via_dft - cd(via_fig4)) < 1e-9 * (1.0 + std::abs(via_fig4)));
  }
}

TEST_CASE("the interpolation observable stays a valid witness") {
  // B_{15,23} = :f^dag f: - <L_0>-bounded from below: value >= -<n>.
  for (const StateSpec& spec : {fock_state(2), squeezed_state(0.5),
                                cat_state(false, 1.0), thermal_state(0.8)}) {
    const FockDensityOperator rho = make_state(spec, auto_cutoff(spec, 1e-12, 4));
    const double mean_n = moment_expectation(rho, 1, 1).real();
    for (double tau : {0.5, 0.7, 0.85355, 0.95, 1.0})
      CHECK(interpolation_value_heisenberg(tau, M_PI / 2, rho) >=
            -mean_n - 1e-9);
  }
}

TEST_CASE("circuit JSON round trip") {
  const CircuitSpec c = CircuitSpec::fig4();
  const CircuitSpec back = circuit_from_json(circuit_to_json(c));
  CHECK(back.modes == c.modes);
  REQUIRE(back.elements.size() == c.elements.size());
  for (std::size_t i = 0; i < c.elements.size(); ++i) {
    CHECK(back.elements[i].type == c.elements[i].type);
    CHECK(back.elements[i].mode_a == c.elements[i].mode_a);
    CHECK(back.elements[i].param == doctest::Approx(c.elements[i].param));
  }
  const ModeUnitary u1 = compile_mode_unitary(c);
  const ModeUnitary u2 = compile_mode_unitary(back);
  CHECK((u1.u - u2.u).cwiseAbs().maxCoeff() < 1e-14);
}
