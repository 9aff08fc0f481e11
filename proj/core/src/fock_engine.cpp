#include "nonclass/fock_engine.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace nonclass {

namespace {

constexpr double kHermTol = 1e-12;
constexpr double kTraceTol = 1e-9;
constexpr double kEigTol = 1e-10;
// Above this dimension the spectrum check is skipped; such operators are
// only ever produced by positivity-preserving maps of checked states.
constexpr Eigen::Index kSpectrumCheckDim = 2048;

}  // namespace

FockDensityOperator make_density(int modes, int cutoff, Eigen::MatrixXcd matrix,
                                 double tail_mass, double renormalization,
                                 std::optional<Eigen::VectorXcd> pure_vector,
                                 bool check_spectrum) {
  const Eigen::Index dim = matrix.rows();
  if (matrix.cols() != dim)
    throw std::invalid_argument("make_density: matrix not square");
  Eigen::Index expected = 1;
  for (int m = 0; m < modes; ++m) expected *= cutoff;
  if (dim != expected)
    throw std::invalid_argument("make_density: dimension != cutoff^modes");

  const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
  if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > kHermTol * scale)
    throw std::invalid_argument("make_density: matrix not Hermitian to 1e-12");

  const double trace = matrix.trace().real();
  if (std::abs(trace - 1.0) > kTraceTol)
    throw std::invalid_argument("make_density: trace " + std::to_string(trace) +
                                " outside [1-1e-9, 1+1e-9]");

  if (check_spectrum && dim <= kSpectrumCheckDim) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix,
                                                       Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kEigTol)
      throw std::runtime_error(
          "make_density: negative eigenvalue " +
          std::to_string(es.eigenvalues().minCoeff()) +
          " below -1e-10 (refusing to clip)");
  }

  FockDensityOperator rho;
  rho.modes = modes;
  rho.cutoff = cutoff;
  rho.matrix = std::move(matrix);
  rho.tail_mass = tail_mass;
  rho.renormalization = renormalization;
  rho.pure_vector = std::move(pure_vector);
  return rho;
}

FockDensityOperator density_from_vector(int modes, int cutoff,
                                        Eigen::VectorXcd psi,
                                        double declared_tail) {
  const double norm2 = psi.squaredNorm();
  if (norm2 <= 0.0)
    throw std::invalid_argument("density_from_vector: zero vector");
  const double deficit = 1.0 - norm2;
  psi /= std::sqrt(norm2);
  Eigen::MatrixXcd rho = psi * psi.adjoint();
  return make_density(modes, cutoff, std::move(rho),
                      declared_tail + std::max(0.0, deficit), deficit,
                      std::move(psi), /*check_spectrum=*/false);
}

std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> ladder(int cutoff) {
  if (cutoff < 2) throw std::invalid_argument("ladder: cutoff must be >= 2");
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(cutoff, cutoff);
  for (int n = 1; n < cutoff; ++n) a(n - 1, n) = std::sqrt(double(n));
  return {a, a.adjoint()};
}

double ladder_amplitude(int n, int dag_p, int plain_q) {
  if (n < plain_q) return 0.0;
  double f = 1.0;
  for (int t = 0; t < plain_q; ++t) f *= (n - t);
  const int mid = n - plain_q;
  for (int t = 1; t <= dag_p; ++t) f *= (mid + t);
  return std::sqrt(f);
}

Eigen::MatrixXcd single_mode_op(int cutoff, int dag_p, int plain_q) {
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(cutoff, cutoff);
  for (int n = plain_q; n < cutoff; ++n) {
    const int m = n - plain_q + dag_p;
    if (m >= cutoff) continue;
    op(m, n) = ladder_amplitude(n, dag_p, plain_q);
  }
  return op;
}

Eigen::MatrixXcd eval_polynomial(const BosonPolynomial& p, int cutoff, int modes) {
  if (p.modes() > modes)
    throw std::invalid_argument("eval_polynomial: polynomial touches mode " +
                                std::to_string(p.modes() - 1) + " >= modes " +
                                std::to_string(modes));
  Eigen::Index dim = 1;
  for (int m = 0; m < modes; ++m) {
    dim *= cutoff;
    if (dim > (Eigen::Index(1) << 22))
      throw std::invalid_argument("eval_polynomial: dimension too large");
  }

  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [key, coeff] : p.terms()) {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Constant(1, 1, coeff);
    for (int m = 0; m < modes; ++m) {
      const Eigen::MatrixXcd factor =
          single_mode_op(cutoff, dag_power(key, m), plain_power(key, m));
      Eigen::MatrixXcd next(acc.rows() * cutoff, acc.cols() * cutoff);
      for (Eigen::Index i = 0; i < acc.rows(); ++i)
        for (Eigen::Index j = 0; j < acc.cols(); ++j)
          next.block(i * cutoff, j * cutoff, cutoff, cutoff) = acc(i, j) * factor;
      acc = std::move(next);
    }
    total += acc;
  }
  return total;
}

cd expectation(const FockDensityOperator& rho, const Eigen::MatrixXcd& op) {
  if (op.rows() != rho.dim() || op.cols() != rho.dim())
    throw std::invalid_argument("expectation: dimension mismatch");
  if (rho.is_pure()) {
    const auto& psi = *rho.pure_vector;
    return psi.dot(op * psi);
  }
  return (rho.matrix * op).trace();
}

double real_expectation(const FockDensityOperator& rho,
                        const Eigen::MatrixXcd& op) {
  const cd v = expectation(rho, op);
  if (std::abs(v.imag()) > 1e-9 * (1.0 + std::abs(v.real())))
    throw std::runtime_error("real_expectation: imaginary residue " +
                             std::to_string(v.imag()));
  return v.real();
}

cd moment_expectation(const FockDensityOperator& rho, int dag_p, int plain_q) {
  if (rho.modes != 1)
    throw std::invalid_argument("moment_expectation: single-mode states only");
  const int d = rho.cutoff;
  cd acc(0.0, 0.0);
  for (int n = plain_q; n < d; ++n) {
    const int m = n - plain_q + dag_p;
    if (m >= d) continue;
    acc += rho.matrix(n, m) * ladder_amplitude(n, dag_p, plain_q);
  }
  return acc;
}

cd product_state_expectation(const FockDensityOperator& rho, int copies,
                             const BosonPolynomial& p) {
  if (rho.modes != 1)
    throw std::invalid_argument("product_state_expectation: single-mode input");
  if (p.modes() > copies)
    throw std::invalid_argument("product_state_expectation: polynomial needs " +
                                std::to_string(p.modes()) + " modes > copies");
  // Cache per-(p,q) single-copy moments; every monomial factorizes across
  // the replicas of a product state.
  std::map<std::pair<int, int>, cd> cache;
  auto single = [&](int dp, int pq) {
    const auto key = std::make_pair(dp, pq);
    auto it = cache.find(key);
    if (it == cache.end())
      it = cache.emplace(key, moment_expectation(rho, dp, pq)).first;
    return it->second;
  };

  cd total(0.0, 0.0);
  for (const auto& [key, coeff] : p.terms()) {
    cd prod = coeff;
    for (int m = 0; m < copies; ++m) {
      const int dp = dag_power(key, m), pq = plain_power(key, m);
      if (dp == 0 && pq == 0) continue;
      prod *= single(dp, pq);
    }
    total += prod;
  }
  return total;
}

FockDensityOperator tensor_power(const FockDensityOperator& rho, int copies,
                                 Eigen::Index max_dim) {
  if (copies < 1 || copies > 4)
    throw std::invalid_argument("tensor_power: copies must be in 1..4");
  Eigen::Index dim = 1;
  for (int i = 0; i < copies; ++i) dim *= rho.dim();
  if (dim > max_dim)
    throw std::runtime_error(
        "tensor_power: required dimension " + std::to_string(dim) +
        " exceeds budget " + std::to_string(max_dim));

  Eigen::MatrixXcd out = rho.matrix;
  for (int c = 1; c < copies; ++c) {
    Eigen::MatrixXcd next(out.rows() * rho.dim(), out.cols() * rho.dim());
    for (Eigen::Index i = 0; i < out.rows(); ++i)
      for (Eigen::Index j = 0; j < out.cols(); ++j)
        next.block(i * rho.dim(), j * rho.dim(), rho.dim(), rho.dim()) =
            out(i, j) * rho.matrix;
    out = std::move(next);
  }

  std::optional<Eigen::VectorXcd> pure;
  if (rho.is_pure()) {
    Eigen::VectorXcd psi = *rho.pure_vector;
    for (int c = 1; c < copies; ++c) {
      Eigen::VectorXcd next(psi.size() * rho.pure_vector->size());
      for (Eigen::Index i = 0; i < psi.size(); ++i)
        next.segment(i * rho.pure_vector->size(), rho.pure_vector->size()) =
            psi(i) * (*rho.pure_vector);
      psi = std::move(next);
    }
    pure = std::move(psi);
  }

  // Spectrum of a Kronecker product is the product spectrum of the
  // (already checked) factor.
  return make_density(rho.modes * copies, rho.cutoff, std::move(out),
                      copies * rho.tail_mass, 0.0, std::move(pure),
                      /*check_spectrum=*/false);
}

double purity(const FockDensityOperator& rho) {
  return (rho.matrix * rho.matrix).trace().real();
}

Eigen::VectorXd number_distribution(const FockDensityOperator& rho) {
  return rho.matrix.diagonal().real();
}

}  // namespace nonclass
