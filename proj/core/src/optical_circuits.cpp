#include "nonclass/optical_circuits.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include "nonclass/minor_criteria.hpp"

namespace nonclass {

CircuitSpec CircuitSpec::fig1() {
  return {2, {{ElementType::beam_splitter, 0, 1, 0.5}}};
}

CircuitSpec CircuitSpec::fig2() {
  return {2,
          {{ElementType::phase_shifter, 1, -1, M_PI / 2},
           {ElementType::beam_splitter, 0, 1, 0.5}}};
}

CircuitSpec CircuitSpec::fig3(double phi, double tau) {
  return {2,
          {{ElementType::phase_shifter, 1, -1, phi},
           {ElementType::beam_splitter, 0, 1, tau}}};
}

CircuitSpec CircuitSpec::fig4() {
  return {3,
          {{ElementType::beam_splitter, 0, 1, 0.5},
           {ElementType::beam_splitter, 0, 2, 2.0 / 3.0},
           {ElementType::phase_shifter, 2, -1, M_PI / 2},
           {ElementType::beam_splitter, 1, 2, 0.5}}};
}

ModeUnitary element_matrix(const CircuitElement& e, int modes) {
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(modes, modes);
  if (e.mode_a < 0 || e.mode_a >= modes ||
      (e.type == ElementType::beam_splitter &&
       (e.mode_b < 0 || e.mode_b >= modes || e.mode_b == e.mode_a)))
    throw std::invalid_argument("element_matrix: mode index out of range");
  if (e.type == ElementType::beam_splitter) {
    if (e.param < 0.0 || e.param > 1.0)
      throw std::invalid_argument("element_matrix: transmittance outside [0,1]");
    const double t = std::sqrt(e.param), s = std::sqrt(1.0 - e.param);
    u(e.mode_a, e.mode_a) = t;
    u(e.mode_a, e.mode_b) = s;
    u(e.mode_b, e.mode_a) = s;
    u(e.mode_b, e.mode_b) = -t;
  } else {
    u(e.mode_a, e.mode_a) = std::exp(cd(0, -e.param));
  }
  return ModeUnitary(u);
}

ModeUnitary compile_mode_unitary(const CircuitSpec& c) {
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(c.modes, c.modes);
  for (const auto& e : c.elements) u = element_matrix(e, c.modes).u * u;
  return ModeUnitary(u);
}

ModeGenerator mode_log_generator(const ModeUnitary& u) {
  const Eigen::ComplexSchur<Eigen::MatrixXcd> schur(u.u);
  const Eigen::MatrixXcd& q = schur.matrixU();
  ModeGenerator out;
  Eigen::VectorXd theta(u.dim());
  for (int i = 0; i < u.dim(); ++i) {
    const cd lambda = schur.matrixT()(i, i);
    double th = std::arg(lambda);
    if (std::abs(lambda + cd(1.0)) <= 1e-12) {
      th = M_PI - 1e-12;  // branch-cut eigenvalue; nudge and flag
      out.branch_adjusted = true;
    }
    theta(i) = th;
  }
  // u = exp(-i h) with h = Q diag(-theta) Q^dag... u eigenvalue e^{i theta}
  // corresponds to h eigenvalue -theta.
  out.h = q * (-theta).asDiagonal() * q.adjoint();
  out.h = 0.5 * (out.h + out.h.adjoint().eval());
  return out;
}

Eigen::MatrixXcd fock_unitary(const ModeUnitary& u, int cutoff, int modes,
                              int margin) {
  if (u.dim() != modes)
    throw std::invalid_argument("fock_unitary: unitary dimension != modes");
  const int w = cutoff + std::max(0, margin);
  Eigen::Index dim_w = 1, dim_d = 1;
  for (int m = 0; m < modes; ++m) {
    dim_w *= w;
    dim_d *= cutoff;
  }
  if (dim_w > 4096)
    throw std::invalid_argument("fock_unitary: dimension " + std::to_string(dim_w) +
                                " too large for the dense path");

  const ModeGenerator gen = mode_log_generator(u);
  BosonPolynomial quad;
  for (int i = 0; i < modes; ++i)
    for (int j = 0; j < modes; ++j)
      quad += gen.h(i, j) *
              BosonPolynomial::monomial(make_monomial(i, 1, 0) | make_monomial(j, 0, 1));
  const Eigen::MatrixXcd h_fock = eval_polynomial(quad, w, modes);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h_fock);
  Eigen::VectorXcd phases(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i)
    phases(i) = std::exp(cd(0, -es.eigenvalues()(i)));
  const Eigen::MatrixXcd u_w =
      es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();

  if (w == cutoff) return u_w;
  // Project onto the indices whose per-mode digits stay below the cutoff.
  std::vector<Eigen::Index> keep;
  keep.reserve(dim_d);
  for (Eigen::Index idx = 0; idx < dim_w; ++idx) {
    Eigen::Index rest = idx;
    bool ok = true;
    for (int m = modes - 1; m >= 0; --m) {
      if (rest % w >= cutoff) {
        ok = false;
        break;
      }
      rest /= w;
    }
    if (ok) keep.push_back(idx);
  }
  Eigen::MatrixXcd out(dim_d, dim_d);
  for (Eigen::Index i = 0; i < dim_d; ++i)
    for (Eigen::Index j = 0; j < dim_d; ++j) out(i, j) = u_w(keep[i], keep[j]);
  return out;
}

FockDensityOperator apply_fock_unitary(const FockDensityOperator& rho,
                                       const Eigen::MatrixXcd& u) {
  if (u.rows() != rho.dim())
    throw std::invalid_argument("apply_fock_unitary: dimension mismatch");
  if (rho.is_pure()) {
    Eigen::VectorXcd psi = u * (*rho.pure_vector);
    return density_from_vector(rho.modes, rho.cutoff, std::move(psi),
                               rho.tail_mass);
  }
  Eigen::MatrixXcd out = u * rho.matrix * u.adjoint();
  const double trace = out.trace().real();
  const double deficit = 1.0 - trace;
  out /= trace;
  return make_density(rho.modes, rho.cutoff, std::move(out),
                      rho.tail_mass + std::max(0.0, deficit), deficit, {},
                      /*check_spectrum=*/false);
}

double functional_value(const Functional& f, const std::vector<int>& n) {
  switch (f.kind) {
    case FunctionalKind::mean_n:
      return n[f.mode_a];
    case FunctionalKind::mean_product:
      return double(n[f.mode_a]) * n[f.mode_b];
    case FunctionalKind::half_sq_diff_minus_half_sum: {
      const double d = n[f.mode_a] - n[f.mode_b];
      return 0.5 * d * d - 0.5 * (n[f.mode_a] + n[f.mode_b]);
    }
    case FunctionalKind::mean_n_sq:
      return double(n[f.mode_a]) * n[f.mode_a];
  }
  throw std::logic_error("functional_value: unreachable");
}

BosonPolynomial functional_operator(const Functional& f) {
  const auto na = BosonPolynomial::number(f.mode_a);
  const auto nb = BosonPolynomial::number(f.mode_b);
  switch (f.kind) {
    case FunctionalKind::mean_n:
      return na;
    case FunctionalKind::mean_product:
      return nmul(na, nb);
    case FunctionalKind::half_sq_diff_minus_half_sum: {
      const BosonPolynomial diff = na - nb;
      return 0.5 * multiply(diff, diff) - 0.5 * (na + nb);
    }
    case FunctionalKind::mean_n_sq:
      return multiply(na, na);
  }
  throw std::logic_error("functional_operator: unreachable");
}

double measure_functional(const FockDensityOperator& rho_out, const Functional& f) {
  const int d = rho_out.cutoff;
  std::vector<int> digits(rho_out.modes);
  double acc = 0.0;
  for (Eigen::Index idx = 0; idx < rho_out.dim(); ++idx) {
    Eigen::Index rest = idx;
    for (int m = rho_out.modes - 1; m >= 0; --m) {
      digits[m] = static_cast<int>(rest % d);
      rest /= d;
    }
    acc += rho_out.matrix(idx, idx).real() * functional_value(f, digits);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Sector-block evolution engine.

namespace {

struct BlockCache {
  std::mutex mutex;
  // key: (bit pattern of tau, sector nu)
  std::map<std::pair<std::uint64_t, int>, Eigen::MatrixXcd> blocks;
  std::size_t entries = 0;
};

BlockCache& block_cache() {
  static BlockCache cache;
  return cache;
}

std::uint64_t double_bits(double x) {
  std::uint64_t b;
  static_assert(sizeof(b) == sizeof(x));
  std::memcpy(&b, &x, sizeof(b));
  return b;
}

// exp(-i H_nu) for the two-mode sector with nu photons, H from the beam
// splitter's quadratic generator.
Eigen::MatrixXcd beam_splitter_block(double tau, int nu) {
  auto& cache = block_cache();
  const auto key = std::make_pair(double_bits(tau), nu);
  {
    std::lock_guard<std::mutex> lock(cache.mutex);
    auto it = cache.blocks.find(key);
    if (it != cache.blocks.end()) return it->second;
  }

  Eigen::Matrix2cd u2;
  const double t = std::sqrt(tau), s = std::sqrt(1.0 - tau);
  u2 << t, s, s, -t;
  const ModeGenerator gen = mode_log_generator(ModeUnitary(u2));

  Eigen::MatrixXcd h(nu + 1, nu + 1);
  h.setZero();
  for (int k = 0; k <= nu; ++k) {
    h(k, k) = gen.h(0, 0) * double(k) + gen.h(1, 1) * double(nu - k);
    if (k < nu) {
      const double amp = std::sqrt(double(k + 1) * double(nu - k));
      h(k + 1, k) += gen.h(0, 1) * amp;  // adag_a a_b climbs k
      h(k, k + 1) += gen.h(1, 0) * amp;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  Eigen::VectorXcd phases(nu + 1);
  for (int i = 0; i <= nu; ++i) phases(i) = std::exp(cd(0, -es.eigenvalues()(i)));
  Eigen::MatrixXcd block =
      es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();

  std::lock_guard<std::mutex> lock(cache.mutex);
  cache.entries += static_cast<std::size_t>(nu + 1) * (nu + 1);
  if (cache.entries > (std::size_t(48) << 20) / sizeof(cd)) {  // ~48 MB
    cache.blocks.clear();
    cache.entries = static_cast<std::size_t>(nu + 1) * (nu + 1);
  }
  cache.blocks[key] = block;
  return block;
}

struct Ensemble {
  std::vector<double> weights;
  std::vector<Eigen::VectorXcd> vectors;
};

Ensemble state_ensemble(const FockDensityOperator& rho) {
  Ensemble out;
  if (rho.is_pure()) {
    out.weights.push_back(1.0);
    out.vectors.push_back(*rho.pure_vector);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.matrix);
  for (Eigen::Index i = es.eigenvalues().size() - 1; i >= 0; --i) {
    const double p = es.eigenvalues()(i);
    if (p <= 0.0) continue;
    out.weights.push_back(p);
    out.vectors.push_back(es.eigenvectors().col(i));
  }
  return out;
}

void apply_phase_shifter(Eigen::VectorXcd& psi, int d, int copies, int mode,
                         double phi) {
  Eigen::Index stride = 1;
  for (int m = copies - 1; m > mode; --m) stride *= d;
  std::vector<cd> phase(d);
  for (int n = 0; n < d; ++n) phase[n] = std::exp(cd(0, -phi * n));
  for (Eigen::Index idx = 0; idx < psi.size(); ++idx)
    psi(idx) *= phase[(idx / stride) % d];
}

void apply_beam_splitter(Eigen::VectorXcd& psi, int d, int copies, int a, int b,
                         double tau, int nu_active) {
  Eigen::Index stride_a = 1, stride_b = 1;
  for (int m = copies - 1; m > a; --m) stride_a *= d;
  for (int m = copies - 1; m > b; --m) stride_b *= d;

  // Enumerate the flat offsets of the spectator modes.
  std::vector<Eigen::Index> bases;
  if (copies == 2) {
    bases.push_back(0);
  } else {
    int other = 0;
    while (other == a || other == b) ++other;
    Eigen::Index stride_o = 1;
    for (int m = copies - 1; m > other; --m) stride_o *= d;
    for (int n = 0; n < d; ++n) bases.push_back(n * stride_o);
  }

  const int nu_max = std::min(nu_active, 2 * (d - 1));
  Eigen::VectorXcd strip(d), result(d);
  for (int nu = 0; nu <= nu_max; ++nu) {
    const int lo = std::max(0, nu - (d - 1));
    const int hi = std::min(nu, d - 1);
    const int len = hi - lo + 1;
    if (len <= 0) continue;
    const Eigen::MatrixXcd block = beam_splitter_block(tau, nu);
    for (const Eigen::Index base : bases) {
      for (int t = 0; t < len; ++t)
        strip(t) = psi(base + (lo + t) * stride_a +
                       static_cast<Eigen::Index>(nu - lo - t) * stride_b);
      result.head(len).noalias() = block.block(lo, lo, len, len) * strip.head(len);
      for (int t = 0; t < len; ++t)
        psi(base + (lo + t) * stride_a +
            static_cast<Eigen::Index>(nu - lo - t) * stride_b) = result(t);
    }
  }
}

int vector_support(const Eigen::VectorXcd& v) {
  for (Eigen::Index n = v.size() - 1; n >= 0; --n)
    if (std::abs(v(n)) > 1e-17) return static_cast<int>(n);
  return 0;
}

struct EvolvedAccumulator {
  virtual ~EvolvedAccumulator() = default;
  virtual void add(double weight, const Eigen::VectorXcd& psi) = 0;
};

void evolve_ensemble(const CircuitSpec& c, const FockDensityOperator& rho,
                     int copies, const EvolutionOptions& opts,
                     int* embed_out, EvolvedAccumulator& acc) {
  if (copies < 2 || copies > 3)
    throw std::invalid_argument("evolve: copies must be 2 or 3");
  if (rho.modes != 1)
    throw std::invalid_argument("evolve: replicas of a single-mode state");
  if (c.modes != copies)
    throw std::invalid_argument("evolve: circuit modes != copies");

  const int d = rho.cutoff;
  // Embed so every populated photon sector is complete; then each element
  // acts exactly unitarily on the truncated input.
  int embed = copies * (d - 1) + 1;
  embed = ((embed + opts.embed_quantum - 1) / opts.embed_quantum) * opts.embed_quantum;
  Eigen::Index dim = 1;
  for (int m = 0; m < copies; ++m) dim *= embed;
  while (dim > opts.max_vector_dim && embed > d) {
    --embed;
    dim = 1;
    for (int m = 0; m < copies; ++m) dim *= embed;
  }
  if (dim > opts.max_vector_dim)
    throw std::runtime_error("evolve: joint dimension " + std::to_string(dim) +
                             " exceeds budget " +
                             std::to_string(opts.max_vector_dim));
  if (embed_out) *embed_out = embed;

  const Ensemble ens = state_ensemble(rho);
  const int n_eig = static_cast<int>(ens.weights.size());
  double tuple_floor = opts.ensemble_cut;
  for (int i = 0; i < copies; ++i) tuple_floor /= n_eig;

  std::vector<int> supports(n_eig);
  for (int i = 0; i < n_eig; ++i) supports[i] = vector_support(ens.vectors[i]);

  std::vector<int> tuple(copies, 0);
  Eigen::VectorXcd psi(dim);
  while (true) {
    double weight = 1.0;
    for (int i = 0; i < copies; ++i) weight *= ens.weights[tuple[i]];
    if (weight >= tuple_floor) {
      psi.setZero();
      // Product vector of the tuple, zero-padded into the embedding.
      if (copies == 2) {
        const auto& v0 = ens.vectors[tuple[0]];
        const auto& v1 = ens.vectors[tuple[1]];
        for (int n0 = 0; n0 < d; ++n0)
          for (int n1 = 0; n1 < d; ++n1)
            psi(Eigen::Index(n0) * embed + n1) = v0(n0) * v1(n1);
      } else {
        const auto& v0 = ens.vectors[tuple[0]];
        const auto& v1 = ens.vectors[tuple[1]];
        const auto& v2 = ens.vectors[tuple[2]];
        for (int n0 = 0; n0 < d; ++n0)
          for (int n1 = 0; n1 < d; ++n1) {
            const cd v01 = v0(n0) * v1(n1);
            const Eigen::Index base = (Eigen::Index(n0) * embed + n1) * embed;
            for (int n2 = 0; n2 < d; ++n2) psi(base + n2) = v01 * v2(n2);
          }
      }
      int nu_active = 0;
      for (int i = 0; i < copies; ++i) nu_active += supports[tuple[i]];
      nu_active = std::min(nu_active, 2 * (embed - 1));

      for (const auto& e : c.elements) {
        if (e.type == ElementType::phase_shifter)
          apply_phase_shifter(psi, embed, copies, e.mode_a, e.param);
        else
          apply_beam_splitter(psi, embed, copies, e.mode_a, e.mode_b, e.param,
                              nu_active);
      }
      acc.add(weight, psi);
    }
    // next tuple
    int pos = copies - 1;
    while (pos >= 0 && ++tuple[pos] == n_eig) tuple[pos--] = 0;
    if (pos < 0) break;
  }
}

struct FunctionalAccumulator final : EvolvedAccumulator {
  Functional f;
  int embed;
  int copies;
  double total = 0.0;

  void add(double weight, const Eigen::VectorXcd& psi) override {
    std::vector<int> digits(copies);
    double acc = 0.0;
    for (Eigen::Index idx = 0; idx < psi.size(); ++idx) {
      const double p = std::norm(psi(idx));
      if (p == 0.0) continue;
      Eigen::Index rest = idx;
      for (int m = copies - 1; m >= 0; --m) {
        digits[m] = static_cast<int>(rest % embed);
        rest /= embed;
      }
      acc += p * functional_value(f, digits);
    }
    total += weight * acc;
  }
};

struct DistributionAccumulator final : EvolvedAccumulator {
  Eigen::VectorXd dist;

  void add(double weight, const Eigen::VectorXcd& psi) override {
    if (dist.size() == 0) dist = Eigen::VectorXd::Zero(psi.size());
    for (Eigen::Index idx = 0; idx < psi.size(); ++idx)
      dist(idx) += weight * std::norm(psi(idx));
  }
};

}  // namespace

double evolve_and_measure(const CircuitSpec& c, const FockDensityOperator& rho,
                          int copies, const Functional& f,
                          const EvolutionOptions& opts) {
  FunctionalAccumulator acc;
  acc.f = f;
  acc.copies = copies;
  evolve_ensemble(c, rho, copies, opts, &acc.embed, acc);
  return acc.total;
}

std::pair<Eigen::VectorXd, int> evolve_joint_distribution(
    const CircuitSpec& c, const FockDensityOperator& rho, int copies,
    const EvolutionOptions& opts) {
  DistributionAccumulator acc;
  int embed = 0;
  evolve_ensemble(c, rho, copies, opts, &embed, acc);
  return {std::move(acc.dist), embed};
}

// ---------------------------------------------------------------------------

MinorPreset minor_preset_from_name(const std::string& name) {
  if (name == "d12") return MinorPreset::d12;
  if (name == "d14") return MinorPreset::d14;
  if (name == "d15") return MinorPreset::d15;
  if (name == "d23") return MinorPreset::d23;
  if (name == "d123") return MinorPreset::d123;
  throw std::invalid_argument("unknown minor preset: " + name);
}

std::string minor_preset_name(MinorPreset p) {
  switch (p) {
    case MinorPreset::d12: return "d12";
    case MinorPreset::d14: return "d14";
    case MinorPreset::d15: return "d15";
    case MinorPreset::d23: return "d23";
    case MinorPreset::d123: return "d123";
  }
  throw std::logic_error("minor_preset_name: unreachable");
}

int minor_preset_copies(MinorPreset p) {
  return p == MinorPreset::d123 ? 3 : 2;
}

namespace {

struct PresetScheme {
  std::optional<CircuitSpec> circuit;
  Functional functional;
  double scale = 1.0;
  int copies = 2;
};

PresetScheme preset_scheme(MinorPreset preset) {
  switch (preset) {
    case MinorPreset::d12:
      return {CircuitSpec::fig1(), {FunctionalKind::mean_n, 1, -1}, 1.0, 2};
    case MinorPreset::d14:
      return {CircuitSpec::fig1(), {FunctionalKind::mean_product, 0, 1}, 2.0, 2};
    case MinorPreset::d15:
      return {std::nullopt,
              {FunctionalKind::half_sq_diff_minus_half_sum, 0, 1},
              1.0,
              2};
    case MinorPreset::d23:
      return {CircuitSpec::fig2(),
              {FunctionalKind::half_sq_diff_minus_half_sum, 0, 1},
              1.0,
              2};
    case MinorPreset::d123:
      return {CircuitSpec::fig4(),
              {FunctionalKind::half_sq_diff_minus_half_sum, 1, 2},
              1.0,
              3};
  }
  throw std::logic_error("preset_scheme: unreachable");
}

double product_expectation_real(const FockDensityOperator& rho, int copies,
                                const BosonPolynomial& p) {
  const cd v = product_state_expectation(rho, copies, p);
  if (std::abs(v.imag()) > 1e-9 * (1.0 + std::abs(v.real())))
    throw std::runtime_error("circuit functional: imaginary residue " +
                             std::to_string(v.imag()));
  return v.real();
}

}  // namespace

double circuit_minor(MinorPreset preset, const FockDensityOperator& rho,
                     const EvolutionOptions& opts) {
  const PresetScheme scheme = preset_scheme(preset);
  if (!scheme.circuit) {
    // Raw copies, no interferometer: evaluate the functional operator on
    // the product state directly.
    return scheme.scale *
           product_expectation_real(rho, scheme.copies,
                                    functional_operator(scheme.functional));
  }
  return scheme.scale *
         evolve_and_measure(*scheme.circuit, rho, scheme.copies,
                            scheme.functional, opts);
}

double circuit_minor_heisenberg(MinorPreset preset, const FockDensityOperator& rho) {
  const PresetScheme scheme = preset_scheme(preset);
  BosonPolynomial p = functional_operator(scheme.functional);
  if (scheme.circuit)
    p = transform_modes(p, compile_mode_unitary(*scheme.circuit));
  return scheme.scale * product_expectation_real(rho, scheme.copies, p);
}

double interpolation_value(double tau, double phi, const FockDensityOperator& rho,
                           const EvolutionOptions& opts) {
  if (tau < 0.5 || tau > 1.0)
    throw std::invalid_argument("interpolation_value: tau outside [1/2, 1]");
  const Functional f{FunctionalKind::half_sq_diff_minus_half_sum, 0, 1};
  return evolve_and_measure(CircuitSpec::fig3(phi, tau), rho, 2, f, opts);
}

double interpolation_value_heisenberg(double tau, double phi,
                                      const FockDensityOperator& rho) {
  if (tau < 0.5 || tau > 1.0)
    throw std::invalid_argument("interpolation_value: tau outside [1/2, 1]");
  const Functional f{FunctionalKind::half_sq_diff_minus_half_sum, 0, 1};
  const BosonPolynomial pulled = transform_modes(
      functional_operator(f), compile_mode_unitary(CircuitSpec::fig3(phi, tau)));
  return product_expectation_real(rho, 2, pulled);
}

ScanResult detection_boundary_scan(const std::vector<StateSpec>& states,
                                   const std::vector<double>& params,
                                   const std::vector<double>& tau_grid,
                                   double phi, double tail_tol) {
  if (states.size() != params.size())
    throw std::invalid_argument("detection_boundary_scan: params size mismatch");
  ScanResult result;
  for (std::size_t s = 0; s < states.size(); ++s) {
    const StateSpec& spec = states[s];
    const FockDensityOperator rho = make_state(spec, auto_cutoff(spec, tail_tol, 4));
    const auto value_at = [&](double tau) {
      return interpolation_value_heisenberg(tau, phi, rho);
    };
    const auto detected_at = [&](double tau) {
      return value_at(tau) < -kDetectionEpsilon;
    };

    std::vector<bool> detected(tau_grid.size());
    for (std::size_t i = 0; i < tau_grid.size(); ++i) {
      const double v = value_at(tau_grid[i]);
      detected[i] = v < -kDetectionEpsilon;
      result.rows.push_back({spec.label(), params[s], tau_grid[i], v, detected[i]});
    }

    DetectionBoundary b{spec.label(), params[s], std::nullopt};
    for (std::size_t i = 0; i + 1 < tau_grid.size(); ++i) {
      if (detected[i] == detected[i + 1]) continue;
      double lo = tau_grid[i], hi = tau_grid[i + 1];
      const bool lo_state = detected[i];
      while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        if (detected_at(mid) == lo_state)
          lo = mid;
        else
          hi = mid;
      }
      b.boundary_tau = 0.5 * (lo + hi);
      break;
    }
    result.boundaries.push_back(std::move(b));
  }
  return result;
}

std::string circuit_to_json(const CircuitSpec& c) {
  nlohmann::json j;
  j["modes"] = c.modes;
  nlohmann::json elems = nlohmann::json::array();
  for (const auto& e : c.elements) {
    nlohmann::json el;
    el["type"] =
        e.type == ElementType::beam_splitter ? "beam_splitter" : "phase_shifter";
    if (e.type == ElementType::beam_splitter)
      el["modes"] = {e.mode_a, e.mode_b};
    else
      el["modes"] = {e.mode_a};
    el["param"] = e.param;
    elems.push_back(el);
  }
  j["elements"] = elems;
  return j.dump(2);
}

CircuitSpec circuit_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  CircuitSpec c;
  c.modes = j.at("modes").get<int>();
  for (const auto& el : j.at("elements")) {
    CircuitElement e;
    const std::string type = el.at("type").get<std::string>();
    if (type == "beam_splitter") {
      e.type = ElementType::beam_splitter;
      e.mode_a = el.at("modes").at(0).get<int>();
      e.mode_b = el.at("modes").at(1).get<int>();
    } else if (type == "phase_shifter") {
      e.type = ElementType::phase_shifter;
      e.mode_a = el.at("modes").at(0).get<int>();
      e.mode_b = -1;
    } else {
      throw std::invalid_argument("circuit_from_json: unknown element type " + type);
    }
    e.param = el.at("param").get<double>();
    c.elements.push_back(e);
  }
  return c;
}

}  // namespace nonclass
