#include "nonclass/state_library.hpp"

#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

namespace nonclass {

namespace {

constexpr double kNorm012Tol = 1e-12;

Eigen::MatrixXcd exp_antihermitian(const Eigen::MatrixXcd& generator) {
  // exp(K) for K^dag = -K via the Hermitian eigenproblem of iK.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(cd(0, 1) * generator);
  const auto& lam = es.eigenvalues();
  Eigen::VectorXcd phases(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    phases(i) = std::exp(cd(0, -lam(i)));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::MatrixXcd displacement_operator(cd alpha, int d) {
  auto [a, adag] = ladder(d);
  return exp_antihermitian(alpha * adag - std::conj(alpha) * a);
}

Eigen::MatrixXcd squeeze_operator(double r, double phi, int d) {
  auto [a, adag] = ladder(d);
  const cd xi = r * std::exp(cd(0, phi));
  return exp_antihermitian(0.5 * (std::conj(xi) * a * a - xi * adag * adag));
}

Eigen::VectorXcd coherent_vector(cd alpha, int d) {
  Eigen::VectorXcd v(d);
  cd c = std::exp(-0.5 * std::norm(alpha));
  for (int n = 0; n < d; ++n) {
    v(n) = c;
    c *= alpha / std::sqrt(double(n + 1));
  }
  return v;
}

// Even-Fock series: |S_r> = sum_k (-e^{i phi} tanh r)^k sqrt((2k)!)/(2^k k!)
// |2k> / sqrt(cosh r).
Eigen::VectorXcd squeezed_vector(double r, double phi, int d) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
  cd c = 1.0 / std::sqrt(std::cosh(r));
  const cd ratio_base = -std::exp(cd(0, phi)) * std::tanh(r);
  for (int k = 0; 2 * k < d; ++k) {
    v(2 * k) = c;
    c *= ratio_base * std::sqrt((2.0 * k + 1.0) / (2.0 * k + 2.0));
  }
  return v;
}

int squeeze_margin(double r) {
  const double t = std::tanh(std::abs(r));
  if (t < 1e-6) return 8;
  // Squeeze-tail amplitudes fall off as tanh(r)^(levels/2).
  return 2 * static_cast<int>(std::ceil(38.0 / -std::log(t))) + 8;
}

int displacement_margin(cd alpha, int support) {
  const double a = std::abs(alpha);
  if (a == 0.0) return 0;
  return static_cast<int>(std::ceil(8.0 * a * a + 6.0 * a * std::sqrt(double(support)) + 16.0));
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::fock: return "fock";
    case Family::coherent: return "coherent";
    case Family::squeezed: return "squeezed";
    case Family::cat_even: return "cat_even";
    case Family::cat_odd: return "cat_odd";
    case Family::thermal: return "thermal";
    case Family::squeezed_thermal: return "squeezed_thermal";
    case Family::superposition012: return "superposition012";
  }
  throw std::logic_error("family_name: unreachable");
}

Family family_from_name(const std::string& name) {
  for (Family f : {Family::fock, Family::coherent, Family::squeezed,
                   Family::cat_even, Family::cat_odd, Family::thermal,
                   Family::squeezed_thermal, Family::superposition012})
    if (family_name(f) == name) return f;
  throw std::invalid_argument("unknown state family: " + name);
}

std::string StateSpec::label() const {
  std::ostringstream os;
  os.precision(4);
  os << family_name(family) << "(";
  switch (family) {
    case Family::fock: os << "n=" << n; break;
    case Family::coherent:
      os << "alpha=" << alpha.real() << (alpha.imag() < 0 ? "" : "+")
         << alpha.imag() << "i";
      break;
    case Family::squeezed:
      os << "r=" << r;
      if (phi_squeeze != 0.0) os << ",phi=" << phi_squeeze;
      break;
    case Family::cat_even:
    case Family::cat_odd:
      os << "beta=" << beta.real() << (beta.imag() < 0 ? "" : "+")
         << beta.imag() << "i";
      break;
    case Family::thermal: os << "nbar=" << nbar; break;
    case Family::squeezed_thermal:
      os << "nbar=" << nbar << ",r=" << r;
      break;
    case Family::superposition012:
      os << "a=" << amplitudes[0] << ",b=" << amplitudes[1]
         << ",c=" << amplitudes[2];
      break;
  }
  os << ")";
  if (photon_add > 0) os << "+add" << photon_add;
  if (photon_subtract > 0) os << "+sub" << photon_subtract;
  if (displacement != cd(0.0))
    os << "+D(" << displacement.real() << (displacement.imag() < 0 ? "" : "+")
       << displacement.imag() << "i)";
  if (rotation != 0.0) os << "+rot(" << rotation << ")";
  return os.str();
}

StateSpec fock_state(int n) {
  StateSpec s;
  s.family = Family::fock;
  s.n = n;
  return s;
}
StateSpec coherent_state(cd alpha) {
  StateSpec s;
  s.family = Family::coherent;
  s.alpha = alpha;
  return s;
}
StateSpec squeezed_state(double r, double phi) {
  StateSpec s;
  s.family = Family::squeezed;
  s.r = r;
  s.phi_squeeze = phi;
  return s;
}
StateSpec cat_state(bool even, cd beta) {
  StateSpec s;
  s.family = even ? Family::cat_even : Family::cat_odd;
  s.beta = beta;
  return s;
}
StateSpec thermal_state(double nbar) {
  StateSpec s;
  s.family = Family::thermal;
  s.nbar = nbar;
  return s;
}
StateSpec squeezed_thermal_state(double nbar, double r, double phi) {
  StateSpec s;
  s.family = Family::squeezed_thermal;
  s.nbar = nbar;
  s.r = r;
  s.phi_squeeze = phi;
  return s;
}
StateSpec superposition012_state(double a, double b, double c) {
  StateSpec s;
  s.family = Family::superposition012;
  s.amplitudes = {a, b, c};
  return s;
}
StateSpec displaced(StateSpec s, cd alpha) {
  s.displacement = alpha;
  return s;
}
StateSpec rotated(StateSpec s, double theta) {
  s.rotation = theta;
  return s;
}

double cat_normalization(bool even, cd beta) {
  const double e = std::exp(-2.0 * std::norm(beta));
  return std::sqrt(2.0 * (even ? 1.0 + e : 1.0 - e));
}

std::pair<bool, double> apply_annihilation_to_cat(bool even, cd beta) {
  if (beta == cd(0.0))
    throw std::invalid_argument("apply_annihilation_to_cat: beta must be nonzero");
  // a (|b> pm |-b>)/N_pm = beta (|b> mp |-b>)/N_pm = beta (N_mp/N_pm) |c_mp>;
  // the amplitude factor is the plain ratio of the normalization constants.
  const double n_same = cat_normalization(even, beta);
  const double n_flip = cat_normalization(!even, beta);
  return {!even, std::abs(beta) * n_flip / n_same};
}

namespace {

void validate_spec(const StateSpec& spec, int cutoff) {
  if (cutoff < 2) throw std::invalid_argument("make_state: cutoff must be >= 2");
  switch (spec.family) {
    case Family::fock:
      if (spec.n < 0) throw std::invalid_argument("fock: n must be >= 0");
      if (cutoff < spec.n + 1)
        throw std::invalid_argument("fock: cutoff below Fock index");
      break;
    case Family::squeezed:
    case Family::squeezed_thermal:
      if (spec.r < 0) throw std::invalid_argument("squeezed: r must be >= 0");
      if (spec.nbar < 0) throw std::invalid_argument("thermal: nbar must be >= 0");
      break;
    case Family::thermal:
      if (spec.nbar < 0) throw std::invalid_argument("thermal: nbar must be >= 0");
      break;
    case Family::cat_odd:
      if (spec.beta == cd(0.0))
        throw std::invalid_argument("cat_odd: beta = 0 is not normalizable");
      break;
    case Family::superposition012: {
      const auto& a = spec.amplitudes;
      const double norm = a[0] * a[0] + a[1] * a[1] + a[2] * a[2];
      if (std::abs(norm - 1.0) > kNorm012Tol)
        throw std::invalid_argument(
            "superposition012: amplitudes must satisfy a^2+b^2+c^2 = 1");
      if (cutoff < 3)
        throw std::invalid_argument("superposition012: cutoff must be >= 3");
      break;
    }
    default:
      break;
  }
}

bool family_is_pure(Family f) {
  return f != Family::thermal && f != Family::squeezed_thermal;
}

Eigen::VectorXcd base_vector(const StateSpec& spec, int w) {
  switch (spec.family) {
    case Family::fock: {
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(w);
      v(spec.n) = 1.0;
      return v;
    }
    case Family::coherent:
      return coherent_vector(spec.alpha, w);
    case Family::squeezed:
      return squeezed_vector(spec.r, spec.phi_squeeze, w);
    case Family::cat_even:
    case Family::cat_odd: {
      const bool even = spec.family == Family::cat_even;
      const double sign = even ? 1.0 : -1.0;
      Eigen::VectorXcd v =
          coherent_vector(spec.beta, w) + sign * coherent_vector(-spec.beta, w);
      return v / cat_normalization(even, spec.beta);
    }
    case Family::superposition012: {
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(w);
      v(0) = spec.amplitudes[0];
      v(1) = spec.amplitudes[1];
      v(2) = spec.amplitudes[2];
      return v;
    }
    default:
      throw std::logic_error("base_vector: mixed family");
  }
}

Eigen::MatrixXcd base_matrix(const StateSpec& spec, int w) {
  const double q = spec.nbar / (spec.nbar + 1.0);
  Eigen::VectorXcd diag(w);
  double p = 1.0 - q;
  for (int n = 0; n < w; ++n) {
    diag(n) = p;
    p *= q;
  }
  Eigen::MatrixXcd rho = diag.asDiagonal();
  if (spec.family == Family::squeezed_thermal && spec.r != 0.0) {
    const Eigen::MatrixXcd s = squeeze_operator(spec.r, spec.phi_squeeze, w);
    rho = s * rho * s.adjoint();
  }
  return rho;
}

}  // namespace

FockDensityOperator make_state(const StateSpec& spec, int cutoff) {
  validate_spec(spec, cutoff);

  int w = cutoff;
  if (spec.family == Family::squeezed_thermal) w += squeeze_margin(spec.r);
  w += spec.photon_add + spec.photon_subtract;
  if (spec.displacement != cd(0.0)) w += displacement_margin(spec.displacement, w);

  if (family_is_pure(spec.family)) {
    Eigen::VectorXcd psi = base_vector(spec, w);
    for (int i = 0; i < spec.photon_subtract; ++i) {
      Eigen::VectorXcd next(w);
      for (int n = 0; n + 1 < w; ++n) next(n) = std::sqrt(double(n + 1)) * psi(n + 1);
      next(w - 1) = 0.0;
      const double nn = next.norm();
      if (nn < 1e-14)
        throw std::invalid_argument("make_state: photon subtraction annihilated the state");
      psi = next / nn;
    }
    for (int i = 0; i < spec.photon_add; ++i) {
      Eigen::VectorXcd next = Eigen::VectorXcd::Zero(w);
      for (int n = 1; n < w; ++n) next(n) = std::sqrt(double(n)) * psi(n - 1);
      psi = next / next.norm();
    }
    if (spec.displacement != cd(0.0))
      psi = displacement_operator(spec.displacement, w) * psi;
    if (spec.rotation != 0.0)
      for (int n = 0; n < w; ++n) psi(n) *= std::exp(cd(0, -spec.rotation * n));
    return density_from_vector(1, cutoff, psi.head(cutoff));
  }

  Eigen::MatrixXcd rho = base_matrix(spec, w);
  auto [a, adag] = ladder(w);
  for (int i = 0; i < spec.photon_subtract; ++i) {
    rho = a * rho * adag;
    const double tr = rho.trace().real();
    if (tr < 1e-14)
      throw std::invalid_argument("make_state: photon subtraction annihilated the state");
    rho /= tr;
  }
  for (int i = 0; i < spec.photon_add; ++i) {
    rho = adag * rho * a;
    rho /= rho.trace().real();
  }
  if (spec.displacement != cd(0.0)) {
    const Eigen::MatrixXcd dop = displacement_operator(spec.displacement, w);
    rho = dop * rho * dop.adjoint();
  }
  if (spec.rotation != 0.0) {
    Eigen::VectorXcd phases(w);
    for (int n = 0; n < w; ++n) phases(n) = std::exp(cd(0, -spec.rotation * n));
    rho = phases.asDiagonal() * rho * phases.conjugate().asDiagonal();
  }

  Eigen::MatrixXcd block = rho.topLeftCorner(cutoff, cutoff);
  const double trace = block.trace().real();
  const double deficit = 1.0 - trace;
  block /= trace;
  block = 0.5 * (block + block.adjoint().eval());  // strip truncation skew
  return make_density(1, cutoff, std::move(block), std::max(0.0, deficit),
                      deficit);
}

namespace {

// Number distribution as a lazily extendable sequence, for the analytic
// families.
std::function<double(int)> number_distribution_fn(const StateSpec& spec) {
  switch (spec.family) {
    case Family::fock:
      return [n = spec.n](int k) { return k == n ? 1.0 : 0.0; };
    case Family::coherent: {
      const double mu = std::norm(spec.alpha);
      return [mu](int k) {
        double lp = -mu + k * std::log(std::max(mu, 1e-300));
        for (int t = 2; t <= k; ++t) lp -= std::log(double(t));
        return mu == 0.0 ? (k == 0 ? 1.0 : 0.0) : std::exp(lp);
      };
    }
    case Family::squeezed: {
      const double t2 = std::pow(std::tanh(spec.r), 2.0);
      const double c0 = 1.0 / std::cosh(spec.r);
      return [t2, c0](int k) {
        if (k % 2 != 0) return 0.0;
        double p = c0;
        for (int j = 0; j < k / 2; ++j) p *= t2 * (2.0 * j + 1.0) / (2.0 * j + 2.0);
        return p;
      };
    }
    case Family::cat_even:
    case Family::cat_odd: {
      const bool even = spec.family == Family::cat_even;
      const double mu = std::norm(spec.beta);
      const double norm2 = cat_normalization(even, spec.beta);
      return [even, mu, norm2](int k) {
        if ((k % 2 == 0) != even) return 0.0;
        double lp = -mu + k * std::log(std::max(mu, 1e-300));
        for (int t = 2; t <= k; ++t) lp -= std::log(double(t));
        return 4.0 * std::exp(lp) / (norm2 * norm2);
      };
    }
    case Family::thermal: {
      const double q = spec.nbar / (spec.nbar + 1.0);
      return [q](int k) { return (1.0 - q) * std::pow(q, k); };
    }
    case Family::superposition012: {
      const auto amps = spec.amplitudes;
      return [amps](int k) {
        return k < 3 ? amps[k] * amps[k] : 0.0;
      };
    }
    default:
      return {};
  }
}

int cutoff_from_weights(const std::vector<double>& w, double tail_tol) {
  std::vector<double> suffix(w.size() + 1, 0.0);
  for (int i = static_cast<int>(w.size()) - 1; i >= 0; --i)
    suffix[i] = suffix[i + 1] + w[i];
  for (std::size_t d = 0; d <= w.size(); ++d)
    if (suffix[d] <= tail_tol) return static_cast<int>(d);
  return -1;
}

}  // namespace

int auto_cutoff(const StateSpec& spec, double tail_tol, int moment_order) {
  if (!(tail_tol > 0.0 && tail_tol <= 1e-3))
    throw std::invalid_argument("auto_cutoff: tail_tol must be in (0, 1e-3]");
  if (moment_order < 0)
    throw std::invalid_argument("auto_cutoff: moment_order must be >= 0");

  const auto weight = [moment_order](int n) {
    return std::pow(double(n + 1), moment_order);
  };

  const bool analytic = !spec.has_modifiers() &&
                        spec.family != Family::squeezed_thermal;
  if (analytic) {
    auto pn = number_distribution_fn(spec);
    std::vector<double> w;
    double term = 1.0;
    for (int n = 0; n < 100000; ++n) {
      term = pn(n) * weight(n);
      w.push_back(term);
      if (n > 8 && term < tail_tol * 1e-4 &&
          w[n - 1] < tail_tol * 1e-4 && w[n - 2] < tail_tol * 1e-4)
        break;
    }
    const int d = cutoff_from_weights(w, tail_tol);
    if (d < 0) throw std::runtime_error("auto_cutoff: tail did not converge");
    return std::max(2, d + moment_order);
  }

  // Modified or squeezed-thermal states: measure the weighted tail on a
  // numerically constructed reference, doubling until the requested cutoff
  // sits in the converged lower half.  Populations at the 1e-16 roundoff
  // floor of the construction are not physical tail mass.
  for (int d_try = 32; d_try <= 2048; d_try *= 2) {
    const FockDensityOperator ref = make_state(spec, 2 * d_try);
    const Eigen::VectorXd diag = number_distribution(ref);
    std::vector<double> w(diag.size());
    for (int n = 0; n < diag.size(); ++n) {
      const double p = std::abs(diag(n));
      w[n] = p < 1e-16 ? 0.0 : p * weight(n);
    }
    const int d = cutoff_from_weights(w, tail_tol);
    if (d >= 0 && d <= d_try) return std::max(2, d + moment_order);
  }
  throw std::runtime_error("auto_cutoff: no converged cutoff below 2048");
}

std::string state_spec_to_json(const StateSpec& spec) {
  nlohmann::json j;
  j["family"] = family_name(spec.family);
  switch (spec.family) {
    case Family::fock: j["n"] = spec.n; break;
    case Family::coherent:
      j["alpha"] = {spec.alpha.real(), spec.alpha.imag()};
      break;
    case Family::squeezed:
      j["r"] = spec.r;
      j["phi_squeeze"] = spec.phi_squeeze;
      break;
    case Family::cat_even:
    case Family::cat_odd:
      j["beta"] = {spec.beta.real(), spec.beta.imag()};
      break;
    case Family::thermal: j["nbar"] = spec.nbar; break;
    case Family::squeezed_thermal:
      j["nbar"] = spec.nbar;
      j["r"] = spec.r;
      j["phi_squeeze"] = spec.phi_squeeze;
      break;
    case Family::superposition012:
      j["amplitudes"] = spec.amplitudes;
      break;
  }
  if (spec.displacement != cd(0.0))
    j["displacement"] = {spec.displacement.real(), spec.displacement.imag()};
  if (spec.rotation != 0.0) j["rotation"] = spec.rotation;
  if (spec.photon_add > 0) j["photon_add"] = spec.photon_add;
  if (spec.photon_subtract > 0) j["photon_subtract"] = spec.photon_subtract;
  return j.dump(2);
}

StateSpec state_spec_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  StateSpec spec;
  spec.family = family_from_name(j.at("family").get<std::string>());
  const auto get_cd = [&](const char* key) {
    const auto& v = j.at(key);
    return cd(v.at(0).get<double>(), v.at(1).get<double>());
  };
  if (j.contains("n")) spec.n = j["n"].get<int>();
  if (j.contains("alpha")) spec.alpha = get_cd("alpha");
  if (j.contains("r")) spec.r = j["r"].get<double>();
  if (j.contains("phi_squeeze")) spec.phi_squeeze = j["phi_squeeze"].get<double>();
  if (j.contains("beta")) spec.beta = get_cd("beta");
  if (j.contains("nbar")) spec.nbar = j["nbar"].get<double>();
  if (j.contains("amplitudes")) {
    const auto a = j["amplitudes"];
    spec.amplitudes = {a.at(0).get<double>(), a.at(1).get<double>(),
                       a.at(2).get<double>()};
  }
  if (j.contains("displacement")) spec.displacement = get_cd("displacement");
  if (j.contains("rotation")) spec.rotation = j["rotation"].get<double>();
  if (j.contains("photon_add")) spec.photon_add = j["photon_add"].get<int>();
  if (j.contains("photon_subtract"))
    spec.photon_subtract = j["photon_subtract"].get<int>();
  return spec;
}

}  // namespace nonclass
