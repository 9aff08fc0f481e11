#include "nonclass/boson_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace nonclass {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double b = 1.0;
  for (int i = 0; i < k; ++i) b = b * (n - i) / (i + 1);
  return std::round(b);
}

}  // namespace

int monomial_degree(MonomialKey k) {
  int deg = 0;
  for (int m = 0; m < kMaxModes; ++m) deg += dag_power(k, m) + plain_power(k, m);
  return deg;
}

int monomial_modes(MonomialKey k) {
  int modes = 0;
  for (int m = 0; m < kMaxModes; ++m)
    if (dag_power(k, m) != 0 || plain_power(k, m) != 0) modes = m + 1;
  return modes;
}

void BosonPolynomial::add_term(MonomialKey key, cd coeff) {
  if (coeff == cd(0.0, 0.0)) return;
  auto [it, inserted] = terms_.try_emplace(key, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == cd(0.0, 0.0)) terms_.erase(it);
  }
}

void BosonPolynomial::prune(double eps) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) < eps)
      it = terms_.erase(it);
    else
      ++it;
  }
}

BosonPolynomial& BosonPolynomial::operator+=(const BosonPolynomial& rhs) {
  for (const auto& [k, c] : rhs.terms_) add_term(k, c);
  return *this;
}

BosonPolynomial& BosonPolynomial::operator-=(const BosonPolynomial& rhs) {
  for (const auto& [k, c] : rhs.terms_) add_term(k, -c);
  return *this;
}

BosonPolynomial& BosonPolynomial::operator*=(cd scalar) {
  if (scalar == cd(0.0, 0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, c] : terms_) c *= scalar;
  return *this;
}

int BosonPolynomial::modes() const {
  int m = 0;
  for (const auto& [k, c] : terms_) m = std::max(m, monomial_modes(k));
  return m;
}

int BosonPolynomial::degree() const {
  int d = 0;
  for (const auto& [k, c] : terms_) d = std::max(d, monomial_degree(k));
  return d;
}

int BosonPolynomial::max_single_exponent() const {
  int e = 0;
  for (const auto& [k, c] : terms_)
    for (int m = 0; m < kMaxModes; ++m)
      e = std::max({e, dag_power(k, m), plain_power(k, m)});
  return e;
}

bool BosonPolynomial::is_zero(double eps) const {
  for (const auto& [k, c] : terms_)
    if (std::abs(c) >= eps) return false;
  return true;
}

std::string BosonPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i)";
    for (int m = 0; m < kMaxModes; ++m) {
      int d = dag_power(k, m), p = plain_power(k, m);
      if (d > 0) {
        os << " ad" << m;
        if (d > 1) os << "^" << d;
      }
      if (p > 0) {
        os << " a" << m;
        if (p > 1) os << "^" << p;
      }
    }
  }
  return os.str();
}

bool approx_equal(const BosonPolynomial& p, const BosonPolynomial& q, double eps) {
  BosonPolynomial d = p;
  d -= q;
  return d.is_zero(eps);
}

std::string diff_report(const BosonPolynomial& p, const BosonPolynomial& q, double eps) {
  BosonPolynomial d = p;
  d -= q;
  d.prune(eps);
  if (d.empty()) return "";
  return "differing terms: " + d.to_string();
}

namespace {

// Single-mode product a^dag^p1 a^q1 . a^dag^p2 a^q2 reordered with
// a^q a^dag^p = sum_j j! C(q,j) C(p,j) a^dag^(p-j) a^(q-j):
// emits (dag, plain, integer coefficient) triplets.
struct ModeTerm {
  int dag;
  int plain;
  double coeff;
};

std::vector<ModeTerm> mode_product(int p1, int q1, int p2, int q2) {
  std::vector<ModeTerm> out;
  const int jmax = std::min(q1, p2);
  out.reserve(jmax + 1);
  for (int j = 0; j <= jmax; ++j) {
    double c = factorial(j) * binomial(q1, j) * binomial(p2, j);
    out.push_back({p1 + p2 - j, q1 + q2 - j, c});
  }
  return out;
}

}  // namespace

BosonPolynomial multiply(const BosonPolynomial& p, const BosonPolynomial& q) {
  BosonPolynomial result;
  for (const auto& [kp, cp] : p.terms()) {
    for (const auto& [kq, cq] : q.terms()) {
      // Cross-mode factors commute; expand the commutator sum per mode.
      std::vector<std::pair<MonomialKey, double>> partial{{0, 1.0}};
      for (int m = 0; m < kMaxModes; ++m) {
        int p1 = dag_power(kp, m), q1 = plain_power(kp, m);
        int p2 = dag_power(kq, m), q2 = plain_power(kq, m);
        if (p1 + q1 + p2 + q2 == 0) continue;
        auto terms = mode_product(p1, q1, p2, q2);
        std::vector<std::pair<MonomialKey, double>> next;
        next.reserve(partial.size() * terms.size());
        for (const auto& [key, c] : partial)
          for (const auto& t : terms)
            next.emplace_back(key | make_monomial(m, t.dag, t.plain), c * t.coeff);
        partial = std::move(next);
      }
      const cd cc = cp * cq;
      for (const auto& [key, c] : partial) result.add_term(key, cc * c);
    }
  }
  result.prune();
  return result;
}

BosonPolynomial nmul(const BosonPolynomial& p, const BosonPolynomial& q) {
  BosonPolynomial result;
  for (const auto& [kp, cp] : p.terms())
    for (const auto& [kq, cq] : q.terms()) {
      MonomialKey key = 0;
      for (int m = 0; m < kMaxModes; ++m)
        key |= make_monomial(m, dag_power(kp, m) + dag_power(kq, m),
                             plain_power(kp, m) + plain_power(kq, m));
      result.add_term(key, cp * cq);
    }
  result.prune();
  return result;
}

BosonPolynomial adjoint(const BosonPolynomial& p) {
  BosonPolynomial result;
  for (const auto& [k, c] : p.terms()) {
    MonomialKey key = 0;
    for (int m = 0; m < kMaxModes; ++m)
      key |= make_monomial(m, plain_power(k, m), dag_power(k, m));
    result.add_term(key, std::conj(c));
  }
  return result;
}

bool is_hermitian(const BosonPolynomial& p, double eps) {
  return approx_equal(p, adjoint(p), eps);
}

BosonPolynomial pow_multiply(const BosonPolynomial& p, int k) {
  if (k < 0) throw std::invalid_argument("pow_multiply: negative exponent");
  BosonPolynomial result{cd(1.0)};
  for (int i = 0; i < k; ++i) result = multiply(result, p);
  return result;
}

BosonPolynomial term_normal_order(const OperatorWord& w) {
  MonomialKey key = 0;
  for (const auto& l : w.letters) {
    if (l.mode < 0 || l.mode >= kMaxModes)
      throw std::invalid_argument("term_normal_order: mode out of range");
    key += make_monomial(l.mode, l.dagger ? 1 : 0, l.dagger ? 0 : 1);
  }
  return BosonPolynomial::monomial(key, w.coeff);
}

BosonPolynomial term_normal_order(const BosonPolynomial& p) { return p; }

BosonPolynomial normal_order(const OperatorWord& w) {
  BosonPolynomial result;
  std::vector<OperatorWord> work{w};
  while (!work.empty()) {
    OperatorWord cur = std::move(work.back());
    work.pop_back();
    bool rewritten = false;
    for (std::size_t t = 0; t + 1 < cur.letters.size(); ++t) {
      const auto& lhs = cur.letters[t];
      const auto& rhs = cur.letters[t + 1];
      if (!lhs.dagger && rhs.dagger) {
        if (lhs.mode != rhs.mode) {
          std::swap(cur.letters[t], cur.letters[t + 1]);
          work.push_back(std::move(cur));
        } else {
          // a a^dag = a^dag a + 1
          OperatorWord swapped = cur;
          std::swap(swapped.letters[t], swapped.letters[t + 1]);
          OperatorWord contracted = cur;
          contracted.letters.erase(contracted.letters.begin() + t,
                                   contracted.letters.begin() + t + 2);
          work.push_back(std::move(swapped));
          work.push_back(std::move(contracted));
        }
        rewritten = true;
        break;
      }
    }
    if (!rewritten) result += term_normal_order(cur);
  }
  result.prune();
  return result;
}

std::vector<OperatorWord> to_words(const BosonPolynomial& p) {
  std::vector<OperatorWord> out;
  out.reserve(p.size());
  for (const auto& [k, c] : p.terms()) {
    OperatorWord w;
    w.coeff = c;
    for (int m = 0; m < kMaxModes; ++m)
      for (int i = 0; i < dag_power(k, m); ++i) w.letters.push_back({m, true});
    for (int m = 0; m < kMaxModes; ++m)
      for (int i = 0; i < plain_power(k, m); ++i) w.letters.push_back({m, false});
    out.push_back(std::move(w));
  }
  return out;
}

BosonPolynomial schwinger(Schwinger component, int mode_k, int mode_l) {
  if (mode_k == mode_l)
    throw std::invalid_argument("schwinger: mode indices must differ");
  const auto adk_al = BosonPolynomial::monomial(make_monomial(mode_k, 1, 0) |
                                                make_monomial(mode_l, 0, 1));
  const auto adl_ak = BosonPolynomial::monomial(make_monomial(mode_l, 1, 0) |
                                                make_monomial(mode_k, 0, 1));
  const auto nk = BosonPolynomial::number(mode_k);
  const auto nl = BosonPolynomial::number(mode_l);
  switch (component) {
    case Schwinger::x:
      return 0.5 * (adl_ak + adk_al);
    case Schwinger::y:
      return cd(0, 0.5) * (adl_ak - adk_al);
    case Schwinger::z:
      return 0.5 * (nk - nl);
    case Schwinger::zero:
      return 0.5 * (nk + nl);
  }
  throw std::logic_error("schwinger: unreachable");
}

ModeUnitary::ModeUnitary(Eigen::MatrixXcd m) : u(std::move(m)) {
  if (u.rows() != u.cols())
    throw std::invalid_argument("ModeUnitary: matrix must be square");
  const Eigen::MatrixXcd residue =
      u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols());
  if (residue.cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("ModeUnitary: u^dag u != 1 within 1e-12");
}

BosonPolynomial transform_modes(const BosonPolynomial& p, const ModeUnitary& u) {
  const int dim = u.dim();
  if (p.modes() > dim)
    throw std::invalid_argument("transform_modes: unitary dimension " +
                                std::to_string(dim) + " < polynomial modes " +
                                std::to_string(p.modes()));
  if (dim > kMaxModes)
    throw std::invalid_argument("transform_modes: more than kMaxModes modes");

  // Substituted daggers commute among themselves, as do substituted plain
  // operators, and every dagger stays left of every plain factor, so the
  // expansion stays normal-ordered throughout.
  std::array<BosonPolynomial, kMaxModes> dag_image, plain_image;
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      dag_image[i] += std::conj(u.u(i, j)) * BosonPolynomial::creation(j);
      plain_image[i] += u.u(i, j) * BosonPolynomial::annihilation(j);
    }
  }

  BosonPolynomial result;
  for (const auto& [k, c] : p.terms()) {
    BosonPolynomial dag_part{cd(1.0)};
    BosonPolynomial plain_part{cd(1.0)};
    for (int m = 0; m < dim; ++m) {
      for (int i = 0; i < dag_power(k, m); ++i)
        dag_part = nmul(dag_part, dag_image[m]);
      for (int i = 0; i < plain_power(k, m); ++i)
        plain_part = nmul(plain_part, plain_image[m]);
    }
    BosonPolynomial term = nmul(dag_part, plain_part);
    term *= c;
    result += term;
  }
  result.prune();
  return result;
}

BosonPolynomial relabel_mode(const BosonPolynomial& p, int from, int to) {
  if (from == to) return p;
  BosonPolynomial result;
  for (const auto& [k, c] : p.terms()) {
    if (dag_power(k, to) != 0 || plain_power(k, to) != 0)
      throw std::invalid_argument("relabel_mode: target mode occupied");
    MonomialKey key = k & ~(static_cast<MonomialKey>(0xffff) << (16 * from));
    key |= make_monomial(to, dag_power(k, from), plain_power(k, from));
    result.add_term(key, c);
  }
  return result;
}

BosonPolynomial operator_determinant(
    const std::vector<std::vector<BosonPolynomial>>& entries,
    const std::vector<int>& row_to_mode, PermutationGroup group) {
  const std::size_t n = entries.size();
  if (n == 0) throw std::invalid_argument("operator_determinant: empty matrix");
  for (const auto& row : entries)
    if (row.size() != n)
      throw std::invalid_argument("operator_determinant: matrix not square");
  if (row_to_mode.size() != n)
    throw std::invalid_argument("operator_determinant: row_to_mode size mismatch");
  {
    std::vector<int> sorted = row_to_mode;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("operator_determinant: duplicate mode assignment");
  }

  // Enumerate the mode-assignment group G acting on row_to_mode.
  std::vector<std::vector<int>> assignments;
  {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      if (group == PermutationGroup::even_permutations) {
        int inversions = 0;
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = i + 1; j < n; ++j)
            if (perm[i] > perm[j]) ++inversions;
        if (inversions % 2 != 0) continue;
      }
      std::vector<int> assign(n);
      for (std::size_t i = 0; i < n; ++i) assign[i] = row_to_mode[perm[i]];
      assignments.push_back(std::move(assign));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  BosonPolynomial total;
  for (const auto& assign : assignments) {
    // Leibniz expansion over column permutations.
    std::vector<int> cols(n);
    std::iota(cols.begin(), cols.end(), 0);
    do {
      int inversions = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (cols[i] > cols[j]) ++inversions;
      const double sign = (inversions % 2 == 0) ? 1.0 : -1.0;
      BosonPolynomial prod{cd(sign)};
      for (std::size_t i = 0; i < n; ++i)
        prod = nmul(prod, relabel_mode(entries[i][cols[i]], 0, assign[i]));
      total += prod;
    } while (std::next_permutation(cols.begin(), cols.end()));
  }
  total *= cd(1.0 / static_cast<double>(assignments.size()));
  total.prune();
  return total;
}

std::string polynomial_to_json(const BosonPolynomial& p) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [k, c] : p.terms()) {
    nlohmann::json modes = nlohmann::json::array();
    for (int m = 0; m < kMaxModes; ++m) {
      int d = dag_power(k, m), q = plain_power(k, m);
      if (d == 0 && q == 0) continue;
      modes.push_back({{"mode", m}, {"dag_pow", d}, {"pow", q}});
    }
    out.push_back({{"modes", modes}, {"re", c.real()}, {"im", c.imag()}});
  }
  return out.dump(2);
}

BosonPolynomial polynomial_from_json(const std::string& text) {
  const auto parsed = nlohmann::json::parse(text);
  BosonPolynomial p;
  for (const auto& term : parsed) {
    MonomialKey key = 0;
    for (const auto& m : term.at("modes"))
      key |= make_monomial(m.at("mode").get<int>(), m.at("dag_pow").get<int>(),
                           m.at("pow").get<int>());
    p.add_term(key, cd(term.at("re").get<double>(), term.at("im").get<double>()));
  }
  return p;
}

}  // namespace nonclass
