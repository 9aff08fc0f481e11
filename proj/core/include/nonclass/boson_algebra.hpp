#ifndef NONCLASS_BOSON_ALGEBRA_HPP
#define NONCLASS_BOSON_ALGEBRA_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace nonclass {

using cd = std::complex<double>;

/// Coefficients with magnitude below this are pruned after floating
/// arithmetic (cancellation residue).
inline constexpr double kCoeffPrune = 1e-14;

/// Maximum number of modes a polynomial can touch (four state replicas).
inline constexpr int kMaxModes = 4;

// A monomial in canonical normal-ordered form is fully described by a pair
// of exponents (dagger_power, plain_power) per mode.  The pairs are packed
// into a 64-bit key, 16 bits per mode: bits [16m, 16m+8) hold the plain
// power and bits [16m+8, 16m+16) the dagger power of mode m.  Mode pairs
// equal to (0,0) contribute zero bits, so the empty key is the identity.
using MonomialKey = std::uint64_t;

inline int dag_power(MonomialKey k, int mode) {
  return static_cast<int>((k >> (16 * mode + 8)) & 0xffu);
}
inline int plain_power(MonomialKey k, int mode) {
  return static_cast<int>((k >> (16 * mode)) & 0xffu);
}
inline MonomialKey make_monomial(int mode, int dag, int plain) {
  return (static_cast<MonomialKey>(dag & 0xff) << (16 * mode + 8)) |
         (static_cast<MonomialKey>(plain & 0xff) << (16 * mode));
}

/// Total operator degree (sum of all exponents) of a monomial.
int monomial_degree(MonomialKey k);

/// Largest mode index with a nonzero exponent, plus one (0 for identity).
int monomial_modes(MonomialKey k);

/// A finite complex-linear combination of normal-ordered monomials.
/// The map representation keeps terms in a deterministic order and never
/// stores an exactly-zero coefficient.
class BosonPolynomial {
 public:
  using TermMap = std::map<MonomialKey, cd>;

  BosonPolynomial() = default;
  explicit BosonPolynomial(cd scalar) { add_term(0, scalar); }

  static BosonPolynomial monomial(MonomialKey key, cd coeff = 1.0) {
    BosonPolynomial p;
    p.add_term(key, coeff);
    return p;
  }
  /// a_mode^dagger
  static BosonPolynomial creation(int mode) {
    return monomial(make_monomial(mode, 1, 0));
  }
  /// a_mode
  static BosonPolynomial annihilation(int mode) {
    return monomial(make_monomial(mode, 0, 1));
  }
  /// a_mode^dagger a_mode
  static BosonPolynomial number(int mode) {
    return monomial(make_monomial(mode, 1, 1));
  }

  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  void add_term(MonomialKey key, cd coeff);
  void prune(double eps = kCoeffPrune);

  BosonPolynomial& operator+=(const BosonPolynomial& rhs);
  BosonPolynomial& operator-=(const BosonPolynomial& rhs);
  BosonPolynomial& operator*=(cd scalar);

  friend BosonPolynomial operator+(BosonPolynomial a, const BosonPolynomial& b) {
    a += b;
    return a;
  }
  friend BosonPolynomial operator-(BosonPolynomial a, const BosonPolynomial& b) {
    a -= b;
    return a;
  }
  friend BosonPolynomial operator*(BosonPolynomial a, cd s) {
    a *= s;
    return a;
  }
  friend BosonPolynomial operator*(cd s, BosonPolynomial a) {
    a *= s;
    return a;
  }

  /// Number of modes spanned (max mode index + 1 over all terms).
  int modes() const;
  /// Max total degree over all terms.
  int degree() const;
  /// Max per-mode single-factor degree, i.e. largest dag or plain exponent.
  int max_single_exponent() const;

  bool is_zero(double eps = kCoeffPrune) const;
  std::string to_string() const;

 private:
  TermMap terms_;
};

/// p == q up to coefficient tolerance.
bool approx_equal(const BosonPolynomial& p, const BosonPolynomial& q,
                  double eps = 1e-12);

/// Monomials where |coeff(p) - coeff(q)| > eps, rendered for diagnostics.
std::string diff_report(const BosonPolynomial& p, const BosonPolynomial& q,
                        double eps = 1e-12);

/// Product with the exact commutator [a_i, a_j^dagger] = delta_ij applied,
/// returned in canonical normal-ordered form.  Commutator-generated
/// constants are small integers and exact in double precision.
BosonPolynomial multiply(const BosonPolynomial& p, const BosonPolynomial& q);

/// Term-by-term normal-ordered product :pq: -- exponents add per mode and
/// no commutator terms are generated.
BosonPolynomial nmul(const BosonPolynomial& p, const BosonPolynomial& q);

/// Hermitian adjoint: swap dagger/plain exponents, conjugate coefficients.
BosonPolynomial adjoint(const BosonPolynomial& p);

bool is_hermitian(const BosonPolynomial& p, double eps = 1e-12);

/// p^k via repeated multiply (k >= 0).
BosonPolynomial pow_multiply(const BosonPolynomial& p, int k);

// ---------------------------------------------------------------------------
// Operator words: an explicitly ordered product of ladder letters.  Words are
// the transient, non-canonical form used to define term-by-term normal
// ordering and to serve as an independent oracle for `multiply`.

struct LadderLetter {
  int mode = 0;
  bool dagger = false;
};

struct OperatorWord {
  cd coeff = 1.0;
  std::vector<LadderLetter> letters;
};

/// Rearranges the word's letters into normal order *without* commutator
/// corrections (coefficient preserved): the "term by term" :: operation.
BosonPolynomial term_normal_order(const OperatorWord& w);

/// Identity on polynomials: terms are already stored normal-ordered.
BosonPolynomial term_normal_order(const BosonPolynomial& p);

/// Full normal ordering of a word by recursive application of
/// a_i a_j^dagger = a_j^dagger a_i + delta_ij.  Exact; used as the
/// independent multiplication oracle in tests.
BosonPolynomial normal_order(const OperatorWord& w);

/// Flattens a polynomial term into a word (daggers first, then plains).
std::vector<OperatorWord> to_words(const BosonPolynomial& p);

// ---------------------------------------------------------------------------
// Schwinger angular-momentum operators on a mode pair (k, l):
//   L_x = (a_l^dag a_k + a_k^dag a_l)/2
//   L_y = i (a_l^dag a_k - a_k^dag a_l)/2
//   L_z = (a_k^dag a_k - a_l^dag a_l)/2
//   L_0 = (a_k^dag a_k + a_l^dag a_l)/2

enum class Schwinger { x, y, z, zero };

/// Throws std::invalid_argument when k == l.
BosonPolynomial schwinger(Schwinger component, int mode_k, int mode_l);

// ---------------------------------------------------------------------------

/// Square complex matrix over mode indices; u must satisfy u^dag u = 1
/// within 1e-12.
struct ModeUnitary {
  Eigen::MatrixXcd u;

  explicit ModeUnitary(Eigen::MatrixXcd m);
  int dim() const { return static_cast<int>(u.rows()); }
  ModeUnitary adjoint_matrix() const { return ModeUnitary(u.adjoint()); }
};

/// Substitutes a_i -> sum_j u_ij a_j and a_i^dag -> sum_j u*_ij a_j^dag.
/// The substitution is an algebra homomorphism.  Throws on dimension
/// mismatch with the polynomial's mode span.
BosonPolynomial transform_modes(const BosonPolynomial& p, const ModeUnitary& u);

// ---------------------------------------------------------------------------

enum class PermutationGroup { all_permutations, even_permutations };

/// Symmetrized operator determinant:
///   (1/|G|) sum_{sigma in G} det( entries with row i placed on mode
///                                 sigma(row_to_mode[i]) )
/// expanded by the Leibniz rule.  `entries[i][j]` are single-mode
/// polynomials on mode 0; each is relabelled onto the replica mode assigned
/// to its row.  Factors acting on distinct modes commute, so the product
/// order across modes is immaterial.
BosonPolynomial operator_determinant(
    const std::vector<std::vector<BosonPolynomial>>& entries,
    const std::vector<int>& row_to_mode, PermutationGroup group);

/// Relabels mode `from` to mode `to` (target exponents must be empty).
BosonPolynomial relabel_mode(const BosonPolynomial& p, int from, int to);

/// JSON form: list of {modes: [{mode, dag_pow, pow}], re, im}.
std::string polynomial_to_json(const BosonPolynomial& p);
BosonPolynomial polynomial_from_json(const std::string& text);

}  // namespace nonclass

#endif  // NONCLASS_BOSON_ALGEBRA_HPP
