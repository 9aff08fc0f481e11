#include "nonclass/minor_criteria.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include <Eigen/LU>

namespace nonclass {

namespace {

std::vector<int> normalize_subset(std::vector<int> subset) {
  if (subset.empty())
    throw std::invalid_argument("principal minor: empty subset");
  std::sort(subset.begin(), subset.end());
  if (std::adjacent_find(subset.begin(), subset.end()) != subset.end())
    throw std::invalid_argument("principal minor: repeated index");
  if (subset.front() < 1)
    throw std::invalid_argument("principal minor: indices are 1-based");
  return subset;
}

std::string subset_key(const std::vector<int>& s) {
  std::string key;
  for (int i : s) key += std::to_string(i);
  return key;
}

}  // namespace

bool is_dominant_subset(std::vector<int> subset) {
  subset = normalize_subset(subset);
  std::size_t pos = 0;
  for (int block = 0;; ++block) {
    const int lo = block * (block + 1) / 2 + 1;
    const int hi = lo + block;  // block n spans n+1 columns
    std::vector<int> in_block;
    while (pos < subset.size() && subset[pos] >= lo && subset[pos] <= hi)
      in_block.push_back(subset[pos++]);
    if (pos == subset.size()) return true;  // trailing block may be partial
    // More indices follow, so this block must be completely present.
    if (static_cast<int>(in_block.size()) != block + 1) return false;
  }
}

MinorResult principal_minor(const MomentMatrix& m, std::vector<int> subset) {
  subset = normalize_subset(subset);
  if (subset.back() > m.size)
    throw std::invalid_argument("principal_minor: index " +
                                std::to_string(subset.back()) +
                                " out of range for N=" + std::to_string(m.size));
  const int k = static_cast<int>(subset.size());
  Eigen::MatrixXcd sub(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      sub(i, j) = m.entry(subset[i], subset[j]);

  const cd det = k == 1 ? sub(0, 0) : Eigen::FullPivLU<Eigen::MatrixXcd>(sub).determinant();
  if (std::abs(det.imag()) > 1e-9 * (1.0 + std::abs(det.real())))
    throw std::runtime_error("principal_minor: imaginary residue " +
                             std::to_string(det.imag()) +
                             " (Hermiticity violation?)");
  MinorResult r;
  r.subset = subset;
  r.value = det.real();
  r.nonclassical_detected = r.value < -kDetectionEpsilon;
  r.provenance = m.provenance;
  r.dominant = is_dominant_subset(subset);
  return r;
}

namespace {

struct CatParams {
  double b2;  // |beta|^2
  double u;   // ratio N_other / N_self appearing in <n>
};

double fock_minor(int n, const std::string& key) {
  const double nn = n;
  static const std::map<std::string, int> row = {
      {"12", 0},   {"13", 0},   {"14", 1},   {"16", 1},   {"15", 2},
      {"23", 3},   {"24", 4},   {"26", 4},   {"34", 4},   {"36", 4},
      {"25", 4},   {"35", 4},   {"45", 5},   {"56", 5},   {"46", 5},
      {"123", 3},  {"124", 6},  {"126", 6},  {"134", 6},  {"136", 6},
      {"125", 7},  {"135", 7},  {"145", 8},  {"156", 8},  {"146", 5},
      {"234", 9},  {"236", 9},  {"235", 9},  {"245", 10}, {"256", 10},
      {"345", 10}, {"356", 10}, {"246", 10}, {"346", 10}, {"456", 11},
      {"1234", 9}, {"1235", 12}, {"1456", 13}, {"12345", 14}};
  switch (row.at(key)) {
    case 0: return nn;
    case 1: return nn * (nn - 1);
    case 2: return -nn;
    case 3: return nn * nn;
    case 4: return nn * nn * (nn - 1);
    case 5: return nn * nn * (nn - 1) * (nn - 1);
    case 6: return nn * nn * (nn - 1);
    case 7: return -nn * nn;
    case 8: return -nn * nn * (nn - 1);
    case 9: return nn * nn * nn * (nn - 1);
    case 10: return nn * nn * nn * (nn - 1) * (nn - 1);
    case 11: return std::pow(nn, 3) * std::pow(nn - 1, 3);
    case 12: return -nn * nn * nn;
    case 13: return -std::pow(nn, 3) * std::pow(nn - 1, 2);
    case 14: return -std::pow(nn, 4) * (nn - 1);
  }
  throw std::logic_error("fock_minor: unreachable");
}

double squeezed_minor(double r, const std::string& key) {
  const double sh = std::sinh(r), ch = std::cosh(r);
  const double sh2 = sh * sh, sh4 = sh2 * sh2, sh6 = sh4 * sh2;
  const double c2r = std::cosh(2 * r);
  static const std::map<std::string, int> row = {
      {"12", 0},   {"13", 0},   {"14", 1},   {"16", 1},   {"15", 2},
      {"23", 3},   {"24", 4},   {"26", 4},   {"34", 4},   {"36", 4},
      {"25", 4},   {"35", 4},   {"45", 5},   {"56", 5},   {"46", 6},
      {"123", 3},  {"124", 7},  {"126", 7},  {"134", 7},  {"136", 7},
      {"125", 8},  {"135", 8},  {"145", 9},  {"156", 9},  {"146", 10},
      {"234", 11}, {"236", 11}, {"235", 12}, {"245", 13}, {"256", 13},
      {"345", 13}, {"356", 13}, {"246", 14}, {"346", 14}, {"456", 15},
      {"1234", 9}, {"1235", 16}, {"1456", 17}, {"12345", 18}};
  switch (row.at(key)) {
    case 0: return sh2;
    case 1: return 2 * sh4;
    case 2: return c2r * sh2;
    case 3: return -sh2;
    case 4: return sh4 * (ch * ch + 2 * sh2);
    case 5: return 0.5 * (5 - 3 * c2r) * sh4;
    case 6: return -2 * (1 + 3 * c2r) * sh4;
    case 7: return 2 * sh6;
    case 8: return sh4 * c2r;
    case 9: return -2 * sh6;
    case 10: return -4 * c2r * sh4;
    case 11: return 0.5 * (1 - 3 * c2r) * sh4;
    case 12: return -sh4 * (ch * ch + 2 * sh2);
    case 13: return 0.5 * (5 - 3 * c2r) * sh6;
    case 14: return -2 * (1 + 3 * c2r) * sh6;
    case 15: return -8 * sh6;
    case 16: return -c2r * sh4;
    case 17: return -4 * sh6;
    case 18: return 2 * sh4 * sh4;
  }
  throw std::logic_error("squeezed_minor: unreachable");
}

double cat_minor(const CatParams& c, const std::string& key) {
  // u = N_+/N_- for odd cats, N_-/N_+ for even cats; rows with both
  // parities share the same shape.
  const double b2 = c.b2, u = c.u, u2 = u * u;
  static const std::map<std::string, int> row = {
      {"12", 0},   {"13", 0},   {"14", 1},   {"16", 1},   {"15", 2},
      {"23", 3},   {"24", 4},   {"26", 4},   {"34", 4},   {"36", 4},
      {"25", 4},   {"35", 4},   {"45", 5},   {"56", 5},   {"46", 1},
      {"123", 3},  {"124", 1},  {"126", 1},  {"134", 1},  {"136", 1},
      {"125", 6},  {"135", 6},  {"145", 1},  {"156", 1},  {"146", 1},
      {"234", 7},  {"236", 7},  {"235", 7},  {"245", 8},  {"256", 8},
      {"345", 8},  {"356", 8},  {"246", 1},  {"346", 1},  {"456", 1},
      {"1234", 1}, {"1235", 9}, {"1456", 1}, {"12345", 1}};
  switch (row.at(key)) {
    case 0: return b2 * u;
    case 1: return 0.0;
    case 2: return b2 * b2 * (1 - u2);
    case 3: return b2 * b2 * (u2 - 1);
    case 4: return b2 * b2 * b2 * u;
    case 5: return std::pow(b2, 4) * (1 - u2);
    case 6: return std::pow(b2, 3) * u * (1 - u2);
    case 7: return std::pow(b2, 4) * (u2 - 1);
    case 8: return std::pow(b2, 5) * u * (1 - u2);
    case 9: return -std::pow(b2, 4) * (u2 - 1) * (u2 - 1);
  }
  throw std::logic_error("cat_minor: unreachable");
}

double squeezed_thermal_minor(double nbar, double r, const std::string& key) {
  const double d15 =
      0.25 * (1 - 2 * (1 + 2 * nbar) * std::cosh(2 * r) +
              std::pow(1 + 2 * nbar, 2) * std::cosh(4 * r));
  const double d23 =
      0.5 + nbar + nbar * nbar - 0.5 * (1 + 2 * nbar) * std::cosh(2 * r);
  if (key == "15") return d15;
  if (key == "23" || key == "123") return d23;
  if (key == "1235") return d15 * d23;
  throw std::out_of_range("squeezed_thermal minor untabulated: d_" + key);
}

}  // namespace

bool has_analytic_minor(const StateSpec& spec, std::vector<int> subset) {
  try {
    analytic_minor(spec, std::move(subset));
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

double analytic_minor(const StateSpec& spec, std::vector<int> subset) {
  if (spec.has_modifiers())
    throw std::invalid_argument("analytic_minor: tabulated for base families only");
  const std::string key = subset_key(normalize_subset(std::move(subset)));
  try {
    switch (spec.family) {
      case Family::fock:
        return fock_minor(spec.n, key);
      case Family::squeezed:
        return squeezed_minor(spec.r, key);
      case Family::cat_odd: {
        // The tabulated N_+/N_- ratios are ratios of the squared
        // normalization constants 2(1 +- e^{-2|beta|^2}).
        const double ratio = std::pow(cat_normalization(true, spec.beta) /
                                          cat_normalization(false, spec.beta),
                                      2);
        return cat_minor({std::norm(spec.beta), ratio}, key);
      }
      case Family::cat_even: {
        const double ratio = std::pow(cat_normalization(false, spec.beta) /
                                          cat_normalization(true, spec.beta),
                                      2);
        return cat_minor({std::norm(spec.beta), ratio}, key);
      }
      case Family::squeezed_thermal:
        return squeezed_thermal_minor(spec.nbar, spec.r, key);
      default:
        break;
    }
  } catch (const std::out_of_range&) {
    throw std::invalid_argument("analytic_minor: untabulated subset d_" + key +
                                " for family " + family_name(spec.family));
  }
  throw std::invalid_argument("analytic_minor: no tabulated forms for family " +
                              family_name(spec.family));
}

bool gaussian_nonclassical(double nbar, double r) {
  if (nbar < 0 || r < 0)
    throw std::invalid_argument("gaussian_nonclassical: parameters must be >= 0");
  return (nbar + 0.5) * std::exp(-2 * r) < 0.5;
}

double displacement_delta_d15(const StateSpec& spec, cd alpha) {
  const double a2 = std::norm(alpha);
  const double theta = std::arg(alpha);
  switch (spec.family) {
    case Family::fock:
      return 2.0 * spec.n * a2;
    case Family::squeezed: {
      // <a^2> = -e^{i phi} sinh r cosh r, so the displacement shift
      // 2|alpha|^2 <n> + 2 Re(alpha^2 <a^dag^2>) carries -cos(2theta - phi).
      const double sh = std::sinh(spec.r), ch = std::cosh(spec.r);
      return 2.0 * sh * a2 * (sh - ch * std::cos(2 * theta - spec.phi_squeeze));
    }
    case Family::cat_odd:
    case Family::cat_even: {
      // ratio = <n>/|beta|^2, the squared normalization-constant ratio.
      const bool even = spec.family == Family::cat_even;
      const double ratio = std::pow(cat_normalization(!even, spec.beta) /
                                        cat_normalization(even, spec.beta),
                                    2);
      const double tb = std::arg(spec.beta);
      return 2.0 * a2 * std::norm(spec.beta) *
             (ratio + std::cos(2 * theta - 2 * tb));
    }
    default:
      throw std::invalid_argument("displacement_delta_d15: unsupported family " +
                                  family_name(spec.family));
  }
}

std::string minor_result_csv_row(const MinorResult& r, const std::string& family,
                                 const std::string& params) {
  char value[32];
  std::snprintf(value, sizeof(value), "%.12e", r.value);
  std::string subset = "d";
  for (int i : r.subset) subset += std::to_string(i);
  return family + "," + params + "," + subset + "," + value + "," +
         (r.nonclassical_detected ? "nonclassical_detected" : "not_detected") +
         "," + r.provenance;
}

D1235Forms d1235_decompositions(const MomentMatrix& m) {
  if (m.size < 5)
    throw std::invalid_argument("d1235_decompositions: need N >= 5");
  if (std::abs(m.entry(1, 2)) > 1e-10)
    throw std::invalid_argument("d1235_decompositions: state is not centered");

  const cd n_mean = m.entry(2, 2);        // <a^dag a>
  const cd a2 = m.entry(1, 4);            // <a^2>
  const cd ad2 = std::conj(a2);           // <a^dag^2>
  const cd ad2_a = m.entry(2, 5);         // <a^dag^2 a>
  const cd ad_a2 = m.entry(3, 5);         // <a^dag a^2>

  D1235Forms f;
  f.direct = principal_minor(m, {1, 2, 3, 5}).value;
  const double d23 = principal_minor(m, {2, 3}).value;
  const double d235 = principal_minor(m, {2, 3, 5}).value;
  const double d15 = principal_minor(m, {1, 5}).value;
  f.cofactor = d235 - std::norm(n_mean) * d23;

  const cd x = 2.0 * n_mean * ad2_a * ad_a2 - ad2 * ad_a2 * ad_a2 -
               a2 * ad2_a * ad2_a;
  if (std::abs(x.imag()) > 1e-9 * (1.0 + std::abs(x.real())))
    throw std::runtime_error("d1235_decompositions: x has imaginary residue");
  f.x = x.real();
  f.product = d23 * d15 - f.x;

  Eigen::Matrix2cd d23_block;
  d23_block << m.entry(2, 2), m.entry(2, 3), m.entry(3, 2), m.entry(3, 3);
  const double scale = std::max(1.0, d23_block.cwiseAbs().maxCoeff());
  if (std::abs(d23_block.determinant()) > 1e-12 * scale * scale) {
    Eigen::Vector2cd b, c;
    b << ad2_a, ad_a2;       // column (<a^dag^2 a>, <a^dag a^2>)^T
    c << ad_a2, ad2_a;       // row (<a^dag a^2>, <a^dag^2 a>)
    const Eigen::Vector2cd y = d23_block.inverse() * b;
    const cd corr = c(0) * y(0) + c(1) * y(1);
    f.block = d23 * (d15 - corr.real());
  }
  return f;
}

}  // namespace nonclass
