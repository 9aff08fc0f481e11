#ifndef NONCLASS_STATE_LIBRARY_HPP
#define NONCLASS_STATE_LIBRARY_HPP

#include <array>
#include <string>

#include "nonclass/fock_engine.hpp"

namespace nonclass {

enum class Family {
  fock,
  coherent,
  squeezed,
  cat_even,
  cat_odd,
  thermal,
  squeezed_thermal,
  superposition012,
};

std::string family_name(Family f);
Family family_from_name(const std::string& name);

/// Declarative state description.  Modifiers are applied in the order
/// photon_add/photon_subtract, then displacement, then rotation.
struct StateSpec {
  Family family = Family::fock;

  int n = 0;                          // fock
  cd alpha = 0.0;                     // coherent
  double r = 0.0;                     // squeezed / squeezed_thermal
  double phi_squeeze = 0.0;           // squeezing angle
  cd beta = 0.0;                      // cat amplitude
  double nbar = 0.0;                  // thermal mean photon number
  std::array<double, 3> amplitudes{1.0, 0.0, 0.0};  // superposition012 (a,b,c)

  cd displacement = 0.0;
  double rotation = 0.0;
  int photon_add = 0;
  int photon_subtract = 0;

  bool has_modifiers() const {
    return displacement != cd(0.0) || rotation != 0.0 || photon_add > 0 ||
           photon_subtract > 0;
  }
  /// Compact label used in CSV output, e.g. "squeezed(r=0.5)+disp(1,0.5)".
  std::string label() const;
};

StateSpec fock_state(int n);
StateSpec coherent_state(cd alpha);
StateSpec squeezed_state(double r, double phi = 0.0);
StateSpec cat_state(bool even, cd beta);
StateSpec thermal_state(double nbar);
StateSpec squeezed_thermal_state(double nbar, double r, double phi = 0.0);
StateSpec superposition012_state(double a, double b, double c);

StateSpec displaced(StateSpec s, cd alpha);
StateSpec rotated(StateSpec s, double theta);

/// Cat normalization constants N_pm = sqrt(2 (1 pm exp(-2|beta|^2))).
double cat_normalization(bool even, cd beta);

/// a |c_pm> = beta sqrt(N_mp / N_pm) |c_mp>: returns (parity_flipped_even,
/// amplitude factor).  Throws for beta == 0 (the odd cat degenerates).
std::pair<bool, double> apply_annihilation_to_cat(bool even, cd beta);

/// Builds the normalized density operator at the given cutoff.  Internal
/// construction happens on an enlarged working space; the projection deficit
/// is renormalized explicitly and recorded in tail_mass/renormalization.
FockDensityOperator make_state(const StateSpec& spec, int cutoff);

/// Smallest cutoff at which the (n+1)^moment_order-weighted tail of the
/// number distribution drops below tail_tol, plus a safety margin of
/// moment_order levels (ladder operators displace support).
/// tail_tol must lie in (0, 1e-3].
int auto_cutoff(const StateSpec& spec, double tail_tol, int moment_order = 4);

std::string state_spec_to_json(const StateSpec& spec);
StateSpec state_spec_from_json(const std::string& text);

}  // namespace nonclass

#endif  // NONCLASS_STATE_LIBRARY_HPP
