#pragma once

#include <map>
#include <string>

#include "openfluct/channels.hpp"
#include "openfluct/distributions.hpp"
#include "openfluct/states.hpp"

namespace openfluct {

/// Default threshold applied to every identity residual.
inline constexpr double kIdentityTol = 1e-8;

/// A fully resolved process: start in the Gibbs state of h_initial at beta,
/// apply `channel`, end with Hamiltonian h_final.
struct Scenario {
  std::string name;
  double beta;
  Hamiltonian h_initial;
  Hamiltonian h_final;
  KrausChannel channel;
  double identity_tol = kIdentityTol;
  double bin_tol_scale = kBinTolScale;
};

struct FluctuationReport {
  std::string name;
  double beta = 0.0;
  double delta_u = 0.0;
  double delta_u_moment = 0.0;
  double delta_f = 0.0;
  double gamma = 1.0;
  double x = 0.0;
  double kl = 0.0;
  double excess_energy = 0.0;
  double delta_s = 0.0;
  double delta_s_v = 0.0;
  double s_r_final = 0.0;
  bool unital = false;
  /// Identity-check magnitudes keyed by name; iteration order is alphabetical.
  std::map<std::string, double> residuals;

  double max_residual() const;
  bool passed(double threshold) const { return max_residual() < threshold; }
};

/// tr(H' Lambda(rho_eq)) - tr(H rho_eq)
double internal_energy_change(const KrausChannel& c, const ThermalState& init,
                              const Hamiltonian& h_final);

/// beta^-1 K + X, the part of Delta U not accounted for by Delta F.
double excess_energy(double kl, double x, double beta);

/// K + beta X
double entropy_change(double kl, double x, double beta);

/// S_V(rho') - S_V(rho_eq), computed directly from the two states.
double von_neumann_change(const KrausChannel& c, const ThermalState& init,
                          const Hamiltonian& h_final);

/// Report plus the distributions it was computed from.
struct Evaluation {
  FluctuationReport report;
  EnergyDistribution forward;
  /// Unnormalized backward distribution (total mass gamma).
  EnergyDistribution backward_raw;
  /// backward_raw / gamma
  EnergyDistribution backward;
};

/// Builds the distributions and evaluates every quantity and residual.
/// Module errors are rethrown with the scenario name prepended.
Evaluation evaluate(const Scenario& scenario);

FluctuationReport build_report(const Scenario& scenario);

}  // namespace openfluct
