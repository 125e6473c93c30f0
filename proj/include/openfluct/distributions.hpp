#pragma once

#include <vector>

#include "openfluct/channels.hpp"
#include "openfluct/states.hpp"

namespace openfluct {

/// Mass thresholds: below kAbsentMass an atom counts as absent, above
/// kPresentMass as present. The gap between them prevents flapping.
inline constexpr double kAbsentMass = 1e-14;
inline constexpr double kPresentMass = 1e-12;
/// Default scale for merging energy gaps into one atom.
inline constexpr double kBinTolScale = 1e-9;

struct Atom {
  double delta_u;
  double mass;
};

/// Finite sum of point masses over energy changes, sorted by delta_u.
/// Adjacent atoms are further apart than bin_tolerance.
class EnergyDistribution {
 public:
  EnergyDistribution(std::vector<Atom> atoms, double bin_tolerance);

  const std::vector<Atom>& atoms() const { return atoms_; }
  double total_mass() const { return total_mass_; }
  double bin_tolerance() const { return bin_tolerance_; }
  /// sum mass * delta_u
  double first_moment() const;
  /// Mass of the atom within bin_tolerance of `delta_u`, or 0.
  double mass_at(double delta_u) const;

 private:
  std::vector<Atom> atoms_;
  double total_mass_;
  double bin_tolerance_;
};

/// Two-point-measurement data in the energy eigenbases.
struct TransitionTable {
  /// probs(n, m) = sum_l |<E'_n|A_l|E_m>|^2
  Eigen::MatrixXd probs;
  /// <E_m|rho_eq|E_m>
  RealVector initial_pops;
  /// gaps(n, m) = E'_n - E_m
  Eigen::MatrixXd gaps;
};

/// 1e-9 * max(1, range of the union of both spectra), times `scale / 1e-9`.
double bin_tolerance_for(const Hamiltonian& h_initial,
                         const Hamiltonian& h_final,
                         double scale = kBinTolScale);

/// sum_l |<E'_n|op_l|E_m>|^2 for an arbitrary operator list.
Eigen::MatrixXd transition_probabilities(const std::vector<ComplexMatrix>& ops,
                                         const Hamiltonian& h_initial,
                                         const Hamiltonian& h_final);

TransitionTable transition_table(const KrausChannel& c,
                                 const ThermalState& init,
                                 const Hamiltonian& h_final);

/// P_F over Delta U = E'_n - E_m; total mass 1.
EnergyDistribution forward_distribution(const KrausChannel& c,
                                        const ThermalState& init,
                                        const Hamiltonian& h_final,
                                        double bin_tol_scale = kBinTolScale);

/// Unnormalized backward distribution, stored on the forward Delta U axis so
/// its atoms line up with the forward ones. Total mass equals gamma.
EnergyDistribution backward_distribution(const BackwardChannel& b,
                                         const ThermalState& final_eq,
                                         const Hamiltonian& h_initial,
                                         double bin_tol_scale = kBinTolScale);

/// gamma = tr[sum_l A_l A_l^dagger rho'_eq] = exp(-beta X).
double gamma_of(const KrausChannel& c, const ThermalState& final_eq);

/// Divides by the total mass. Throws ZeroMass.
EnergyDistribution renormalize_backward(const EnergyDistribution& p);

/// sum_atoms mass * exp(coefficient * delta_u + offset)
double exp_average(const EnergyDistribution& p, double coefficient,
                   double offset);

/// max over atoms of |log(P_F / P_B) - beta (dU - dF - X)|.
/// Throws SupportMismatch when an atom is present on one side only.
double crooks_residual(const EnergyDistribution& pf,
                       const EnergyDistribution& pb, double beta,
                       double delta_f, double x);

/// sum P_F log(P_F / P_B) in nats. Throws SupportMismatch.
double kl_divergence(const EnergyDistribution& pf,
                     const EnergyDistribution& pb);

}  // namespace openfluct
