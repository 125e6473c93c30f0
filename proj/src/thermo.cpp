#include "openfluct/thermo.hpp"

#include <algorithm>
#include <cmath>

#include "openfluct/error.hpp"

namespace openfluct {

double FluctuationReport::max_residual() const {
  double worst = 0.0;
  for (const auto& [_, r] : residuals) {
    // NaN must never pass a threshold check.
    if (std::isnan(r)) return r;
    worst = std::max(worst, r);
  }
  return worst;
}

double internal_energy_change(const KrausChannel& c, const ThermalState& init,
                              const Hamiltonian& h_final) {
  if (h_final.dim() != c.dim() || init.dim() != c.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "channel, initial state and final Hamiltonian must share a dimension");
  }
  const DensityMatrix rho_final = openfluct::apply(c, init.state());
  return rho_final.expectation(h_final.matrix()) -
         init.state().expectation(init.hamiltonian().matrix());
}

double excess_energy(double kl, double x, double beta) { return kl / beta + x; }

double entropy_change(double kl, double x, double beta) { return kl + beta * x; }

double von_neumann_change(const KrausChannel& c, const ThermalState& init,
                          const Hamiltonian& h_final) {
  if (h_final.dim() != c.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "final Hamiltonian and channel differ in dimension");
  }
  return von_neumann_entropy(openfluct::apply(c, init.state())) -
         von_neumann_entropy(init.state());
}

namespace {

Evaluation assemble(const Scenario& s) {
  FluctuationReport r;
  r.name = s.name;
  r.beta = s.beta;
  const double beta = s.beta;

  const ThermalState init = gibbs_state(s.h_initial, beta);
  const ThermalState final_eq = gibbs_state(s.h_final, beta);
  const DensityMatrix rho_final = openfluct::apply(s.channel, init.state());

  const EnergyDistribution pf =
      forward_distribution(s.channel, init, s.h_final, s.bin_tol_scale);
  const BackwardChannel back = backward_of(s.channel);
  const EnergyDistribution pb_raw =
      backward_distribution(back, final_eq, s.h_initial, s.bin_tol_scale);
  const EnergyDistribution pb = renormalize_backward(pb_raw);

  r.unital = is_unital(s.channel).unital;
  r.delta_u = internal_energy_change(s.channel, init, s.h_final);
  r.delta_u_moment = pf.first_moment();
  r.delta_f = final_eq.free_energy() - init.free_energy();
  r.gamma = gamma_of(s.channel, final_eq);
  r.x = -std::log(r.gamma) / beta;
  r.kl = kl_divergence(pf, pb);
  r.excess_energy = excess_energy(r.kl, r.x, beta);
  r.delta_s = entropy_change(r.kl, r.x, beta);
  r.delta_s_v = von_neumann_entropy(rho_final) - von_neumann_entropy(init.state());
  r.s_r_final = relative_entropy(rho_final, final_eq);

  // Entropy change from the non-equilibrium entropy of each state; the
  // initial state is thermal, so its entry reduces to S_V(rho_eq).
  const double delta_s_neq = nonequilibrium_entropy(rho_final, final_eq) -
                             nonequilibrium_entropy(init.state(), init);

  auto& res = r.residuals;
  res["forward_norm"] = std::abs(pf.total_mass() - 1.0);
  res["backward_mass_vs_gamma"] = std::abs(pb_raw.total_mass() - r.gamma);
  res["jarzynski_forward"] =
      std::abs(exp_average(pf, -beta, beta * r.delta_f) - r.gamma);
  res["jarzynski_backward"] =
      std::abs(exp_average(pb_raw, beta, -beta * r.delta_f) - 1.0);
  res["crooks_max"] = crooks_residual(pf, pb, beta, r.delta_f, r.x);
  res["energy_decomposition"] = std::abs(r.delta_u - r.kl / beta - r.x - r.delta_f);
  res["entropy_law"] = std::abs(beta * (r.delta_u - r.delta_f) - r.delta_s);
  res["helmholtz"] = std::abs(r.delta_u - delta_s_neq / beta - r.delta_f);
  res["moment_vs_trace"] = std::abs(r.delta_u - r.delta_u_moment);
  res["von_neumann"] =
      std::abs(r.delta_s_v - (r.kl + beta * r.x - r.s_r_final));
  return {std::move(r), pf, pb_raw, pb};
}

}  // namespace

Evaluation evaluate(const Scenario& scenario) {
  try {
    return assemble(scenario);
  } catch (const Error& e) {
    throw Error(e.code(), "scenario '" + scenario.name + "': " + e.detail());
  }
}

FluctuationReport build_report(const Scenario& scenario) {
  return evaluate(scenario).report;
}

}  // namespace openfluct
