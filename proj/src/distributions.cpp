#include "openfluct/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "openfluct/error.hpp"

namespace openfluct {

EnergyDistribution::EnergyDistribution(std::vector<Atom> atoms,
                                       double bin_tolerance)
    : total_mass_(0.0), bin_tolerance_(bin_tolerance) {
  if (!(bin_tolerance > 0.0)) {
    throw Error(ErrorCode::DomainError, "bin tolerance must be positive");
  }
  for (auto& a : atoms) {
    if (!std::isfinite(a.delta_u) || !std::isfinite(a.mass)) {
      throw Error(ErrorCode::DomainError, "non-finite atom");
    }
    if (a.mass < -kPresentMass) {
      std::ostringstream os;
      os << "negative mass " << a.mass << " at delta_u = " << a.delta_u;
      throw Error(ErrorCode::DomainError, os.str());
    }
    a.mass = std::max(a.mass, 0.0);
  }
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const Atom& l, const Atom& r) { return l.delta_u < r.delta_u; });

  // Chain clustering: a gap joins the current cluster when it lies within
  // the tolerance of the previous member. The cluster sits at the plain mean
  // of its member positions, independent of the masses, so two distributions
  // built over the same gaps get identical supports.
  std::size_t i = 0;
  while (i < atoms.size()) {
    std::size_t j = i + 1;
    while (j < atoms.size() &&
           atoms[j].delta_u - atoms[j - 1].delta_u <= bin_tolerance) {
      ++j;
    }
    double pos = 0.0;
    double mass = 0.0;
    for (std::size_t k = i; k < j; ++k) {
      pos += atoms[k].delta_u;
      mass += atoms[k].mass;
    }
    pos /= double(j - i);
    if (mass > 0.0) atoms_.push_back({pos, mass});
    i = j;
  }
  for (const auto& a : atoms_) total_mass_ += a.mass;
}

double EnergyDistribution::first_moment() const {
  double acc = 0.0;
  for (const auto& a : atoms_) acc += a.mass * a.delta_u;
  return acc;
}

double EnergyDistribution::mass_at(double delta_u) const {
  for (const auto& a : atoms_) {
    if (std::abs(a.delta_u - delta_u) <= bin_tolerance_) return a.mass;
  }
  return 0.0;
}

double bin_tolerance_for(const Hamiltonian& h_initial,
                         const Hamiltonian& h_final, double scale) {
  const double hi = std::max(h_initial.energies().maxCoeff(),
                             h_final.energies().maxCoeff());
  const double lo = std::min(h_initial.energies().minCoeff(),
                             h_final.energies().minCoeff());
  return scale * std::max(1.0, hi - lo);
}

Eigen::MatrixXd transition_probabilities(const std::vector<ComplexMatrix>& ops,
                                         const Hamiltonian& h_initial,
                                         const Hamiltonian& h_final) {
  const Eigen::Index d = h_initial.dim();
  if (h_final.dim() != d) {
    throw Error(ErrorCode::DimensionMismatch,
                "initial and final Hamiltonians differ in dimension");
  }
  const ComplexMatrix& v_init = h_initial.spectrum().eigenvectors;
  const ComplexMatrix& v_final = h_final.spectrum().eigenvectors;
  Eigen::MatrixXd probs = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t l = 0; l < ops.size(); ++l) {
    if (ops[l].rows() != d || ops[l].cols() != d) {
      std::ostringstream os;
      os << "operator " << l << " is " << ops[l].rows() << "x" << ops[l].cols()
         << ", Hamiltonians are " << d << "x" << d;
      throw Error(ErrorCode::DimensionMismatch, os.str());
    }
    const ComplexMatrix elems = v_final.adjoint() * ops[l] * v_init;
    probs += elems.cwiseAbs2();
  }
  return probs;
}

namespace {

void require_dim(Eigen::Index got, Eigen::Index want, const char* what) {
  if (got != want) {
    std::ostringstream os;
    os << what << " has dimension " << got << ", expected " << want;
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
}

Eigen::MatrixXd energy_gaps(const Hamiltonian& h_initial,
                            const Hamiltonian& h_final) {
  const Eigen::Index d = h_initial.dim();
  Eigen::MatrixXd gaps(d, d);
  for (Eigen::Index n = 0; n < d; ++n) {
    for (Eigen::Index m = 0; m < d; ++m) {
      gaps(n, m) = h_final.energies()[n] - h_initial.energies()[m];
    }
  }
  return gaps;
}

}  // namespace

TransitionTable transition_table(const KrausChannel& c,
                                 const ThermalState& init,
                                 const Hamiltonian& h_final) {
  require_dim(init.dim(), c.dim(), "initial thermal state");
  require_dim(h_final.dim(), c.dim(), "final Hamiltonian");
  return {transition_probabilities(c.kraus_ops(), init.hamiltonian(), h_final),
          init.populations(), energy_gaps(init.hamiltonian(), h_final)};
}

EnergyDistribution forward_distribution(const KrausChannel& c,
                                        const ThermalState& init,
                                        const Hamiltonian& h_final,
                                        double bin_tol_scale) {
  const TransitionTable t = transition_table(c, init, h_final);
  const Eigen::Index d = c.dim();
  std::vector<Atom> atoms;
  atoms.reserve(std::size_t(d * d));
  for (Eigen::Index m = 0; m < d; ++m) {
    for (Eigen::Index n = 0; n < d; ++n) {
      atoms.push_back({t.gaps(n, m), t.probs(n, m) * t.initial_pops[m]});
    }
  }
  return EnergyDistribution(
      std::move(atoms),
      bin_tolerance_for(init.hamiltonian(), h_final, bin_tol_scale));
}

EnergyDistribution backward_distribution(const BackwardChannel& b,
                                         const ThermalState& final_eq,
                                         const Hamiltonian& h_initial,
                                         double bin_tol_scale) {
  require_dim(b.dim(), final_eq.dim(), "backward channel");
  require_dim(h_initial.dim(), final_eq.dim(), "initial Hamiltonian");
  // |<E'_n|B_l|E_m>|^2 weighted by the final-state population of n; the
  // atom is filed under E'_n - E_m.
  const Eigen::MatrixXd probs =
      transition_probabilities(b.ops, h_initial, final_eq.hamiltonian());
  const Eigen::MatrixXd gaps = energy_gaps(h_initial, final_eq.hamiltonian());
  const RealVector& final_pops = final_eq.populations();
  const Eigen::Index d = final_eq.dim();
  std::vector<Atom> atoms;
  atoms.reserve(std::size_t(d * d));
  for (Eigen::Index m = 0; m < d; ++m) {
    for (Eigen::Index n = 0; n < d; ++n) {
      atoms.push_back({gaps(n, m), probs(n, m) * final_pops[n]});
    }
  }
  return EnergyDistribution(
      std::move(atoms),
      bin_tolerance_for(h_initial, final_eq.hamiltonian(), bin_tol_scale));
}

double gamma_of(const KrausChannel& c, const ThermalState& final_eq) {
  require_dim(final_eq.dim(), c.dim(), "final thermal state");
  return final_eq.state().expectation(c.image_of_identity());
}

EnergyDistribution renormalize_backward(const EnergyDistribution& p) {
  if (!(p.total_mass() > 0.0)) {
    throw Error(ErrorCode::ZeroMass, "cannot renormalize a zero-mass distribution");
  }
  std::vector<Atom> atoms = p.atoms();
  for (auto& a : atoms) a.mass /= p.total_mass();
  return EnergyDistribution(std::move(atoms), p.bin_tolerance());
}

double exp_average(const EnergyDistribution& p, double coefficient,
                   double offset) {
  double acc = 0.0;
  for (const auto& a : p.atoms()) {
    acc += a.mass * std::exp(coefficient * a.delta_u + offset);
  }
  return acc;
}

namespace {

struct AlignedAtom {
  double delta_u;
  double forward;
  double backward;
};

// Merge-join on delta_u; an atom missing on one side gets mass 0 there.
std::vector<AlignedAtom> align(const EnergyDistribution& pf,
                               const EnergyDistribution& pb) {
  const double tol = std::max(pf.bin_tolerance(), pb.bin_tolerance());
  const auto& fa = pf.atoms();
  const auto& ba = pb.atoms();
  std::vector<AlignedAtom> out;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < fa.size() || j < ba.size()) {
    if (j == ba.size() || (i < fa.size() && fa[i].delta_u < ba[j].delta_u - tol)) {
      out.push_back({fa[i].delta_u, fa[i].mass, 0.0});
      ++i;
    } else if (i == fa.size() || ba[j].delta_u < fa[i].delta_u - tol) {
      out.push_back({ba[j].delta_u, 0.0, ba[j].mass});
      ++j;
    } else {
      out.push_back({fa[i].delta_u, fa[i].mass, ba[j].mass});
      ++i;
      ++j;
    }
  }
  return out;
}

[[noreturn]] void support_mismatch(const AlignedAtom& a) {
  std::ostringstream os;
  os.precision(17);
  os << "at delta_u = " << a.delta_u << ": forward mass " << a.forward
     << ", backward mass " << a.backward;
  throw Error(ErrorCode::SupportMismatch, os.str());
}

}  // namespace

double crooks_residual(const EnergyDistribution& pf,
                       const EnergyDistribution& pb, double beta,
                       double delta_f, double x) {
  double worst = 0.0;
  for (const auto& a : align(pf, pb)) {
    const double lo = std::min(a.forward, a.backward);
    const double hi = std::max(a.forward, a.backward);
    if (hi < kAbsentMass) continue;
    if (lo < kAbsentMass) {
      if (hi > kPresentMass) support_mismatch(a);
      continue;
    }
    const double lhs = std::log(a.forward / a.backward);
    const double rhs = beta * (a.delta_u - delta_f - x);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

double kl_divergence(const EnergyDistribution& pf,
                     const EnergyDistribution& pb) {
  double acc = 0.0;
  for (const auto& a : align(pf, pb)) {
    if (a.forward <= kAbsentMass) continue;
    if (a.backward < kAbsentMass) {
      if (a.forward > kPresentMass) support_mismatch(a);
      continue;
    }
    acc += a.forward * std::log(a.forward / a.backward);
  }
  return acc;
}

}  // namespace openfluct
