#pragma once

#include "openfluct/numerics.hpp"

namespace openfluct {

/// Eigenvalue threshold separating genuine rank deficiency from round-off.
inline constexpr double kClampTol = 1e-12;

/// Hermitian operator with its spectrum cached at construction.
class Hamiltonian {
 public:
  explicit Hamiltonian(const ComplexMatrix& matrix);
  static Hamiltonian diagonal(const std::vector<double>& energies);
  /// Adopts a caller-chosen eigenbasis, e.g. a different orthonormal basis
  /// inside a degenerate eigenspace. The decomposition must be unitary and
  /// ascending; the matrix is rebuilt from it.
  static Hamiltonian from_spectrum(SpectralDecomposition spectrum);

  const ComplexMatrix& matrix() const { return matrix_; }
  const SpectralDecomposition& spectrum() const { return spectrum_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  const RealVector& energies() const { return spectrum_.eigenvalues; }

 private:
  Hamiltonian(ComplexMatrix matrix, SpectralDecomposition spectrum)
      : matrix_(std::move(matrix)), spectrum_(std::move(spectrum)) {}

  ComplexMatrix matrix_;
  SpectralDecomposition spectrum_;
};

/// Unit-trace positive semidefinite operator.
class DensityMatrix {
 public:
  /// Validates Hermiticity, trace and positivity (eigenvalues >= -1e-10).
  explicit DensityMatrix(const ComplexMatrix& matrix);

  static DensityMatrix pure(const ComplexVector& psi);
  static DensityMatrix maximally_mixed(Eigen::Index dim);

  const ComplexMatrix& matrix() const { return matrix_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  /// tr(rho * op)
  double expectation(const ComplexMatrix& op) const;

 private:
  ComplexMatrix matrix_;
};

/// Gibbs state e^{-beta H} / Z together with Z and F = -log(Z) / beta.
///
/// The log-partition function is kept in shifted form, log Z =
/// -beta * E_min + log(sum exp(-beta (E_m - E_min))), so that entropies and
/// free energies stay accurate when Boltzmann weights underflow.
class ThermalState {
 public:
  /// Throws InvalidBeta unless beta is positive and finite.
  ThermalState(Hamiltonian hamiltonian, double beta);

  const Hamiltonian& hamiltonian() const { return hamiltonian_; }
  double beta() const { return beta_; }
  const DensityMatrix& state() const { return state_; }
  /// Boltzmann populations, ordered like the Hamiltonian's eigenvalues.
  const RealVector& populations() const { return populations_; }
  double log_partition_function() const { return log_z_; }
  double partition_function() const;
  double free_energy() const { return -log_z_ / beta_; }
  /// log rho_eq built from the spectrum of H rather than from rho_eq.
  ComplexMatrix log_state() const;
  Eigen::Index dim() const { return hamiltonian_.dim(); }

 private:
  Hamiltonian hamiltonian_;
  double beta_;
  double log_z_;
  RealVector populations_;
  DensityMatrix state_;
};

/// Throws InvalidBeta unless beta is positive and finite.
ThermalState gibbs_state(const Hamiltonian& h, double beta);

/// -tr(rho log rho) in nats, with 0 log 0 = 0.
double von_neumann_entropy(const DensityMatrix& rho);

/// S(rho || sigma) = tr(rho log rho) - tr(rho log sigma). Throws
/// SupportViolation when rho has weight outside the support of sigma.
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

/// S(rho || rho_eq) for a thermal reference; always finite for finite beta.
double relative_entropy(const DensityMatrix& rho, const ThermalState& reference);

/// -tr(rho log rho_eq) = S(rho || rho_eq) + S_V(rho).
double nonequilibrium_entropy(const DensityMatrix& rho,
                              const ThermalState& reference);

}  // namespace openfluct
