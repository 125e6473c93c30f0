#include "openfluct/states.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "openfluct/error.hpp"

namespace openfluct {
namespace {

void require_same_dim(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": dimensions " << a << " and " << b << " differ";
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
}

// sum p log p over clamped eigenvalues
double neg_entropy_of(const RealVector& eigenvalues) {
  double acc = 0.0;
  for (double p : eigenvalues) {
    p = std::clamp(p, 0.0, 1.0);
    if (p > kClampTol) acc += p * std::log(p);
  }
  return acc;
}

}  // namespace

Hamiltonian::Hamiltonian(const ComplexMatrix& matrix)
    : matrix_(matrix), spectrum_(hermitian_eig(matrix)) {
  matrix_ = 0.5 * (matrix_ + matrix_.adjoint()).eval();
}

Hamiltonian Hamiltonian::diagonal(const std::vector<double>& energies) {
  RealVector e = Eigen::Map<const RealVector>(energies.data(),
                                              Eigen::Index(energies.size()));
  return Hamiltonian(e.cast<Complex>().asDiagonal().toDenseMatrix());
}

Hamiltonian Hamiltonian::from_spectrum(SpectralDecomposition spectrum) {
  const auto& e = spectrum.eigenvalues;
  if (spectrum.eigenvectors.rows() != e.size() ||
      spectrum.eigenvectors.cols() != e.size() || e.size() == 0) {
    throw Error(ErrorCode::DimensionMismatch,
                "eigenvector matrix does not match the eigenvalue count");
  }
  for (Eigen::Index i = 1; i < e.size(); ++i) {
    if (e[i] < e[i - 1]) {
      throw Error(ErrorCode::DomainError, "eigenvalues must be ascending");
    }
  }
  const double dev = unitarity_deviation(spectrum.eigenvectors);
  if (dev > kKernelTol) {
    std::ostringstream os;
    os << "eigenvector matrix is not unitary (deviation " << dev << ")";
    throw Error(ErrorCode::DomainError, os.str());
  }
  ComplexMatrix m = spectrum.reconstruct();
  m = 0.5 * (m + m.adjoint()).eval();
  return Hamiltonian(std::move(m), std::move(spectrum));
}

DensityMatrix::DensityMatrix(const ComplexMatrix& matrix) : matrix_(matrix) {
  const auto spectrum = hermitian_eig(matrix);
  const Complex tr = matrix.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > kKernelTol) {
    std::ostringstream os;
    os << "trace " << tr.real() << "+" << tr.imag() << "i is not 1";
    throw Error(ErrorCode::InvalidState, os.str());
  }
  if (spectrum.eigenvalues.minCoeff() < -kKernelTol) {
    std::ostringstream os;
    os << "negative eigenvalue " << spectrum.eigenvalues.minCoeff();
    throw Error(ErrorCode::InvalidState, os.str());
  }
  matrix_ = 0.5 * (matrix_ + matrix_.adjoint()).eval();
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
  const ComplexVector v = psi / psi.norm();
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index dim) {
  return DensityMatrix(ComplexMatrix::Identity(dim, dim) / double(dim));
}

double DensityMatrix::expectation(const ComplexMatrix& op) const {
  require_same_dim(dim(), op.rows(), "expectation value");
  return (matrix_ * op).trace().real();
}

namespace {

double checked_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    std::ostringstream os;
    os << "inverse temperature must be positive and finite, got " << beta;
    throw Error(ErrorCode::InvalidBeta, os.str());
  }
  return beta;
}

// Weights e^{-beta (E - E_min)}, all in (0, 1].
RealVector shifted_weights(const RealVector& energies, double beta) {
  const double e_min = energies.minCoeff();
  RealVector w(energies.size());
  for (Eigen::Index i = 0; i < energies.size(); ++i) {
    w[i] = std::exp(-beta * (energies[i] - e_min));
  }
  return w;
}

double log_partition(const RealVector& energies, double beta) {
  return -beta * energies.minCoeff() +
         std::log(shifted_weights(energies, beta).sum());
}

RealVector boltzmann(const RealVector& energies, double beta) {
  const RealVector w = shifted_weights(energies, beta);
  return w / w.sum();
}

DensityMatrix gibbs_matrix(const SpectralDecomposition& s,
                           const RealVector& pops) {
  const ComplexMatrix rho =
      s.eigenvectors * pops.cast<Complex>().asDiagonal() *
      s.eigenvectors.adjoint();
  return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

}  // namespace

ThermalState::ThermalState(Hamiltonian hamiltonian, double beta)
    : hamiltonian_(std::move(hamiltonian)),
      beta_(checked_beta(beta)),
      log_z_(log_partition(hamiltonian_.energies(), beta_)),
      populations_(boltzmann(hamiltonian_.energies(), beta_)),
      state_(gibbs_matrix(hamiltonian_.spectrum(), populations_)) {}

double ThermalState::partition_function() const { return std::exp(log_z_); }

ComplexMatrix ThermalState::log_state() const {
  const double b = beta_;
  const double lz = log_z_;
  return matrix_function(hamiltonian_.spectrum(),
                         [b, lz](double e) { return -b * e - lz; });
}

ThermalState gibbs_state(const Hamiltonian& h, double beta) {
  return ThermalState(h, beta);
}

double von_neumann_entropy(const DensityMatrix& rho) {
  return -neg_entropy_of(hermitian_eig(rho.matrix()).eigenvalues);
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho.dim(), sigma.dim(), "relative entropy");
  const auto sig = hermitian_eig(sigma.matrix());
  // rho expressed in sigma's eigenbasis; only its diagonal enters tr(rho log sigma).
  const ComplexMatrix rho_in_sigma =
      sig.eigenvectors.adjoint() * rho.matrix() * sig.eigenvectors;
  double cross = 0.0;
  for (Eigen::Index k = 0; k < sig.dim(); ++k) {
    const double weight = rho_in_sigma(k, k).real();
    const double lambda = sig.eigenvalues[k];
    if (lambda <= kClampTol) {
      if (weight > kClampTol) {
        std::ostringstream os;
        os << "rho has weight " << weight
           << " on an eigenvector of sigma with eigenvalue " << lambda;
        throw Error(ErrorCode::SupportViolation, os.str());
      }
      continue;
    }
    cross += weight * std::log(lambda);
  }
  const double neg_s = neg_entropy_of(hermitian_eig(rho.matrix()).eigenvalues);
  return neg_s - cross;
}

double relative_entropy(const DensityMatrix& rho,
                        const ThermalState& reference) {
  return nonequilibrium_entropy(rho, reference) - von_neumann_entropy(rho);
}

double nonequilibrium_entropy(const DensityMatrix& rho,
                              const ThermalState& reference) {
  require_same_dim(rho.dim(), reference.dim(), "non-equilibrium entropy");
  return -rho.expectation(reference.log_state());
}

}  // namespace openfluct
