#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <random>

#include <Eigen/Dense>

namespace openfluct {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Kernel tolerance for Hermiticity, unitarity and trace preservation.
inline constexpr double kKernelTol = 1e-10;

/// Eigen-pairs of a Hermitian matrix, eigenvalues ascending, eigenvectors
/// stored column-wise in a unitary matrix.
struct SpectralDecomposition {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;

  Eigen::Index dim() const { return eigenvalues.size(); }
  /// max - min eigenvalue (0 for a 1x1 matrix)
  double range() const;
  ComplexMatrix reconstruct() const;
};

double max_abs(const ComplexMatrix& m);
/// max |m - m^dagger|
double hermiticity_deviation(const ComplexMatrix& m);
/// max |m^dagger m - I|
double unitarity_deviation(const ComplexMatrix& m);
bool all_finite(const ComplexMatrix& m);

/// Throws NotSquare / NotHermitian. The input is symmetrized before solving.
SpectralDecomposition hermitian_eig(const ComplexMatrix& m);

/// V diag(f(lambda)) V^dagger. Throws DomainError when f yields a
/// non-finite value on some eigenvalue.
ComplexMatrix matrix_function(const SpectralDecomposition& d,
                              const std::function<double(double)>& f);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Trace over the second (ancilla) factor of a system (x) ancilla operator.
ComplexMatrix partial_trace_ancilla(const ComplexMatrix& m, Eigen::Index d_sys,
                                    Eigen::Index d_anc);

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of R's diagonal absorbed into Q.
ComplexMatrix haar_unitary(Eigen::Index dim, std::mt19937_64& rng);

/// Hermitian matrix with i.i.d. complex Gaussian entries (GUE-like), scaled
/// by 1/sqrt(dim) so the spectrum stays O(1).
ComplexMatrix random_hermitian(Eigen::Index dim, std::mt19937_64& rng);

}  // namespace openfluct
