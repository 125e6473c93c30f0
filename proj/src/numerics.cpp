#include "openfluct/numerics.hpp"

#include <cmath>
#include <sstream>

#include "openfluct/error.hpp"

namespace openfluct {

double SpectralDecomposition::range() const {
  if (eigenvalues.size() == 0) return 0.0;
  return eigenvalues.maxCoeff() - eigenvalues.minCoeff();
}

ComplexMatrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() *
         eigenvectors.adjoint();
}

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_deviation(const ComplexMatrix& m) {
  return max_abs(m - m.adjoint());
}

double unitarity_deviation(const ComplexMatrix& m) {
  return max_abs(m.adjoint() * m -
                 ComplexMatrix::Identity(m.cols(), m.cols()));
}

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

SpectralDecomposition hermitian_eig(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << "expected a non-empty square matrix, got " << m.rows() << "x"
       << m.cols();
    throw Error(ErrorCode::NotSquare, os.str());
  }
  if (!all_finite(m)) {
    throw Error(ErrorCode::NotHermitian, "matrix has non-finite entries");
  }
  const double dev = hermiticity_deviation(m);
  if (dev > kKernelTol) {
    std::ostringstream os;
    os << "max |m - m^dagger| = " << dev << " exceeds " << kKernelTol;
    throw Error(ErrorCode::NotHermitian, os.str());
  }
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::DomainError, "eigensolver did not converge");
  }
  // Eigen already returns ascending eigenvalues.
  return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix matrix_function(const SpectralDecomposition& d,
                              const std::function<double(double)>& f) {
  RealVector mapped(d.dim());
  for (Eigen::Index i = 0; i < d.dim(); ++i) {
    mapped[i] = f(d.eigenvalues[i]);
    if (!std::isfinite(mapped[i])) {
      std::ostringstream os;
      os << "function is not finite at eigenvalue " << d.eigenvalues[i];
      throw Error(ErrorCode::DomainError, os.str());
    }
  }
  const ComplexMatrix out = d.eigenvectors *
                            mapped.cast<Complex>().asDiagonal() *
                            d.eigenvectors.adjoint();
  return 0.5 * (out + out.adjoint());
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace_ancilla(const ComplexMatrix& m, Eigen::Index d_sys,
                                    Eigen::Index d_anc) {
  const Eigen::Index n = d_sys * d_anc;
  if (d_sys <= 0 || d_anc <= 0 || m.rows() != n || m.cols() != n) {
    std::ostringstream os;
    os << "partial trace of a " << m.rows() << "x" << m.cols()
       << " matrix over d_sys=" << d_sys << ", d_anc=" << d_anc;
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  ComplexMatrix out = ComplexMatrix::Zero(d_sys, d_sys);
  for (Eigen::Index i = 0; i < d_sys; ++i) {
    for (Eigen::Index j = 0; j < d_sys; ++j) {
      Complex acc = 0.0;
      for (Eigen::Index k = 0; k < d_anc; ++k) {
        acc += m(i * d_anc + k, j * d_anc + k);
      }
      out(i, j) = acc;
    }
  }
  return out;
}

ComplexMatrix haar_unitary(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(dim, dim);
  // Explicit loop order keeps the draw sequence independent of Eigen's
  // storage order.
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im) / std::sqrt(2.0);
    }
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
  const ComplexMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const double mag = std::abs(r(j, j));
    const Complex phase = mag > 0.0 ? r(j, j) / mag : Complex(1.0, 0.0);
    q.col(j) *= phase;
  }
  return q;
}

ComplexMatrix random_hermitian(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  const ComplexMatrix h = (g + g.adjoint()) / (2.0 * std::sqrt(double(dim)));
  return 0.5 * (h + h.adjoint());
}

}  // namespace openfluct
