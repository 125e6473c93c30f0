#include "openfluct/channels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "openfluct/error.hpp"

namespace openfluct {

KrausChannel::KrausChannel(std::vector<ComplexMatrix> ops, std::string label)
    : ops_(std::move(ops)), dim_(ops_.front().rows()), label_(std::move(label)) {}

ComplexMatrix KrausChannel::image_of_identity() const {
  ComplexMatrix acc = ComplexMatrix::Zero(dim_, dim_);
  for (const auto& a : ops_) acc += a * a.adjoint();
  return acc;
}

KrausChannel validate_channel(std::vector<ComplexMatrix> ops,
                              std::string label) {
  if (ops.empty()) {
    throw Error(ErrorCode::DimensionMismatch, "empty Kraus operator list");
  }
  const Eigen::Index d = ops.front().rows();
  for (std::size_t l = 0; l < ops.size(); ++l) {
    if (ops[l].rows() != d || ops[l].cols() != d || d == 0) {
      std::ostringstream os;
      os << "Kraus operator " << l << " is " << ops[l].rows() << "x"
         << ops[l].cols() << ", expected " << d << "x" << d;
      throw Error(ErrorCode::DimensionMismatch, os.str());
    }
    if (!all_finite(ops[l])) {
      std::ostringstream os;
      os << "Kraus operator " << l << " has non-finite entries";
      throw Error(ErrorCode::DomainError, os.str());
    }
  }
  ComplexMatrix acc = ComplexMatrix::Zero(d, d);
  for (const auto& a : ops) acc += a.adjoint() * a;
  const double dev = max_abs(acc - ComplexMatrix::Identity(d, d));
  if (dev > kKernelTol) {
    std::ostringstream os;
    os << "max |sum A^dagger A - I| = " << dev;
    throw Error(ErrorCode::NotTracePreserving, os.str());
  }
  return KrausChannel(std::move(ops), std::move(label));
}

UnitalityCheck is_unital(const KrausChannel& c) {
  const double dev =
      max_abs(c.image_of_identity() - ComplexMatrix::Identity(c.dim(), c.dim()));
  return {dev < kKernelTol, dev};
}

ComplexMatrix apply(const KrausChannel& c, const ComplexMatrix& m) {
  if (m.rows() != c.dim() || m.cols() != c.dim()) {
    std::ostringstream os;
    os << "channel acts on dimension " << c.dim() << ", operator is "
       << m.rows() << "x" << m.cols();
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  ComplexMatrix out = ComplexMatrix::Zero(c.dim(), c.dim());
  for (const auto& a : c.kraus_ops()) out += a * m * a.adjoint();
  return out;
}

DensityMatrix apply(const KrausChannel& c, const DensityMatrix& rho) {
  const ComplexMatrix out = apply(c, rho.matrix());
  return DensityMatrix(0.5 * (out + out.adjoint()));
}

ComplexMatrix BackwardChannel::apply(const ComplexMatrix& rho_final) const {
  const Eigen::Index d = dim();
  if (rho_final.rows() != d || rho_final.cols() != d) {
    throw Error(ErrorCode::DimensionMismatch,
                "backward channel applied to an operator of the wrong size");
  }
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (const auto& b : ops) out += b.adjoint() * rho_final * b;
  return out;
}

BackwardChannel backward_of(const KrausChannel& c) {
  return {c.kraus_ops(), is_unital(c).unital};
}

// ---------------------------------------------------------------------------
// Dilation

namespace {

// Orthonormal completion of the columns of `q` (assumed orthonormal) to a
// full basis. Each new column starts from the standard basis vector with the
// largest component outside span(q) and is orthogonalized twice.
ComplexMatrix complete_to_unitary(const ComplexMatrix& q) {
  const Eigen::Index n = q.rows();
  ComplexMatrix basis = q;
  std::vector<bool> used(std::size_t(n), false);
  while (basis.cols() < n) {
    Eigen::Index best = -1;
    double best_norm = -1.0;
    ComplexVector best_vec;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (used[std::size_t(i)]) continue;
      ComplexVector v = ComplexVector::Unit(n, i);
      v -= basis * (basis.adjoint() * v);
      const double nv = v.norm();
      if (nv > best_norm) {
        best_norm = nv;
        best = i;
        best_vec = v;
      }
    }
    used[std::size_t(best)] = true;
    best_vec -= basis * (basis.adjoint() * best_vec);
    best_vec.normalize();
    basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
    basis.col(basis.cols() - 1) = best_vec;
  }
  return basis;
}

}  // namespace

Dilation dilate(const KrausChannel& c) {
  const Eigen::Index d = c.dim();
  const Eigen::Index n = Eigen::Index(c.kraus_ops().size());
  const Eigen::Index big = d * n;

  // Isometry |j> -> sum_l (A_l |j>) (x) |l>.
  ComplexMatrix isometry(big, d);
  for (Eigen::Index l = 0; l < n; ++l) {
    const ComplexMatrix& a = c.kraus_ops()[std::size_t(l)];
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) isometry(i * n + l, j) = a(i, j);
    }
  }
  const ComplexMatrix full = complete_to_unitary(isometry);

  // Columns |j>|0> carry the isometry; the completion fills the rest in order.
  ComplexMatrix u(big, big);
  Eigen::Index next = d;
  for (Eigen::Index col = 0; col < big; ++col) {
    if (col % n == 0) {
      u.col(col) = full.col(col / n);
    } else {
      u.col(col) = full.col(next++);
    }
  }
  return {u, d, n};
}

std::vector<ComplexMatrix> Dilation::recover_kraus() const {
  std::vector<ComplexMatrix> ops;
  ops.reserve(std::size_t(d_anc));
  for (Eigen::Index l = 0; l < d_anc; ++l) {
    ComplexMatrix a(d_sys, d_sys);
    for (Eigen::Index i = 0; i < d_sys; ++i) {
      for (Eigen::Index j = 0; j < d_sys; ++j) {
        a(i, j) = unitary(i * d_anc + l, j * d_anc);
      }
    }
    ops.push_back(std::move(a));
  }
  return ops;
}

ComplexMatrix Dilation::apply(const ComplexMatrix& rho) const {
  ComplexMatrix anc0 = ComplexMatrix::Zero(d_anc, d_anc);
  anc0(0, 0) = 1.0;
  const ComplexMatrix joint = unitary * kron(rho, anc0) * unitary.adjoint();
  return partial_trace_ancilla(joint, d_sys, d_anc);
}

ComplexMatrix Dilation::apply_backward(const ComplexMatrix& rho_final) const {
  const ComplexMatrix joint =
      unitary.adjoint() *
      kron(rho_final, ComplexMatrix::Identity(d_anc, d_anc)) * unitary;
  ComplexMatrix out(d_sys, d_sys);
  for (Eigen::Index i = 0; i < d_sys; ++i) {
    for (Eigen::Index j = 0; j < d_sys; ++j) {
      out(i, j) = joint(i * d_anc, j * d_anc);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Presets

namespace {

double param(const std::vector<double>& params, std::size_t i,
             const std::string& name, const char* what) {
  if (params.size() <= i) {
    std::ostringstream os;
    os << name << " needs parameter " << what;
    throw Error(ErrorCode::ParamOutOfRange, os.str());
  }
  if (!std::isfinite(params[i])) {
    std::ostringstream os;
    os << name << ": " << what << " must be finite";
    throw Error(ErrorCode::ParamOutOfRange, os.str());
  }
  return params[i];
}

double probability(const std::vector<double>& params, std::size_t i,
                   const std::string& name) {
  const double p = param(params, i, name, "p");
  if (p < 0.0 || p > 1.0) {
    std::ostringstream os;
    os << name << ": p = " << p << " is outside [0, 1]";
    throw Error(ErrorCode::ParamOutOfRange, os.str());
  }
  return p;
}

Eigen::Index kraus_count(const std::vector<double>& params,
                         const std::string& name, Eigen::Index dim) {
  const double k = param(params, 0, name, "n_kraus");
  if (k < 1.0 || k != std::floor(k) || k > double(dim * dim)) {
    std::ostringstream os;
    os << name << ": n_kraus = " << k << " must be an integer in [1, "
       << dim * dim << "]";
    throw Error(ErrorCode::ParamOutOfRange, os.str());
  }
  return Eigen::Index(k);
}

ComplexMatrix shift_op(Eigen::Index d, Eigen::Index power) {
  ComplexMatrix x = ComplexMatrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) x((j + power) % d, j) = 1.0;
  return x;
}

ComplexMatrix clock_op(Eigen::Index d, Eigen::Index power) {
  ComplexMatrix z = ComplexMatrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    z(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * double(j * power) / double(d));
  }
  return z;
}

// Every excited level decays to `target` with probability p.
std::vector<ComplexMatrix> damping_ops(Eigen::Index d, double p,
                                       Eigen::Index target, double weight) {
  const double s = std::sqrt(weight);
  std::vector<ComplexMatrix> ops;
  ComplexMatrix keep = ComplexMatrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    keep(k, k) = k == target ? s : s * std::sqrt(1.0 - p);
  }
  ops.push_back(keep);
  if (p > 0.0) {
    for (Eigen::Index k = 0; k < d; ++k) {
      if (k == target) continue;
      ComplexMatrix jump = ComplexMatrix::Zero(d, d);
      jump(target, k) = s * std::sqrt(p);
      ops.push_back(jump);
    }
  }
  return ops;
}

std::vector<ComplexMatrix> stinespring_sample(Eigen::Index d, Eigen::Index n,
                                              std::mt19937_64& rng) {
  const ComplexMatrix u = haar_unitary(d * n, rng);
  return Dilation{u, d, n}.recover_kraus();
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"identity",          "unitary",
          "dephasing",         "depolarizing",
          "amplitude_damping", "thermal_attenuator",
          "random",            "unitary_mixture"};
}

KrausChannel preset(const std::string& name, const std::vector<double>& params,
                    Eigen::Index dim, std::uint64_t seed) {
  if (dim < 1) {
    throw Error(ErrorCode::ParamOutOfRange, "dimension must be positive");
  }
  const Eigen::Index d = dim;
  std::mt19937_64 rng(seed);
  std::vector<ComplexMatrix> ops;
  std::ostringstream label;
  label << name;

  if (name == "identity") {
    ops.push_back(ComplexMatrix::Identity(d, d));
  } else if (name == "unitary") {
    ops.push_back(haar_unitary(d, rng));
    label << "(seed=" << seed << ")";
  } else if (name == "dephasing") {
    const double p = probability(params, 0, name);
    ops.push_back(std::sqrt(1.0 - p + p / double(d)) *
                  ComplexMatrix::Identity(d, d));
    if (p > 0.0) {
      for (Eigen::Index k = 1; k < d; ++k) {
        ops.push_back(std::sqrt(p / double(d)) * clock_op(d, k));
      }
    }
    label << "(p=" << p << ")";
  } else if (name == "depolarizing") {
    const double p = probability(params, 0, name);
    const double d2 = double(d * d);
    ops.push_back(std::sqrt(1.0 - p + p / d2) * ComplexMatrix::Identity(d, d));
    if (p > 0.0) {
      for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = 0; b < d; ++b) {
          if (a == 0 && b == 0) continue;
          ops.push_back(std::sqrt(p / d2) * shift_op(d, a) * clock_op(d, b));
        }
      }
    }
    label << "(p=" << p << ")";
  } else if (name == "amplitude_damping") {
    const double p = probability(params, 0, name);
    ops = damping_ops(d, p, 0, 1.0);
    label << "(p=" << p << ")";
  } else if (name == "thermal_attenuator") {
    const double p = probability(params, 0, name);
    const double nbar = param(params, 1, name, "nbar");
    if (nbar < 0.0) {
      throw Error(ErrorCode::ParamOutOfRange,
                  "thermal_attenuator: nbar must be non-negative");
    }
    const double w_down = (nbar + 1.0) / (2.0 * nbar + 1.0);
    ops = damping_ops(d, p, 0, w_down);
    if (nbar > 0.0) {
      auto up = damping_ops(d, p, d - 1, 1.0 - w_down);
      ops.insert(ops.end(), up.begin(), up.end());
    }
    label << "(p=" << p << ", nbar=" << nbar << ")";
  } else if (name == "random") {
    const Eigen::Index n = kraus_count(params, name, d);
    ops = stinespring_sample(d, n, rng);
    label << "(n_kraus=" << n << ", seed=" << seed << ")";
  } else if (name == "unitary_mixture") {
    const Eigen::Index n = kraus_count(params, name, d);
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> w(static_cast<std::size_t>(n));
    for (auto& x : w) x = expo(rng);
    double total = 0.0;
    for (double x : w) total += x;
    for (Eigen::Index i = 0; i < n; ++i) {
      ops.push_back(std::sqrt(w[std::size_t(i)] / total) * haar_unitary(d, rng));
    }
    label << "(n_kraus=" << n << ", seed=" << seed << ")";
  } else {
    std::ostringstream os;
    os << "'" << name << "' (known:";
    for (const auto& n : preset_names()) os << " " << n;
    os << ")";
    throw Error(ErrorCode::UnknownPreset, os.str());
  }
  return validate_channel(std::move(ops), label.str());
}

}  // namespace openfluct
