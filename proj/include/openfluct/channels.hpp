#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "openfluct/numerics.hpp"
#include "openfluct/states.hpp"

namespace openfluct {

/// Trace-preserving map rho -> sum_l A_l rho A_l^dagger on a d-dimensional
/// system. Only constructed through validate_channel / preset.
class KrausChannel {
 public:
  const std::vector<ComplexMatrix>& kraus_ops() const { return ops_; }
  Eigen::Index dim() const { return dim_; }
  const std::string& label() const { return label_; }

  /// sum_l A_l A_l^dagger, the image of the identity.
  ComplexMatrix image_of_identity() const;

 private:
  friend KrausChannel validate_channel(std::vector<ComplexMatrix>, std::string);
  KrausChannel(std::vector<ComplexMatrix> ops, std::string label);

  std::vector<ComplexMatrix> ops_;
  Eigen::Index dim_;
  std::string label_;
};

struct UnitalityCheck {
  bool unital;
  /// max |sum_l A_l A_l^dagger - I|
  double deviation;
};

/// Stinespring unitary on system (x) ancilla with Kraus operators
/// A_l = <l|U|0>. Basis index of |i>|l> is i * d_anc + l.
struct Dilation {
  ComplexMatrix unitary;
  Eigen::Index d_sys;
  Eigen::Index d_anc;

  /// Reads the Kraus operators back off the first ancilla column block.
  std::vector<ComplexMatrix> recover_kraus() const;
  /// tr_anc[U (rho (x) |0><0|) U^dagger]
  ComplexMatrix apply(const ComplexMatrix& rho) const;
  /// <0| U^dagger (rho' (x) I_anc) U |0>, the backward map built from V = U.
  ComplexMatrix apply_backward(const ComplexMatrix& rho_final) const;
};

/// Backward process rho' -> sum_l B_l^dagger rho' B_l. Completely positive,
/// unital, and trace preserving only when the forward channel was unital.
struct BackwardChannel {
  std::vector<ComplexMatrix> ops;
  bool trace_preserving = false;

  Eigen::Index dim() const { return ops.empty() ? 0 : ops.front().rows(); }
  ComplexMatrix apply(const ComplexMatrix& rho_final) const;
};

/// Throws DimensionMismatch for ragged or non-square input and
/// NotTracePreserving when max |sum A^dagger A - I| > 1e-10.
KrausChannel validate_channel(std::vector<ComplexMatrix> ops,
                              std::string label = "kraus");

UnitalityCheck is_unital(const KrausChannel& c);

DensityMatrix apply(const KrausChannel& c, const DensityMatrix& rho);
/// Unchecked action on an arbitrary operator (the map is linear).
ComplexMatrix apply(const KrausChannel& c, const ComplexMatrix& m);

Dilation dilate(const KrausChannel& c);

/// The adjoint channel: B_l = A_l.
BackwardChannel backward_of(const KrausChannel& c);

/// Catalogue: identity, unitary, dephasing(p), depolarizing(p),
/// amplitude_damping(p), thermal_attenuator(p, nbar), random(n_kraus),
/// unitary_mixture(n_kraus). `seed` drives the random presets.
KrausChannel preset(const std::string& name, const std::vector<double>& params,
                    Eigen::Index dim, std::uint64_t seed = 0);

std::vector<std::string> preset_names();

}  // namespace openfluct
