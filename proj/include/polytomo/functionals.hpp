#pragma once

#include <stdexcept>
#include <string>

#include "polytomo/channels.hpp"
#include "polytomo/embeddings.hpp"
#include "polytomo/linprog.hpp"

namespace polytomo {

/// Affine function of an embedded state or Choi state: coeffs . x + offset.
struct AffineFunctional {
  VectorR coeffs;
  double offset = 0.0;
  std::string label;

  double evaluate(const VectorR& x) const { return coeffs.dot(x) + offset; }
};

struct ConfidenceInterval {
  double lo = 0.0;
  double hi = 0.0;
  double confidence_level = 0.0;
};

/// The protocol cannot pin down the functional: some direction of the
/// embedding space is unmeasured, so the polyhedron has a recession ray.
class UnboundedRegionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The confidence region is empty (possible at very small per-effect
/// epsilon, when the slacks cannot reconcile conflicting counts).
class EmptyRegionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// phi(rho) = <psi|rho|psi> as an affine form on state embeddings.
AffineFunctional fidelity_to_pure(const VectorC& psi, const BasisSet& basis);

/// phi(rho) = Tr(rho O).
AffineFunctional observable_mean(const HermitianOperator& observable, const BasisSet& basis);

/// phi(rho) = Tr(rho E).
AffineFunctional outcome_probability(const Effect& effect, const BasisSet& basis);

/// chi(C) = Tr(C C_U) / d_in^2, fidelity with respect to the unitary channel
/// with Choi state target (which must be rank one up to scale).
AffineFunctional process_fidelity_to_unitary(const ChoiMatrix& target, const BasisSet& basis_in,
                                             const BasisSet& basis_out);

/// chi(C) = Tr((rho_in^T (x) O_out) C): mean of an output observable for a
/// fixed input state.
AffineFunctional output_observable(const DensityMatrix& rho_in,
                                   const HermitianOperator& observable_out,
                                   const BasisSet& basis_in, const BasisSet& basis_out);

/// Output effect probability for a fixed input state.
AffineFunctional output_probability(const DensityMatrix& rho_in, const Effect& effect_out,
                                    const BasisSet& basis_in, const BasisSet& basis_out);

/// Confidence interval from the min/max LP pair over the region. The bounds
/// are reported for the functional itself (offset added back) and are not
/// clipped to physical ranges; an upper bound above the physical maximum is
/// legitimate output, since the relaxed region exceeds the physical set.
ConfidenceInterval interval(const AffineFunctional& functional, const Polyhedron& poly);

}  // namespace polytomo
