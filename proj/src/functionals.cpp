#include "polytomo/functionals.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace polytomo {

AffineFunctional fidelity_to_pure(const VectorC& psi, const BasisSet& basis) {
  if (std::abs(psi.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("fidelity_to_pure: state vector is not normalized");
  if (psi.size() != basis.dim())
    throw std::invalid_argument("fidelity_to_pure: dimension mismatch");
  auto [coeffs, offset] = operator_coefficients(psi * psi.adjoint(), basis);
  return AffineFunctional{std::move(coeffs), offset, "fidelity_to_pure"};
}

AffineFunctional observable_mean(const HermitianOperator& observable, const BasisSet& basis) {
  auto [coeffs, offset] = operator_coefficients(observable.matrix(), basis);
  return AffineFunctional{std::move(coeffs), offset, "observable_mean"};
}

AffineFunctional outcome_probability(const Effect& effect, const BasisSet& basis) {
  auto [coeffs, offset] = operator_coefficients(effect.matrix(), basis);
  return AffineFunctional{std::move(coeffs), offset, "outcome_probability"};
}

AffineFunctional process_fidelity_to_unitary(const ChoiMatrix& target, const BasisSet& basis_in,
                                             const BasisSet& basis_out) {
  // A unitary (isometry) Choi state is a rank-one projector scaled by d_in.
  const VectorR eigs = target.op().eigenvalues();
  if (eigs.size() > 1 && eigs(eigs.size() - 2) > 1e-8 * static_cast<double>(target.dim_in()))
    throw std::invalid_argument(
        "process_fidelity_to_unitary: target Choi state is not rank one");

  // Expanding both Choi states in the product basis and using the fixed
  // trace-preservation row gives
  //   Tr(C C_U) / d_in^2 = (1 + c(C) . c(C_U)) / (d_in d_out).
  const ChoiEmbedding target_embedding = embed_choi(target, basis_in, basis_out);
  const double scale =
      1.0 / (static_cast<double>(target.dim_in()) * static_cast<double>(target.dim_out()));
  return AffineFunctional{scale * target_embedding.stacked(), scale,
                          "process_fidelity_to_unitary"};
}

AffineFunctional output_observable(const DensityMatrix& rho_in,
                                   const HermitianOperator& observable_out,
                                   const BasisSet& basis_in, const BasisSet& basis_out) {
  if (rho_in.dim() != basis_in.dim() || observable_out.dim() != basis_out.dim())
    throw std::invalid_argument("output_observable: dimension mismatch");
  // Tr((rho_in^T (x) O) C) = omega . r_out(Phi[rho_in]) + omega_0 with
  // omega the effect-style coefficients of O; substituting the channel
  // action keeps the ChoiEmbedding layout of the normals.
  auto [omega, omega0] = operator_coefficients(observable_out.matrix(), basis_out);
  const VectorR rbar = embed_input_state(rho_in, basis_in);
  return AffineFunctional{kron(omega, rbar), omega0, "output_observable"};
}

AffineFunctional output_probability(const DensityMatrix& rho_in, const Effect& effect_out,
                                    const BasisSet& basis_in, const BasisSet& basis_out) {
  AffineFunctional f = output_observable(rho_in, effect_out.op(), basis_in, basis_out);
  f.label = "output_probability";
  return f;
}

ConfidenceInterval interval(const AffineFunctional& functional, const Polyhedron& poly) {
  if (functional.coeffs.size() != poly.ambient_dim)
    throw std::invalid_argument("interval: functional does not match the polyhedron dimension");

  const auto run = [&](LpSense sense) {
    const LpSolution sol = solve(LpProblem{functional.coeffs, poly, sense});
    if (sol.status == LpStatus::Unbounded) {
      std::ostringstream os;
      os << "interval: confidence region is unbounded along '" << functional.label
         << "'; the protocol is informationally incomplete (constraint rank "
         << constraint_rank(poly) << " < ambient dimension " << poly.ambient_dim << ")";
      throw UnboundedRegionError(os.str());
    }
    if (sol.status == LpStatus::Infeasible)
      throw EmptyRegionError(
          "interval: confidence region is empty; the per-effect bounds are inconsistent at "
          "this epsilon allocation");
    return sol.value;
  };

  const double lo = functional.offset + run(LpSense::Min);
  const double hi = functional.offset + run(LpSense::Max);
  return ConfidenceInterval{lo, hi, poly.confidence_level};
}

}  // namespace polytomo
