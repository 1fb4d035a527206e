#pragma once

#include "polytomo/operators.hpp"

namespace polytomo {

// Real-vector pictures of states, effects and Choi states with respect to a
// BasisSet {sigma_i}. With Tr(sigma_i sigma_j) = d delta_ij the Born rule
// becomes the affine form Tr(rho E) = r(rho) . eta(E) + eta0(E), and the
// action of a channel becomes a matrix-vector product on the embeddings.

/// r_i = Tr(sigma_i rho), i = 1..d^2-1.
VectorR embed_state(const DensityMatrix& rho, const BasisSet& basis);

struct EffectEmbedding {
  VectorR eta;  // eta_i = Tr(sigma_i E) / d
  double eta0;  // Tr(E) / d
};

EffectEmbedding embed_effect(const Effect& e, const BasisSet& basis);

/// rbar_i = Tr(sigma_i rho^T), i = 0..d^2-1; rbar_0 = Tr(rho^T) = 1.
VectorR embed_input_state(const DensityMatrix& rho_in, const BasisSet& basis);

/// Matrix picture of a Choi state: coeffs(i-1, j) = Tr(C sigma^in_j (x)
/// sigma^out_i) / d_in for output index i = 1..d_out^2-1 and input index
/// j = 0..d_in^2-1. Row i = 0 is omitted: trace preservation pins it to
/// Tr(C sigma^in_j (x) 1_out) = d_in delta_j0. The flattening `stacked` is
/// row-major (output index major, input index minor); every vector living in
/// the Choi embedding space (constraint normals, functional coefficients)
/// uses this same layout.
struct ChoiEmbedding {
  MatrixR coeffs;  // (d_out^2 - 1) x d_in^2
  VectorR stacked() const;
};

ChoiEmbedding embed_choi(const ChoiMatrix& choi, const BasisSet& basis_in,
                         const BasisSet& basis_out);

/// Inverse of embed_state: (1 + sum_i r_i sigma_i) / d. Unit trace and
/// hermiticity hold by construction; positivity is not enforced, so the
/// result may fail DensityMatrix validation. Diagnostic/oracle use.
HermitianOperator unembed_state(const VectorR& r, const BasisSet& basis);

/// Inverse of embed_choi; trace preservation holds by construction,
/// positivity is the caller's check.
HermitianOperator unembed_choi(const MatrixR& coeffs, const BasisSet& basis_in,
                               const BasisSet& basis_out);

/// Coefficients of an arbitrary Hermitian operator in the effect convention:
/// first = Tr(sigma_i H) / d for i >= 1, second = Tr(H) / d.
std::pair<VectorR, double> operator_coefficients(const MatrixC& h, const BasisSet& basis);

}  // namespace polytomo
