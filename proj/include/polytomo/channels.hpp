#pragma once

#include <functional>
#include <vector>

#include "polytomo/operators.hpp"

namespace polytomo {

/// A channel as an action on matrices (must be linear, completely positive
/// and trace preserving; violations are caught by the ChoiMatrix invariants).
using ChannelMap = std::function<MatrixC(const MatrixC&)>;

/// Choi state C = sum_ij |i><j| (x) Phi(|i><j|), input factor first.
ChoiMatrix choi_of_channel(const ChannelMap& phi, Index d_in, Index d_out);

/// Choi state of the channel rho -> sum_k K_k rho K_k^dagger.
ChoiMatrix choi_of_kraus(const std::vector<MatrixC>& kraus);

/// Choi state of the unitary conjugation rho -> u rho u^dagger.
ChoiMatrix choi_of_unitary(const MatrixC& u);

/// Channel action recovered from the Choi state,
/// Phi[rho] = Tr_in((rho^T (x) 1_out) C).
DensityMatrix apply_choi(const ChoiMatrix& choi, const DensityMatrix& rho_in);

}  // namespace polytomo
