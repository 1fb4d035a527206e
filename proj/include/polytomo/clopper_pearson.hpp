#pragma once

#include <cstdint>
#include <vector>

#include "polytomo/embeddings.hpp"
#include "polytomo/halfspace.hpp"

namespace polytomo {

/// Binary relative entropy D(x||y) = x ln(x/y) + (1-x) ln((1-x)/(1-y)),
/// with the conventions 0 ln(0/y) = 0 and D = +inf where a ratio degenerates.
double binary_kl(double x, double y);

/// Clopper-Pearson slack for an observed count: the positive root delta of
///   D(n/N || n/N + delta) = -ln(epsilon) / N.
/// For n = N no positive root exists and the associated frequency bound
/// n/N + delta <= 1 holds trivially; that case is carried as `vacuous`.
struct DeltaBound {
  std::int64_t n = 0;
  std::int64_t shots = 0;
  double epsilon = 0.0;
  double delta = 0.0;  // meaningful only when !vacuous
  bool vacuous = false;

  /// n/N + delta, the upper frequency bound (1 when vacuous).
  double frequency_bound() const;
};

/// Bisection on delta in (0, 1 - n/N]; the divergence is strictly increasing
/// there, so convergence is unconditional. Natural logarithm throughout.
DeltaBound solve_delta(std::int64_t n, std::int64_t shots, double epsilon);

/// Half-space analog of the per-effect bound in the embedding space:
///   r . eta(E) <= n/N + delta_N(n, epsilon) - eta0(E).
HalfSpace effect_halfspace(std::int64_t n, std::int64_t shots, const EffectEmbedding& effect,
                           double epsilon, Provenance origin = {});

/// Error-budget allocations mirroring the protocol structure:
/// [povm][effect] for state tomography, [input][povm][effect] for process
/// tomography. Every entry must lie in (0, 1) and every per-POVM sum must
/// stay below 1.
using QstEpsilons = std::vector<std::vector<double>>;
using QptEpsilons = std::vector<QstEpsilons>;

/// Confidence level for a multi-POVM region, the per-POVM product form
///   CL = prod_i (1 - sum_j eps_ij).
double confidence_level_qst(const QstEpsilons& alloc);

/// The looser single-sum value 1 - sum_ij eps_ij kept for comparison; the
/// product form always dominates it (strictly, once two POVMs contribute).
double confidence_level_qst_legacy(const QstEpsilons& alloc);

/// Process-tomography confidence level, the double product over inputs and
/// POVMs: CL = prod_i prod_j (1 - sum_k eps^(i)_jk).
double confidence_level_qpt(const QptEpsilons& alloc);

/// Protocol shapes for building uniform allocations.
struct QstShape {
  std::vector<int> effects_per_povm;
};
struct QptShape {
  std::vector<QstShape> per_input;
};

/// Single epsilon* such that the corresponding confidence level meets
/// `target_confidence` within 1e-12, found by bisection on the monotone
/// product.
QstEpsilons uniform_allocation(const QstShape& shape, double target_confidence);
QptEpsilons uniform_allocation(const QptShape& shape, double target_confidence);

}  // namespace polytomo
