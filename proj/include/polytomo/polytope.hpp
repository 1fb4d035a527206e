#pragma once

#include <cstdint>
#include <vector>

#include "polytomo/clopper_pearson.hpp"
#include "polytomo/halfspace.hpp"
#include "polytomo/operators.hpp"

namespace polytomo {

/// Intersection of half-spaces in the real embedding space, together with
/// the confidence level the construction guarantees.
struct Polyhedron {
  Index ambient_dim = 0;
  std::vector<HalfSpace> halfspaces;
  double confidence_level = 0.0;

  /// Rows are the half-space normals.
  MatrixR constraint_matrix() const;
  VectorR offsets() const;
};

/// State-tomography measurement record: POVMs with per-effect counts, plus
/// the basis fixing the embedding.
class QstDataset {
 public:
  QstDataset(std::vector<Povm> povms, std::vector<std::vector<std::int64_t>> counts,
             BasisSet basis);

  const std::vector<Povm>& povms() const { return povms_; }
  const std::vector<std::vector<std::int64_t>>& counts() const { return counts_; }
  const BasisSet& basis() const { return basis_; }
  Index dim() const { return basis_.dim(); }
  QstShape shape() const;

 private:
  std::vector<Povm> povms_;
  std::vector<std::vector<std::int64_t>> counts_;
  BasisSet basis_;
};

/// One output measurement of one input state.
struct QptSetting {
  Povm povm;
  std::vector<std::int64_t> counts;
};

/// Process-tomography record: input states, the per-input measurement
/// settings, and the bases of both factors.
class QptDataset {
 public:
  QptDataset(std::vector<DensityMatrix> inputs, std::vector<std::vector<QptSetting>> settings,
             BasisSet basis_in, BasisSet basis_out);

  const std::vector<DensityMatrix>& inputs() const { return inputs_; }
  const std::vector<std::vector<QptSetting>>& settings() const { return settings_; }
  const BasisSet& basis_in() const { return basis_in_; }
  const BasisSet& basis_out() const { return basis_out_; }
  Index dim_in() const { return basis_in_.dim(); }
  Index dim_out() const { return basis_out_.dim(); }
  QptShape shape() const;

 private:
  std::vector<DensityMatrix> inputs_;
  std::vector<std::vector<QptSetting>> settings_;
  BasisSet basis_in_;
  BasisSet basis_out_;
};

/// One half-space per (POVM, effect) pair in R^{d^2-1}; per-POVM shot totals
/// are taken from the counts themselves.
Polyhedron build_qst_polytope(const QstDataset& data, const QstEpsilons& alloc);

/// One half-space per (input, POVM, effect) triple in R^{d_in^2 (d_out^2-1)};
/// normals are kron(eta_out, rbar_in) laid out like ChoiEmbedding::stacked.
/// Trace preservation is implicit in the parametrization.
Polyhedron build_qpt_polytope(const QptDataset& data, const QptEpsilons& alloc);

/// Membership verdict; when the point is outside, `violated` names the first
/// offending constraint and `violation` its slack excess.
struct Membership {
  bool inside = true;
  Provenance violated;
  double violation = 0.0;

  explicit operator bool() const { return inside; }
};

/// Slack tolerance 1e-9 absolute on every constraint.
Membership contains(const Polyhedron& poly, const VectorR& point);

/// Boundedness by numerical rank of the stacked normals (singular-value
/// threshold ambient_dim * sigma_max * 1e-10). Rank equal to the ambient
/// dimension is equivalent to informational completeness of the generating
/// protocol, which for these POVM-generated constraint sets is equivalent to
/// boundedness of the polyhedron.
bool is_bounded(const Polyhedron& poly);

/// Numerical rank of the constraint matrix (the quantity behind is_bounded).
Index constraint_rank(const Polyhedron& poly);

/// Cross-validation route: decides boundedness by searching the recession
/// cone {v : Av <= 0} for a nonzero ray with a series of LPs. Slower;
/// intended for checking is_bounded, not for production paths.
bool is_bounded_via_recession_lp(const Polyhedron& poly);

}  // namespace polytomo
