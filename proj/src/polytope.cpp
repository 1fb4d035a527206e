#include "polytomo/polytope.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "polytomo/embeddings.hpp"
#include "polytomo/linprog.hpp"

namespace polytomo {

namespace {

void check_counts(const std::vector<std::int64_t>& counts, std::size_t effects,
                  const char* where) {
  if (counts.size() != effects)
    throw std::invalid_argument(std::string(where) + ": count tuple length does not match "
                                                     "the number of effects");
  for (std::int64_t c : counts)
    if (c < 0) throw std::invalid_argument(std::string(where) + ": negative count");
}

std::int64_t total_shots(const std::vector<std::int64_t>& counts) {
  std::int64_t total = 0;
  for (std::int64_t c : counts) total += c;
  return total;
}

// Effects of one POVM embed to vectors summing to zero (their operator sum is
// the identity, whose traceless components vanish). The polytope geometry
// leans on this, so enforce it at build time.
void check_eta_closure(const std::vector<EffectEmbedding>& etas, const char* where) {
  VectorR sum = VectorR::Zero(etas.front().eta.size());
  for (const EffectEmbedding& e : etas) sum += e.eta;
  if (sum.cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument(std::string(where) + ": POVM effect embeddings do not close");
}

}  // namespace

MatrixR Polyhedron::constraint_matrix() const {
  MatrixR a(static_cast<Index>(halfspaces.size()), ambient_dim);
  for (std::size_t i = 0; i < halfspaces.size(); ++i)
    a.row(static_cast<Index>(i)) = halfspaces[i].normal;
  return a;
}

VectorR Polyhedron::offsets() const {
  VectorR b(static_cast<Index>(halfspaces.size()));
  for (std::size_t i = 0; i < halfspaces.size(); ++i)
    b(static_cast<Index>(i)) = halfspaces[i].offset;
  return b;
}

QstDataset::QstDataset(std::vector<Povm> povms, std::vector<std::vector<std::int64_t>> counts,
                       BasisSet basis)
    : povms_(std::move(povms)), counts_(std::move(counts)), basis_(std::move(basis)) {
  if (povms_.empty()) throw std::invalid_argument("QstDataset: no POVMs");
  if (counts_.size() != povms_.size())
    throw std::invalid_argument("QstDataset: counts do not match POVM list");
  for (std::size_t i = 0; i < povms_.size(); ++i) {
    if (povms_[i].dim() != basis_.dim())
      throw std::invalid_argument("QstDataset: POVM dimension does not match basis");
    check_counts(counts_[i], povms_[i].size(), "QstDataset");
  }
}

QstShape QstDataset::shape() const {
  QstShape shape;
  shape.effects_per_povm.reserve(povms_.size());
  for (const Povm& povm : povms_) shape.effects_per_povm.push_back(static_cast<int>(povm.size()));
  return shape;
}

QptDataset::QptDataset(std::vector<DensityMatrix> inputs,
                       std::vector<std::vector<QptSetting>> settings, BasisSet basis_in,
                       BasisSet basis_out)
    : inputs_(std::move(inputs)),
      settings_(std::move(settings)),
      basis_in_(std::move(basis_in)),
      basis_out_(std::move(basis_out)) {
  if (inputs_.empty()) throw std::invalid_argument("QptDataset: no input states");
  if (settings_.size() != inputs_.size())
    throw std::invalid_argument("QptDataset: settings do not match input list");
  for (const DensityMatrix& rho : inputs_)
    if (rho.dim() != basis_in_.dim())
      throw std::invalid_argument("QptDataset: input state dimension does not match basis");
  for (const auto& per_input : settings_) {
    if (per_input.empty()) throw std::invalid_argument("QptDataset: input with no measurements");
    for (const QptSetting& setting : per_input) {
      if (setting.povm.dim() != basis_out_.dim())
        throw std::invalid_argument("QptDataset: POVM dimension does not match output basis");
      check_counts(setting.counts, setting.povm.size(), "QptDataset");
    }
  }
}

QptShape QptDataset::shape() const {
  QptShape shape;
  shape.per_input.reserve(settings_.size());
  for (const auto& per_input : settings_) {
    QstShape input_shape;
    input_shape.effects_per_povm.reserve(per_input.size());
    for (const QptSetting& setting : per_input)
      input_shape.effects_per_povm.push_back(static_cast<int>(setting.povm.size()));
    shape.per_input.push_back(std::move(input_shape));
  }
  return shape;
}

Polyhedron build_qst_polytope(const QstDataset& data, const QstEpsilons& alloc) {
  if (alloc.size() != data.povms().size())
    throw std::invalid_argument("build_qst_polytope: allocation shape mismatch");
  Polyhedron poly;
  poly.ambient_dim = data.dim() * data.dim() - 1;
  poly.confidence_level = confidence_level_qst(alloc);
  for (std::size_t i = 0; i < data.povms().size(); ++i) {
    const Povm& povm = data.povms()[i];
    if (alloc[i].size() != povm.size())
      throw std::invalid_argument("build_qst_polytope: allocation shape mismatch");
    const std::int64_t shots = total_shots(data.counts()[i]);
    if (shots == 0) {
      std::ostringstream os;
      os << "build_qst_polytope: POVM " << i << " has zero total shots";
      throw std::invalid_argument(os.str());
    }
    std::vector<EffectEmbedding> etas;
    etas.reserve(povm.size());
    for (std::size_t j = 0; j < povm.size(); ++j)
      etas.push_back(embed_effect(povm[j], data.basis()));
    check_eta_closure(etas, "build_qst_polytope");
    for (std::size_t j = 0; j < povm.size(); ++j) {
      poly.halfspaces.push_back(effect_halfspace(
          data.counts()[i][j], shots, etas[j], alloc[i][j],
          Provenance{-1, static_cast<int>(i), static_cast<int>(j)}));
    }
  }
  return poly;
}

Polyhedron build_qpt_polytope(const QptDataset& data, const QptEpsilons& alloc) {
  if (alloc.size() != data.inputs().size())
    throw std::invalid_argument("build_qpt_polytope: allocation shape mismatch");
  const Index d_in = data.dim_in();
  Polyhedron poly;
  poly.ambient_dim = d_in * d_in * (data.dim_out() * data.dim_out() - 1);
  poly.confidence_level = confidence_level_qpt(alloc);
  for (std::size_t i = 0; i < data.inputs().size(); ++i) {
    const VectorR rbar = embed_input_state(data.inputs()[i], data.basis_in());
    const auto& per_input = data.settings()[i];
    if (alloc[i].size() != per_input.size())
      throw std::invalid_argument("build_qpt_polytope: allocation shape mismatch");
    for (std::size_t j = 0; j < per_input.size(); ++j) {
      const QptSetting& setting = per_input[j];
      if (alloc[i][j].size() != setting.povm.size())
        throw std::invalid_argument("build_qpt_polytope: allocation shape mismatch");
      const std::int64_t shots = total_shots(setting.counts);
      if (shots == 0) {
        std::ostringstream os;
        os << "build_qpt_polytope: input " << i << ", POVM " << j << " has zero total shots";
        throw std::invalid_argument(os.str());
      }
      std::vector<EffectEmbedding> etas;
      etas.reserve(setting.povm.size());
      for (std::size_t k = 0; k < setting.povm.size(); ++k)
        etas.push_back(embed_effect(setting.povm[k], data.basis_out()));
      check_eta_closure(etas, "build_qpt_polytope");
      for (std::size_t k = 0; k < setting.povm.size(); ++k) {
        const DeltaBound bound = solve_delta(setting.counts[k], shots, alloc[i][j][k]);
        poly.halfspaces.push_back(HalfSpace{
            kron(etas[k].eta, rbar), bound.frequency_bound() - etas[k].eta0,
            Provenance{static_cast<int>(i), static_cast<int>(j), static_cast<int>(k)}});
      }
    }
  }
  return poly;
}

Membership contains(const Polyhedron& poly, const VectorR& point) {
  if (point.size() != poly.ambient_dim)
    throw std::invalid_argument("contains: point dimension does not match polyhedron");
  for (const HalfSpace& hs : poly.halfspaces) {
    const double excess = hs.normal.dot(point) - hs.offset;
    if (excess > 1e-9) return Membership{false, hs.origin, excess};
  }
  return Membership{};
}

Index constraint_rank(const Polyhedron& poly) {
  if (poly.halfspaces.empty()) return 0;
  const MatrixR a = poly.constraint_matrix();
  Eigen::JacobiSVD<MatrixR> svd(a);
  const VectorR& sv = svd.singularValues();
  const double threshold = static_cast<double>(poly.ambient_dim) * sv(0) * 1e-10;
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > threshold) ++rank;
  return rank;
}

bool is_bounded(const Polyhedron& poly) {
  return constraint_rank(poly) == poly.ambient_dim;
}

bool is_bounded_via_recession_lp(const Polyhedron& poly) {
  // Nonzero v with Av <= 0 exists iff some coordinate can be pushed away from
  // zero inside the cone intersected with the unit box.
  const Index m = poly.ambient_dim;
  Polyhedron cone;
  cone.ambient_dim = m;
  cone.confidence_level = poly.confidence_level;
  for (const HalfSpace& hs : poly.halfspaces)
    cone.halfspaces.push_back(HalfSpace{hs.normal, 0.0, hs.origin});
  for (Index i = 0; i < m; ++i) {
    VectorR e = VectorR::Zero(m);
    e(i) = 1.0;
    cone.halfspaces.push_back(HalfSpace{e, 1.0});
    cone.halfspaces.push_back(HalfSpace{-e, 1.0});
  }
  for (Index i = 0; i < m; ++i) {
    for (double sign : {1.0, -1.0}) {
      VectorR objective = VectorR::Zero(m);
      objective(i) = sign;
      const LpSolution sol = solve(LpProblem{objective, cone, LpSense::Max});
      if (sol.status != LpStatus::Optimal)
        throw std::runtime_error("is_bounded_via_recession_lp: cone LP failed");
      if (sol.value > 1e-7) return false;
    }
  }
  return true;
}

}  // namespace polytomo
