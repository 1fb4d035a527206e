#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace polytomo {

using Complex = std::complex<double>;
using MatrixC = Eigen::MatrixXcd;
using MatrixR = Eigen::MatrixXd;
using VectorC = Eigen::VectorXcd;
using VectorR = Eigen::VectorXd;
using Index = Eigen::Index;

// Absolute tolerances of the operator-algebra invariants. Validation happens
// at construction time so near-boundary numerical states fail loudly instead
// of propagating.
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kEigenvalueTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kBasisTol = 1e-10;

/// Kronecker product of dense expressions; works for real and complex
/// operands (and their mixtures) alike. Column vectors stay column vectors.
template <typename DerivedA, typename DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename Eigen::ScalarBinaryOpTraits<typename DerivedA::Scalar,
                                                      typename DerivedB::Scalar>::ReturnType;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(),
                                                            a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
          a(i, j) * b.derived().template cast<Scalar>();
  return out;
}

// Partial traces over the factors of a bipartite space H_in (x) H_out with
// row index convention i = i_in * d_out + i_out.
MatrixC partial_trace_out(const MatrixC& m, Index d_in, Index d_out);
MatrixC partial_trace_in(const MatrixC& m, Index d_in, Index d_out);

// Re Tr(a b), evaluated without forming the product matrix.
double trace_product_real(const MatrixC& a, const MatrixC& b);

/// Dense Hermitian operator; construction verifies entries equal their
/// conjugate transpose within kHermitianTol (absolute, entrywise).
class HermitianOperator {
 public:
  explicit HermitianOperator(MatrixC entries);

  Index dim() const { return entries_.rows(); }
  const MatrixC& matrix() const { return entries_; }
  double real_trace() const { return entries_.trace().real(); }
  /// Eigenvalues in ascending order.
  VectorR eigenvalues() const;

 private:
  MatrixC entries_;
};

/// Unit-trace positive semidefinite operator (trace within kTraceTol of 1,
/// eigenvalues >= -kEigenvalueTol).
class DensityMatrix {
 public:
  explicit DensityMatrix(HermitianOperator op);
  explicit DensityMatrix(MatrixC entries);
  /// Projector |psi><psi| of a normalized state vector.
  static DensityMatrix pure(const VectorC& psi);

  Index dim() const { return op_.dim(); }
  const MatrixC& matrix() const { return op_.matrix(); }
  const HermitianOperator& op() const { return op_; }

 private:
  HermitianOperator op_;
};

/// Measurement effect: Hermitian with spectrum inside [0, 1] (tolerance
/// kEigenvalueTol on both ends).
class Effect {
 public:
  explicit Effect(HermitianOperator op);
  explicit Effect(MatrixC entries);

  Index dim() const { return op_.dim(); }
  const MatrixC& matrix() const { return op_.matrix(); }
  const HermitianOperator& op() const { return op_; }

 private:
  HermitianOperator op_;
};

/// Ordered tuple of at least two effects of equal dimension summing to the
/// identity (entrywise within kHermitianTol). Effect order is meaningful:
/// counts are matched to effects by position.
class Povm {
 public:
  explicit Povm(std::vector<Effect> effects);

  Index dim() const { return effects_.front().dim(); }
  std::size_t size() const { return effects_.size(); }
  const Effect& operator[](std::size_t i) const { return effects_[i]; }
  const std::vector<Effect>& effects() const { return effects_; }

 private:
  std::vector<Effect> effects_;
};

/// Orthogonal set {sigma_1, ..., sigma_{d^2-1}} of traceless Hermitian
/// operators with Tr(sigma_i sigma_j) = d delta_ij; sigma_0 = identity is
/// implicit and included in the orthogonality checks.
class BasisSet {
 public:
  BasisSet(Index dim, std::vector<MatrixC> sigmas);

  Index dim() const { return dim_; }
  /// Number of traceless elements, d^2 - 1.
  std::size_t size() const { return sigmas_.size(); }
  /// Traceless element i, 0-based (sigma_{i+1} in 1-based counting).
  const MatrixC& sigma(std::size_t i) const { return sigmas_[i]; }
  const std::vector<MatrixC>& sigmas() const { return sigmas_; }

 private:
  Index dim_;
  std::vector<MatrixC> sigmas_;
};

/// Choi state of a channel H_in -> H_out: positive semidefinite operator on
/// H_in (x) H_out whose partial trace over the output factor is the identity
/// on the input factor.
class ChoiMatrix {
 public:
  ChoiMatrix(Index d_in, Index d_out, HermitianOperator op);

  Index dim_in() const { return d_in_; }
  Index dim_out() const { return d_out_; }
  const MatrixC& matrix() const { return op_.matrix(); }
  const HermitianOperator& op() const { return op_; }

 private:
  Index d_in_;
  Index d_out_;
  HermitianOperator op_;
};

/// Single-qubit Pauli matrix; index 0..3 maps to I, X, Y, Z.
const MatrixC& pauli(int index);

/// Tensor products of {I, X, Y, Z} over num_qubits qubits, lexicographic in
/// the (I,X,Y,Z) strings, with the all-identity string dropped (it plays the
/// role of sigma_0). Satisfies the BasisSet invariants exactly.
BasisSet build_pauli_basis(int num_qubits);

/// Generalized Gell-Mann matrices rescaled so Tr(sigma_i sigma_j) = d delta_ij.
/// Order: symmetric pairs (j<k lexicographic), antisymmetric pairs, diagonal.
BasisSet build_gell_mann_basis(Index dim);

/// Pauli products for power-of-two dimensions, Gell-Mann otherwise.
BasisSet basis_for_dim(Index dim);

}  // namespace polytomo
