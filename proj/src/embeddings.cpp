#include "polytomo/embeddings.hpp"

#include <stdexcept>
#include <utility>

namespace polytomo {

namespace {

void check_dim(Index have, Index want, const char* where) {
  if (have != want) {
    throw std::invalid_argument(std::string(where) + ": operator dimension " +
                                std::to_string(have) + " does not match basis dimension " +
                                std::to_string(want));
  }
}

}  // namespace

VectorR embed_state(const DensityMatrix& rho, const BasisSet& basis) {
  check_dim(rho.dim(), basis.dim(), "embed_state");
  VectorR r(static_cast<Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i)
    r(static_cast<Index>(i)) = trace_product_real(basis.sigma(i), rho.matrix());
  return r;
}

EffectEmbedding embed_effect(const Effect& e, const BasisSet& basis) {
  check_dim(e.dim(), basis.dim(), "embed_effect");
  auto [eta, eta0] = operator_coefficients(e.matrix(), basis);
  return EffectEmbedding{std::move(eta), eta0};
}

VectorR embed_input_state(const DensityMatrix& rho_in, const BasisSet& basis) {
  check_dim(rho_in.dim(), basis.dim(), "embed_input_state");
  const MatrixC transposed = rho_in.matrix().transpose();
  VectorR rbar(static_cast<Index>(basis.size()) + 1);
  rbar(0) = transposed.trace().real();
  for (std::size_t i = 0; i < basis.size(); ++i)
    rbar(static_cast<Index>(i) + 1) = trace_product_real(basis.sigma(i), transposed);
  return rbar;
}

VectorR ChoiEmbedding::stacked() const {
  VectorR c(coeffs.size());
  for (Index i = 0; i < coeffs.rows(); ++i)
    c.segment(i * coeffs.cols(), coeffs.cols()) = coeffs.row(i);
  return c;
}

ChoiEmbedding embed_choi(const ChoiMatrix& choi, const BasisSet& basis_in,
                         const BasisSet& basis_out) {
  check_dim(choi.dim_in(), basis_in.dim(), "embed_choi (input)");
  check_dim(choi.dim_out(), basis_out.dim(), "embed_choi (output)");
  const Index d_in = choi.dim_in();
  const double inv_din = 1.0 / static_cast<double>(d_in);
  const MatrixC id_in = MatrixC::Identity(d_in, d_in);
  MatrixR coeffs(static_cast<Index>(basis_out.size()), d_in * d_in);
  for (std::size_t i = 0; i < basis_out.size(); ++i) {
    for (Index j = 0; j < d_in * d_in; ++j) {
      const MatrixC& sig_in = (j == 0) ? id_in : basis_in.sigma(static_cast<std::size_t>(j - 1));
      coeffs(static_cast<Index>(i), j) =
          inv_din * trace_product_real(kron(sig_in, basis_out.sigma(i)), choi.matrix());
    }
  }
  return ChoiEmbedding{std::move(coeffs)};
}

HermitianOperator unembed_state(const VectorR& r, const BasisSet& basis) {
  if (r.size() != static_cast<Index>(basis.size()))
    throw std::invalid_argument("unembed_state: vector length does not match basis");
  const Index d = basis.dim();
  MatrixC out = MatrixC::Identity(d, d);
  for (std::size_t i = 0; i < basis.size(); ++i) out += r(static_cast<Index>(i)) * basis.sigma(i);
  out /= static_cast<double>(d);
  return HermitianOperator(std::move(out));
}

HermitianOperator unembed_choi(const MatrixR& coeffs, const BasisSet& basis_in,
                               const BasisSet& basis_out) {
  const Index d_in = basis_in.dim();
  const Index d_out = basis_out.dim();
  if (coeffs.rows() != static_cast<Index>(basis_out.size()) || coeffs.cols() != d_in * d_in)
    throw std::invalid_argument("unembed_choi: coefficient matrix has wrong shape");
  const MatrixC id_in = MatrixC::Identity(d_in, d_in);
  MatrixC out = MatrixC::Identity(d_in * d_out, d_in * d_out);
  for (Index i = 0; i < coeffs.rows(); ++i) {
    for (Index j = 0; j < coeffs.cols(); ++j) {
      if (coeffs(i, j) == 0.0) continue;
      const MatrixC& sig_in = (j == 0) ? id_in : basis_in.sigma(static_cast<std::size_t>(j - 1));
      out += coeffs(i, j) * kron(sig_in, basis_out.sigma(static_cast<std::size_t>(i)));
    }
  }
  out /= static_cast<double>(d_out);
  return HermitianOperator(std::move(out));
}

std::pair<VectorR, double> operator_coefficients(const MatrixC& h, const BasisSet& basis) {
  check_dim(h.rows(), basis.dim(), "operator_coefficients");
  const double inv_d = 1.0 / static_cast<double>(basis.dim());
  VectorR coeffs(static_cast<Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i)
    coeffs(static_cast<Index>(i)) = inv_d * trace_product_real(basis.sigma(i), h);
  return {std::move(coeffs), inv_d * h.trace().real()};
}

}  // namespace polytomo
