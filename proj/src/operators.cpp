#include "polytomo/operators.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace polytomo {

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument(what);
}

std::string dims_str(Index r, Index c) {
  std::ostringstream os;
  os << r << "x" << c;
  return os.str();
}

}  // namespace

MatrixC partial_trace_out(const MatrixC& m, Index d_in, Index d_out) {
  if (m.rows() != d_in * d_out || m.cols() != d_in * d_out)
    fail("partial_trace_out: matrix is " + dims_str(m.rows(), m.cols()) +
         ", expected " + dims_str(d_in * d_out, d_in * d_out));
  MatrixC out = MatrixC::Zero(d_in, d_in);
  for (Index i = 0; i < d_in; ++i)
    for (Index j = 0; j < d_in; ++j)
      for (Index k = 0; k < d_out; ++k) out(i, j) += m(i * d_out + k, j * d_out + k);
  return out;
}

MatrixC partial_trace_in(const MatrixC& m, Index d_in, Index d_out) {
  if (m.rows() != d_in * d_out || m.cols() != d_in * d_out)
    fail("partial_trace_in: matrix is " + dims_str(m.rows(), m.cols()) +
         ", expected " + dims_str(d_in * d_out, d_in * d_out));
  MatrixC out = MatrixC::Zero(d_out, d_out);
  for (Index k = 0; k < d_in; ++k)
    out += m.block(k * d_out, k * d_out, d_out, d_out);
  return out;
}

double trace_product_real(const MatrixC& a, const MatrixC& b) {
  if (a.rows() != b.cols() || a.cols() != b.rows())
    fail("trace_product_real: incompatible shapes");
  // Tr(ab) = sum_ij a_ij b_ji
  return a.cwiseProduct(b.transpose()).sum().real();
}

HermitianOperator::HermitianOperator(MatrixC entries) : entries_(std::move(entries)) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols())
    fail("HermitianOperator: matrix must be square and nonempty, got " +
         dims_str(entries_.rows(), entries_.cols()));
  const double dev = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (dev > kHermitianTol) {
    std::ostringstream os;
    os << "HermitianOperator: entries deviate from conjugate transpose by " << dev;
    fail(os.str());
  }
}

VectorR HermitianOperator::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<MatrixC> es(entries_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

DensityMatrix::DensityMatrix(HermitianOperator op) : op_(std::move(op)) {
  const double tr = op_.real_trace();
  if (std::abs(tr - 1.0) > kTraceTol) {
    std::ostringstream os;
    os << "DensityMatrix: trace is " << tr << ", expected 1";
    fail(os.str());
  }
  const double min_eig = op_.eigenvalues().minCoeff();
  if (min_eig < -kEigenvalueTol) {
    std::ostringstream os;
    os << "DensityMatrix: negative eigenvalue " << min_eig;
    fail(os.str());
  }
}

DensityMatrix::DensityMatrix(MatrixC entries)
    : DensityMatrix(HermitianOperator(std::move(entries))) {}

DensityMatrix DensityMatrix::pure(const VectorC& psi) {
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > 1e-10) {
    std::ostringstream os;
    os << "DensityMatrix::pure: state vector norm is " << norm;
    fail(os.str());
  }
  return DensityMatrix(HermitianOperator(psi * psi.adjoint()));
}

Effect::Effect(HermitianOperator op) : op_(std::move(op)) {
  const VectorR eigs = op_.eigenvalues();
  if (eigs.minCoeff() < -kEigenvalueTol || eigs.maxCoeff() > 1.0 + kEigenvalueTol) {
    std::ostringstream os;
    os << "Effect: spectrum [" << eigs.minCoeff() << ", " << eigs.maxCoeff()
       << "] leaves [0, 1]";
    fail(os.str());
  }
}

Effect::Effect(MatrixC entries) : Effect(HermitianOperator(std::move(entries))) {}

Povm::Povm(std::vector<Effect> effects) : effects_(std::move(effects)) {
  if (effects_.size() < 2) fail("Povm: needs at least two effects");
  const Index d = effects_.front().dim();
  MatrixC sum = MatrixC::Zero(d, d);
  for (const Effect& e : effects_) {
    if (e.dim() != d) fail("Povm: effects have mixed dimensions");
    sum += e.matrix();
  }
  const double dev = (sum - MatrixC::Identity(d, d)).cwiseAbs().maxCoeff();
  if (dev > kHermitianTol) {
    std::ostringstream os;
    os << "Povm: effects sum deviates from identity by " << dev;
    fail(os.str());
  }
}

BasisSet::BasisSet(Index dim, std::vector<MatrixC> sigmas)
    : dim_(dim), sigmas_(std::move(sigmas)) {
  if (dim_ < 2) fail("BasisSet: dimension must be at least 2");
  if (static_cast<Index>(sigmas_.size()) != dim_ * dim_ - 1)
    fail("BasisSet: expected d^2-1 traceless elements");
  for (const MatrixC& s : sigmas_) {
    if (s.rows() != dim_ || s.cols() != dim_) fail("BasisSet: element has wrong shape");
    if ((s - s.adjoint()).cwiseAbs().maxCoeff() > kBasisTol)
      fail("BasisSet: element is not Hermitian");
    if (std::abs(s.trace()) > kBasisTol) fail("BasisSet: element is not traceless");
  }
  // Orthogonality including the implicit sigma_0 = identity: tracelessness
  // above covers the 0-i pairs, so check the i,j >= 1 block here.
  const double d = static_cast<double>(dim_);
  for (std::size_t i = 0; i < sigmas_.size(); ++i) {
    for (std::size_t j = i; j < sigmas_.size(); ++j) {
      const double t = trace_product_real(sigmas_[i], sigmas_[j]);
      const double expected = (i == j) ? d : 0.0;
      if (std::abs(t - expected) > kBasisTol) {
        std::ostringstream os;
        os << "BasisSet: Tr(sigma_" << i + 1 << " sigma_" << j + 1 << ") = " << t
           << ", expected " << expected;
        fail(os.str());
      }
    }
  }
}

ChoiMatrix::ChoiMatrix(Index d_in, Index d_out, HermitianOperator op)
    : d_in_(d_in), d_out_(d_out), op_(std::move(op)) {
  if (d_in_ < 2 || d_out_ < 2) fail("ChoiMatrix: dimensions must be at least 2");
  if (op_.dim() != d_in_ * d_out_)
    fail("ChoiMatrix: operator dimension does not equal d_in*d_out");
  const double min_eig = op_.eigenvalues().minCoeff();
  if (min_eig < -kEigenvalueTol) {
    std::ostringstream os;
    os << "ChoiMatrix: negative eigenvalue " << min_eig << " (map not completely positive)";
    fail(os.str());
  }
  const MatrixC traced = partial_trace_out(op_.matrix(), d_in_, d_out_);
  const double dev = (traced - MatrixC::Identity(d_in_, d_in_)).cwiseAbs().maxCoeff();
  if (dev > kHermitianTol) {
    std::ostringstream os;
    os << "ChoiMatrix: partial trace over output deviates from identity by " << dev
       << " (map not trace preserving)";
    fail(os.str());
  }
}

const MatrixC& pauli(int index) {
  static const MatrixC mats[4] = {
      (MatrixC(2, 2) << 1, 0, 0, 1).finished(),
      (MatrixC(2, 2) << 0, 1, 1, 0).finished(),
      (MatrixC(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished(),
      (MatrixC(2, 2) << 1, 0, 0, -1).finished()};
  if (index < 0 || index > 3) fail("pauli: index must be 0..3");
  return mats[index];
}

BasisSet build_pauli_basis(int num_qubits) {
  if (num_qubits < 1) fail("build_pauli_basis: need at least one qubit");
  if (num_qubits > 4) fail("build_pauli_basis: more than four qubits unsupported");
  const Index d = Index(1) << num_qubits;
  std::vector<MatrixC> sigmas;
  sigmas.reserve(static_cast<std::size_t>(d * d - 1));
  const std::size_t total = static_cast<std::size_t>(d) * static_cast<std::size_t>(d);
  for (std::size_t code = 1; code < total; ++code) {
    // Base-4 digits of `code`, first qubit most significant.
    MatrixC op = MatrixC::Ones(1, 1);
    for (int q = 0; q < num_qubits; ++q) {
      const int digit = static_cast<int>(code >> (2 * (num_qubits - 1 - q))) & 3;
      op = kron(op, pauli(digit));
    }
    sigmas.push_back(std::move(op));
  }
  return BasisSet(d, std::move(sigmas));
}

BasisSet build_gell_mann_basis(Index dim) {
  if (dim < 2) fail("build_gell_mann_basis: dimension must be at least 2");
  const double scale = std::sqrt(static_cast<double>(dim) / 2.0);
  std::vector<MatrixC> sigmas;
  sigmas.reserve(static_cast<std::size_t>(dim * dim - 1));
  for (Index j = 0; j < dim; ++j) {
    for (Index k = j + 1; k < dim; ++k) {
      MatrixC sym = MatrixC::Zero(dim, dim);
      sym(j, k) = sym(k, j) = 1.0;
      sigmas.push_back(scale * sym);
    }
  }
  for (Index j = 0; j < dim; ++j) {
    for (Index k = j + 1; k < dim; ++k) {
      MatrixC asym = MatrixC::Zero(dim, dim);
      asym(j, k) = Complex(0, -1);
      asym(k, j) = Complex(0, 1);
      sigmas.push_back(scale * asym);
    }
  }
  for (Index l = 1; l < dim; ++l) {
    MatrixC diag = MatrixC::Zero(dim, dim);
    for (Index m = 0; m < l; ++m) diag(m, m) = 1.0;
    diag(l, l) = -static_cast<double>(l);
    const double norm = std::sqrt(2.0 / (static_cast<double>(l) * (l + 1)));
    sigmas.push_back(scale * norm * diag);
  }
  return BasisSet(dim, std::move(sigmas));
}

BasisSet basis_for_dim(Index dim) {
  if (dim >= 2 && (dim & (dim - 1)) == 0) {
    int qubits = 0;
    for (Index d = dim; d > 1; d >>= 1) ++qubits;
    return build_pauli_basis(qubits);
  }
  return build_gell_mann_basis(dim);
}

}  // namespace polytomo
