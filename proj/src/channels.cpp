#include "polytomo/channels.hpp"

#include <sstream>
#include <stdexcept>

namespace polytomo {

ChoiMatrix choi_of_channel(const ChannelMap& phi, Index d_in, Index d_out) {
  if (!phi) throw std::invalid_argument("choi_of_channel: empty channel map");
  MatrixC choi(d_in * d_out, d_in * d_out);
  for (Index i = 0; i < d_in; ++i) {
    for (Index j = 0; j < d_in; ++j) {
      MatrixC unit = MatrixC::Zero(d_in, d_in);
      unit(i, j) = 1.0;
      const MatrixC mapped = phi(unit);
      if (mapped.rows() != d_out || mapped.cols() != d_out)
        throw std::invalid_argument("choi_of_channel: map output has wrong dimension");
      choi.block(i * d_out, j * d_out, d_out, d_out) = mapped;
    }
  }
  try {
    return ChoiMatrix(d_in, d_out, HermitianOperator(std::move(choi)));
  } catch (const std::invalid_argument& e) {
    std::ostringstream os;
    os << "choi_of_channel: supplied map is not CPTP: " << e.what();
    throw std::invalid_argument(os.str());
  }
}

ChoiMatrix choi_of_kraus(const std::vector<MatrixC>& kraus) {
  if (kraus.empty()) throw std::invalid_argument("choi_of_kraus: empty Kraus set");
  const Index d_out = kraus.front().rows();
  const Index d_in = kraus.front().cols();
  for (const MatrixC& k : kraus)
    if (k.rows() != d_out || k.cols() != d_in)
      throw std::invalid_argument("choi_of_kraus: Kraus operators have mixed shapes");
  return choi_of_channel(
      [&kraus, d_out](const MatrixC& rho) {
        MatrixC out = MatrixC::Zero(d_out, d_out);
        for (const MatrixC& k : kraus) out += k * rho * k.adjoint();
        return out;
      },
      d_in, d_out);
}

ChoiMatrix choi_of_unitary(const MatrixC& u) {
  return choi_of_kraus({u});
}

DensityMatrix apply_choi(const ChoiMatrix& choi, const DensityMatrix& rho_in) {
  if (rho_in.dim() != choi.dim_in())
    throw std::invalid_argument("apply_choi: input state dimension mismatch");
  const Index d_out = choi.dim_out();
  const MatrixC lifted =
      kron(rho_in.matrix().transpose(), MatrixC::Identity(d_out, d_out)) * choi.matrix();
  return DensityMatrix(partial_trace_in(lifted, choi.dim_in(), d_out));
}

}  // namespace polytomo
