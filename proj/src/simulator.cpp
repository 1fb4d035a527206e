#include "polytomo/simulator.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace polytomo {

std::uint64_t splitmix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t derive_subseed(std::uint64_t seed, std::uint64_t index) {
  // One splitmix64 stream step per index, offset so index 0 differs from the
  // raw seed.
  return splitmix64(seed + (index + 1) * 0x9E3779B97F4A7C15ull);
}

DensityMatrix ghz_state(int num_qubits) {
  if (num_qubits < 1) throw std::invalid_argument("ghz_state: need at least one qubit");
  const Index d = Index(1) << num_qubits;
  VectorC psi = VectorC::Zero(d);
  psi(0) = 1.0 / std::sqrt(2.0);
  psi(d - 1) = 1.0 / std::sqrt(2.0);
  return DensityMatrix::pure(psi);
}

ChoiMatrix depolarizing_channel(int num_qubits, double p) {
  if (num_qubits < 1)
    throw std::invalid_argument("depolarizing_channel: need at least one qubit");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("depolarizing_channel: p must lie in [0, 1]");
  const Index d = Index(1) << num_qubits;
  const MatrixC id = MatrixC::Identity(d, d);
  return choi_of_channel(
      [&](const MatrixC& rho) -> MatrixC {
        return (1.0 - p) * rho + (p / static_cast<double>(d)) * rho.trace() * id;
      },
      d, d);
}

std::vector<DensityMatrix> tetrahedron_inputs(int num_qubits) {
  if (num_qubits < 1)
    throw std::invalid_argument("tetrahedron_inputs: need at least one qubit");
  const double s = 1.0 / std::sqrt(3.0);
  const double axes[4][3] = {
      {s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}};
  MatrixC single[4];
  for (int k = 0; k < 4; ++k) {
    single[k] = 0.5 * (pauli(0) + axes[k][0] * pauli(1) + axes[k][1] * pauli(2) +
                       axes[k][2] * pauli(3));
  }
  const std::size_t total = std::size_t(1) << (2 * num_qubits);  // 4^N
  std::vector<DensityMatrix> states;
  states.reserve(total);
  for (std::size_t code = 0; code < total; ++code) {
    MatrixC op = MatrixC::Ones(1, 1);
    for (int q = 0; q < num_qubits; ++q) {
      const int digit = static_cast<int>(code >> (2 * (num_qubits - 1 - q))) & 3;
      op = kron(op, single[digit]);
    }
    states.push_back(DensityMatrix(std::move(op)));
  }
  return states;
}

std::vector<Povm> pauli_povms(int num_qubits, const std::optional<Eigen::Matrix2d>& confusion) {
  if (num_qubits < 1) throw std::invalid_argument("pauli_povms: need at least one qubit");
  if (confusion) {
    const Eigen::Matrix2d& nu = *confusion;
    if (nu.minCoeff() < 0.0 || nu.maxCoeff() > 1.0 ||
        std::abs(nu.col(0).sum() - 1.0) > 1e-12 || std::abs(nu.col(1).sum() - 1.0) > 1e-12)
      throw std::invalid_argument(
          "pauli_povms: confusion matrix must be column stochastic with entries in [0, 1]");
  }

  // Per-qubit effect pair for each axis, confusion folded in.
  MatrixC qubit_effects[3][2];
  for (int axis = 0; axis < 3; ++axis) {
    const MatrixC plus = 0.5 * (pauli(0) + pauli(axis + 1));
    const MatrixC minus = 0.5 * (pauli(0) - pauli(axis + 1));
    if (confusion) {
      const Eigen::Matrix2d& nu = *confusion;
      qubit_effects[axis][0] = nu(0, 0) * plus + nu(0, 1) * minus;
      qubit_effects[axis][1] = nu(1, 0) * plus + nu(1, 1) * minus;
    } else {
      qubit_effects[axis][0] = plus;
      qubit_effects[axis][1] = minus;
    }
  }

  std::vector<Povm> povms;
  std::size_t num_settings = 1;
  for (int q = 0; q < num_qubits; ++q) num_settings *= 3;
  povms.reserve(num_settings);
  for (std::size_t setting = 0; setting < num_settings; ++setting) {
    // Axis per qubit: base-3 digits, first qubit most significant.
    std::vector<int> axis(static_cast<std::size_t>(num_qubits));
    std::size_t rest = setting;
    for (int q = num_qubits - 1; q >= 0; --q) {
      axis[static_cast<std::size_t>(q)] = static_cast<int>(rest % 3);
      rest /= 3;
    }
    std::vector<Effect> effects;
    const std::size_t num_outcomes = std::size_t(1) << num_qubits;
    effects.reserve(num_outcomes);
    for (std::size_t outcome = 0; outcome < num_outcomes; ++outcome) {
      MatrixC op = MatrixC::Ones(1, 1);
      for (int q = 0; q < num_qubits; ++q) {
        const int bit = static_cast<int>(outcome >> (num_qubits - 1 - q)) & 1;
        op = kron(op, qubit_effects[axis[static_cast<std::size_t>(q)]][bit]);
      }
      effects.push_back(Effect(std::move(op)));
    }
    povms.push_back(Povm(std::move(effects)));
  }
  return povms;
}

VectorR born_distribution(const DensityMatrix& rho, const Povm& povm) {
  if (rho.dim() != povm.dim())
    throw std::invalid_argument("born_distribution: dimension mismatch");
  VectorR p(static_cast<Index>(povm.size()));
  for (std::size_t i = 0; i < povm.size(); ++i) {
    double prob = trace_product_real(rho.matrix(), povm[i].matrix());
    if (prob < -1e-9)
      throw std::invalid_argument("born_distribution: probability below tolerance");
    p(static_cast<Index>(i)) = std::max(prob, 0.0);
  }
  const double sum = p.sum();
  if (std::abs(sum - 1.0) > 1e-8)
    throw std::invalid_argument("born_distribution: probabilities do not sum to one");
  return p / sum;
}

std::vector<std::int64_t> sample_counts(const VectorR& dist, std::int64_t shots,
                                        std::uint64_t seed) {
  if (shots < 0) throw std::invalid_argument("sample_counts: negative shot count");
  const Index outcomes = dist.size();
  if (outcomes == 0) throw std::invalid_argument("sample_counts: empty distribution");
  if (dist.minCoeff() < 0.0 || std::abs(dist.sum() - 1.0) > 1e-9)
    throw std::invalid_argument("sample_counts: not a probability vector");

  VectorR cumulative(outcomes);
  double acc = 0.0;
  for (Index i = 0; i < outcomes; ++i) {
    acc += dist(i);
    cumulative(i) = acc;
  }
  cumulative(outcomes - 1) = 1.0;

  std::mt19937_64 engine(seed);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(outcomes), 0);
  for (std::int64_t s = 0; s < shots; ++s) {
    // 53 uniform bits; avoids the implementation-defined
    // std::uniform_real_distribution.
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    Index bin = 0;
    while (bin < outcomes - 1 && u >= cumulative(bin)) ++bin;
    ++counts[static_cast<std::size_t>(bin)];
  }
  return counts;
}

namespace {

std::vector<std::int64_t> exact_counts(const VectorR& dist, std::int64_t shots) {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(dist.size()));
  for (Index i = 0; i < dist.size(); ++i)
    counts[static_cast<std::size_t>(i)] = std::llround(static_cast<double>(shots) * dist(i));
  return counts;
}

void check_cap(int num_qubits, int cap, const char* what, bool override_size_cap) {
  if (num_qubits < 1)
    throw std::invalid_argument(std::string(what) + ": need at least one qubit");
  if (num_qubits > cap && !override_size_cap)
    throw std::invalid_argument(std::string(what) + ": size cap exceeded (" +
                                std::to_string(cap) + " qubits); pass the override to force");
}

}  // namespace

MeasurementProtocol pauli_qst_protocol(int num_qubits, std::int64_t shots,
                                       const std::optional<Eigen::Matrix2d>& confusion,
                                       bool override_size_cap) {
  check_cap(num_qubits, 3, "pauli_qst_protocol", override_size_cap);
  if (shots < 0) throw std::invalid_argument("pauli_qst_protocol: negative shot count");
  return MeasurementProtocol{MeasurementProtocol::Kind::Qst, {}, pauli_povms(num_qubits, confusion),
                             shots};
}

MeasurementProtocol tetrahedron_pauli_qpt_protocol(
    int num_qubits, std::int64_t shots, const std::optional<Eigen::Matrix2d>& confusion,
    bool override_size_cap) {
  check_cap(num_qubits, 2, "tetrahedron_pauli_qpt_protocol", override_size_cap);
  if (shots < 0)
    throw std::invalid_argument("tetrahedron_pauli_qpt_protocol: negative shot count");
  return MeasurementProtocol{MeasurementProtocol::Kind::Qpt, tetrahedron_inputs(num_qubits),
                             pauli_povms(num_qubits, confusion), shots};
}

QstDataset run_qst_experiment(const DensityMatrix& rho, const MeasurementProtocol& protocol,
                              std::uint64_t seed, bool exact_frequencies) {
  if (protocol.kind != MeasurementProtocol::Kind::Qst)
    throw std::invalid_argument("run_qst_experiment: protocol is not a QST protocol");
  if (protocol.povms.empty()) throw std::invalid_argument("run_qst_experiment: no POVMs");
  std::vector<std::vector<std::int64_t>> counts;
  counts.reserve(protocol.povms.size());
  for (std::size_t i = 0; i < protocol.povms.size(); ++i) {
    const VectorR dist = born_distribution(rho, protocol.povms[i]);
    counts.push_back(exact_frequencies
                         ? exact_counts(dist, protocol.shots_per_setting)
                         : sample_counts(dist, protocol.shots_per_setting,
                                         derive_subseed(seed, i)));
  }
  return QstDataset(protocol.povms, std::move(counts), basis_for_dim(rho.dim()));
}

QptDataset run_qpt_experiment(const ChoiMatrix& choi, const MeasurementProtocol& protocol,
                              std::uint64_t seed, bool exact_frequencies) {
  if (protocol.kind != MeasurementProtocol::Kind::Qpt)
    throw std::invalid_argument("run_qpt_experiment: protocol is not a QPT protocol");
  if (protocol.inputs.empty() || protocol.povms.empty())
    throw std::invalid_argument("run_qpt_experiment: protocol needs inputs and POVMs");
  std::vector<std::vector<QptSetting>> settings;
  settings.reserve(protocol.inputs.size());
  for (std::size_t i = 0; i < protocol.inputs.size(); ++i) {
    const DensityMatrix rho_out = apply_choi(choi, protocol.inputs[i]);
    std::vector<QptSetting> per_input;
    per_input.reserve(protocol.povms.size());
    for (std::size_t j = 0; j < protocol.povms.size(); ++j) {
      const VectorR dist = born_distribution(rho_out, protocol.povms[j]);
      const std::uint64_t subseed = derive_subseed(seed, i * protocol.povms.size() + j);
      per_input.push_back(QptSetting{
          protocol.povms[j],
          exact_frequencies ? exact_counts(dist, protocol.shots_per_setting)
                            : sample_counts(dist, protocol.shots_per_setting, subseed)});
    }
    settings.push_back(std::move(per_input));
  }
  return QptDataset(protocol.inputs, std::move(settings), basis_for_dim(choi.dim_in()),
                    basis_for_dim(choi.dim_out()));
}

}  // namespace polytomo
