#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "polytomo/channels.hpp"
#include "polytomo/operators.hpp"
#include "polytomo/polytope.hpp"

namespace polytomo {

// Reproducibility scheme: every sampling site derives its own generator from
// (seed, setting index) through a splitmix64 step, so per-setting counts do
// not depend on how many other settings run or in which order. The generator
// is std::mt19937_64, which the standard pins down bit-exactly.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_subseed(std::uint64_t seed, std::uint64_t index);

struct Seed {
  std::uint64_t value = 0;
};

/// Tomography protocol: input states (process tomography only), readout
/// POVMs, and the per-setting shot budget.
struct MeasurementProtocol {
  enum class Kind { Qst, Qpt };
  Kind kind = Kind::Qst;
  std::vector<DensityMatrix> inputs;  // empty for Qst
  std::vector<Povm> povms;
  std::int64_t shots_per_setting = 0;
};

/// Projector onto (|0...0> + |1...1>) / sqrt(2).
DensityMatrix ghz_state(int num_qubits);

/// Choi state of rho -> (1-p) rho + p Tr(rho) 1 / 2^N.
ChoiMatrix depolarizing_channel(int num_qubits, double p);

/// All 4^N tensor products of the four single-qubit pure states whose Bloch
/// vectors form the tetrahedron (1,1,1), (1,-1,-1), (-1,1,-1), (-1,-1,1)
/// scaled by 1/sqrt(3); lexicographic over index tuples, first qubit most
/// significant.
std::vector<DensityMatrix> tetrahedron_inputs(int num_qubits);

/// The 3^N POVMs of per-qubit x/y/z eigenprojector products (axis strings
/// lexicographic with x < y < z); effects ordered lexicographically over
/// outcome bit strings, bit 0 = +1 eigenvalue, first qubit most significant.
/// An optional per-qubit confusion matrix nu(reported | true), columns
/// summing to one, mixes the projectors; the result remains a POVM.
std::vector<Povm> pauli_povms(int num_qubits,
                              const std::optional<Eigen::Matrix2d>& confusion = std::nullopt);

/// Born probabilities Tr(rho E_i), cleaned of sub-1e-12 negative noise and
/// renormalized to exact unit sum.
VectorR born_distribution(const DensityMatrix& rho, const Povm& povm);

/// Multinomial draw of `shots` outcomes; deterministic given the seed.
std::vector<std::int64_t> sample_counts(const VectorR& dist, std::int64_t shots,
                                        std::uint64_t seed);

/// Size caps keep the linear programs at desk scale; pass override_size_cap
/// to exceed them deliberately.
MeasurementProtocol pauli_qst_protocol(
    int num_qubits, std::int64_t shots,
    const std::optional<Eigen::Matrix2d>& confusion = std::nullopt,
    bool override_size_cap = false);

MeasurementProtocol tetrahedron_pauli_qpt_protocol(
    int num_qubits, std::int64_t shots,
    const std::optional<Eigen::Matrix2d>& confusion = std::nullopt,
    bool override_size_cap = false);

/// Simulate one tomography run. Setting index i (POVM i) seeds its own
/// sampler via derive_subseed(seed, i). With exact_frequencies the counts
/// are round(shots * p) instead of a random draw.
QstDataset run_qst_experiment(const DensityMatrix& rho, const MeasurementProtocol& protocol,
                              std::uint64_t seed, bool exact_frequencies = false);

/// Process-tomography analogue; setting (input i, POVM j) uses subseed index
/// i * num_povms + j, so different settings are independent draws.
QptDataset run_qpt_experiment(const ChoiMatrix& choi, const MeasurementProtocol& protocol,
                              std::uint64_t seed, bool exact_frequencies = false);

}  // namespace polytomo
