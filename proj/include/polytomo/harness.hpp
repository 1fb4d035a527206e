#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polytomo/functionals.hpp"
#include "polytomo/simulator.hpp"

namespace polytomo {

/// Worker count for trial-parallel experiments: POLYTOMO_THREADS when set,
/// hardware concurrency otherwise, at least one.
int thread_budget();

/// Out-of-region frequencies over a grid of epsilon = 1 - CL targets.
struct CoverageReport {
  std::vector<double> epsilon_grid;
  std::vector<double> f_fail;
  std::vector<int> failures;  // raw failure counts behind f_fail
  int trials = 0;
  std::string protocol;
  std::uint64_t seed = 0;
};

/// For each epsilon: allocate uniformly to confidence level 1 - epsilon,
/// simulate `trials` independent experiments, build the polytope and test
/// membership of the true embedding. Trials that fail to build a region
/// (empty or malformed) count as coverage failures, conservatively.
CoverageReport coverage_experiment(const DensityMatrix& true_state,
                                   const MeasurementProtocol& protocol,
                                   const std::vector<double>& epsilon_grid, int trials,
                                   std::uint64_t seed, bool exact_frequencies = false);

CoverageReport coverage_experiment(const ChoiMatrix& true_choi,
                                   const MeasurementProtocol& protocol,
                                   const std::vector<double>& epsilon_grid, int trials,
                                   std::uint64_t seed, bool exact_frequencies = false);

struct SweepEntry {
  double epsilon = 0.0;
  int trial = 0;
  double lo = 0.0;
  double hi = 0.0;
  bool contains_truth = false;
  bool failed = false;   // interval extraction failed (unbounded/empty)
  std::string failure;   // diagnostic when failed
};

struct IntervalSweep {
  std::vector<SweepEntry> entries;  // epsilon-major, trial-minor
  double true_value = 0.0;
  int trials = 0;
  std::int64_t shots = 0;
  std::uint64_t seed = 0;
};

/// Fidelity-interval study: per epsilon and trial, simulate a QPT run, build
/// the polytope and extract the process-fidelity interval against the target
/// unitary channel. Unbounded or empty regions are recorded per trial, not
/// thrown.
IntervalSweep fidelity_sweep(const ChoiMatrix& true_choi, const MeasurementProtocol& protocol,
                             const ChoiMatrix& target_unitary,
                             const std::vector<double>& epsilon_grid, int trials,
                             std::uint64_t seed, bool exact_frequencies = false);

}  // namespace polytomo
