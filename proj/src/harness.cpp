#include "polytomo/harness.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace polytomo {

int thread_budget() {
  if (const char* env = std::getenv("POLYTOMO_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

// Runs fn(i) for i in [0, total) across the thread budget. Index-strided so
// results keyed by i are placement-deterministic.
void parallel_for(int total, const std::function<void(int)>& fn) {
  const int workers = std::min(thread_budget(), total);
  if (workers <= 1) {
    for (int i = 0; i < total; ++i) fn(i);
    return;
  }
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      try {
        for (int i = w; i < total; i += workers) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

void check_grid(const std::vector<double>& epsilon_grid, int trials) {
  if (trials < 1) throw std::invalid_argument("coverage: trials must be positive");
  if (epsilon_grid.empty()) throw std::invalid_argument("coverage: empty epsilon grid");
  for (double eps : epsilon_grid)
    if (!(eps > 0.0) || !(eps < 1.0))
      throw std::invalid_argument("coverage: epsilon grid entries must lie in (0, 1)");
}

// Shared coverage loop: `trial_inside` simulates one experiment and reports
// whether the truth stayed inside its region.
CoverageReport run_coverage(const std::vector<double>& epsilon_grid, int trials,
                            std::uint64_t seed, std::string protocol_desc,
                            const std::function<bool(double, std::uint64_t)>& trial_inside) {
  CoverageReport report;
  report.epsilon_grid = epsilon_grid;
  report.trials = trials;
  report.seed = seed;
  report.protocol = std::move(protocol_desc);
  for (std::size_t e = 0; e < epsilon_grid.size(); ++e) {
    const double eps = epsilon_grid[e];
    const std::uint64_t grid_seed = derive_subseed(seed, e);
    std::vector<char> failed(static_cast<std::size_t>(trials), 0);
    parallel_for(trials, [&](int t) {
      bool inside = false;
      try {
        inside = trial_inside(eps, derive_subseed(grid_seed, static_cast<std::uint64_t>(t)));
      } catch (const std::exception&) {
        inside = false;  // failed builds count against coverage
      }
      failed[static_cast<std::size_t>(t)] = inside ? 0 : 1;
    });
    int failures = 0;
    for (char f : failed) failures += f;
    report.failures.push_back(failures);
    report.f_fail.push_back(static_cast<double>(failures) / static_cast<double>(trials));
  }
  return report;
}

}  // namespace

CoverageReport coverage_experiment(const DensityMatrix& true_state,
                                   const MeasurementProtocol& protocol,
                                   const std::vector<double>& epsilon_grid, int trials,
                                   std::uint64_t seed, bool exact_frequencies) {
  check_grid(epsilon_grid, trials);
  if (protocol.kind != MeasurementProtocol::Kind::Qst)
    throw std::invalid_argument("coverage_experiment: expected a QST protocol");
  const BasisSet basis = basis_for_dim(true_state.dim());
  const VectorR truth = embed_state(true_state, basis);
  QstShape shape;
  for (const Povm& povm : protocol.povms)
    shape.effects_per_povm.push_back(static_cast<int>(povm.size()));

  std::ostringstream desc;
  desc << "qst d=" << true_state.dim() << " povms=" << protocol.povms.size()
       << " shots=" << protocol.shots_per_setting;
  return run_coverage(epsilon_grid, trials, seed, desc.str(),
                      [&](double eps, std::uint64_t trial_seed) {
                        const QstEpsilons alloc = uniform_allocation(shape, 1.0 - eps);
                        const QstDataset data =
                            run_qst_experiment(true_state, protocol, trial_seed, exact_frequencies);
                        const Polyhedron poly = build_qst_polytope(data, alloc);
                        return static_cast<bool>(contains(poly, truth));
                      });
}

CoverageReport coverage_experiment(const ChoiMatrix& true_choi,
                                   const MeasurementProtocol& protocol,
                                   const std::vector<double>& epsilon_grid, int trials,
                                   std::uint64_t seed, bool exact_frequencies) {
  check_grid(epsilon_grid, trials);
  if (protocol.kind != MeasurementProtocol::Kind::Qpt)
    throw std::invalid_argument("coverage_experiment: expected a QPT protocol");
  const BasisSet basis_in = basis_for_dim(true_choi.dim_in());
  const BasisSet basis_out = basis_for_dim(true_choi.dim_out());
  const VectorR truth = embed_choi(true_choi, basis_in, basis_out).stacked();
  QptShape shape;
  for (std::size_t i = 0; i < protocol.inputs.size(); ++i) {
    QstShape per_input;
    for (const Povm& povm : protocol.povms)
      per_input.effects_per_povm.push_back(static_cast<int>(povm.size()));
    shape.per_input.push_back(std::move(per_input));
  }

  std::ostringstream desc;
  desc << "qpt d_in=" << true_choi.dim_in() << " d_out=" << true_choi.dim_out()
       << " inputs=" << protocol.inputs.size() << " povms=" << protocol.povms.size()
       << " shots=" << protocol.shots_per_setting;
  return run_coverage(epsilon_grid, trials, seed, desc.str(),
                      [&](double eps, std::uint64_t trial_seed) {
                        const QptEpsilons alloc = uniform_allocation(shape, 1.0 - eps);
                        const QptDataset data =
                            run_qpt_experiment(true_choi, protocol, trial_seed, exact_frequencies);
                        const Polyhedron poly = build_qpt_polytope(data, alloc);
                        return static_cast<bool>(contains(poly, truth));
                      });
}

IntervalSweep fidelity_sweep(const ChoiMatrix& true_choi, const MeasurementProtocol& protocol,
                             const ChoiMatrix& target_unitary,
                             const std::vector<double>& epsilon_grid, int trials,
                             std::uint64_t seed, bool exact_frequencies) {
  check_grid(epsilon_grid, trials);
  if (protocol.kind != MeasurementProtocol::Kind::Qpt)
    throw std::invalid_argument("fidelity_sweep: expected a QPT protocol");
  const BasisSet basis_in = basis_for_dim(true_choi.dim_in());
  const BasisSet basis_out = basis_for_dim(true_choi.dim_out());
  const AffineFunctional fidelity =
      process_fidelity_to_unitary(target_unitary, basis_in, basis_out);
  const double true_value = fidelity.evaluate(embed_choi(true_choi, basis_in, basis_out).stacked());

  QptShape shape;
  for (std::size_t i = 0; i < protocol.inputs.size(); ++i) {
    QstShape per_input;
    for (const Povm& povm : protocol.povms)
      per_input.effects_per_povm.push_back(static_cast<int>(povm.size()));
    shape.per_input.push_back(std::move(per_input));
  }

  IntervalSweep sweep;
  sweep.true_value = true_value;
  sweep.trials = trials;
  sweep.shots = protocol.shots_per_setting;
  sweep.seed = seed;
  sweep.entries.resize(epsilon_grid.size() * static_cast<std::size_t>(trials));

  for (std::size_t e = 0; e < epsilon_grid.size(); ++e) {
    const double eps = epsilon_grid[e];
    const QptEpsilons alloc = uniform_allocation(shape, 1.0 - eps);
    const std::uint64_t grid_seed = derive_subseed(seed, e);
    parallel_for(trials, [&](int t) {
      SweepEntry entry;
      entry.epsilon = eps;
      entry.trial = t;
      try {
        const QptDataset data = run_qpt_experiment(
            true_choi, protocol, derive_subseed(grid_seed, static_cast<std::uint64_t>(t)),
            exact_frequencies);
        const Polyhedron poly = build_qpt_polytope(data, alloc);
        const ConfidenceInterval ci = interval(fidelity, poly);
        entry.lo = ci.lo;
        entry.hi = ci.hi;
        entry.contains_truth = ci.lo <= true_value && true_value <= ci.hi;
      } catch (const std::exception& err) {
        entry.failed = true;
        entry.failure = err.what();
      }
      sweep.entries[e * static_cast<std::size_t>(trials) + static_cast<std::size_t>(t)] =
          std::move(entry);
    });
  }
  return sweep;
}

}  // namespace polytomo
