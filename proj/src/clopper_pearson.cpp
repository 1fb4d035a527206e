#include "polytomo/clopper_pearson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace polytomo {

double binary_kl(double x, double y) {
  double value = 0.0;
  if (x > 0.0) {
    if (y <= 0.0) return std::numeric_limits<double>::infinity();
    value += x * std::log(x / y);
  }
  if (x < 1.0) {
    if (y >= 1.0) return std::numeric_limits<double>::infinity();
    value += (1.0 - x) * std::log((1.0 - x) / (1.0 - y));
  }
  return value;
}

double DeltaBound::frequency_bound() const {
  if (vacuous) return 1.0;
  const double p = static_cast<double>(n) / static_cast<double>(shots);
  return std::min(1.0, p + delta);
}

DeltaBound solve_delta(std::int64_t n, std::int64_t shots, double epsilon) {
  if (shots < 1) throw std::invalid_argument("solve_delta: shots must be positive");
  if (n < 0 || n > shots) throw std::invalid_argument("solve_delta: count outside [0, shots]");
  if (!(epsilon > 0.0) || !(epsilon < 1.0))
    throw std::invalid_argument("solve_delta: epsilon must lie in (0, 1)");

  DeltaBound bound{n, shots, epsilon, 0.0, false};
  if (n == shots) {
    bound.vacuous = true;
    return bound;
  }

  const double p = static_cast<double>(n) / static_cast<double>(shots);
  const double target = -std::log(epsilon) / static_cast<double>(shots);

  // D(p || p + delta) grows from 0 to +inf on (0, 1-p], so the root is
  // bracketed by construction.
  double lo = 0.0;
  double hi = 1.0 - p;
  for (int iter = 0; iter < 200 && hi - lo > 1e-15; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (binary_kl(p, p + mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  bound.delta = 0.5 * (lo + hi);
  return bound;
}

HalfSpace effect_halfspace(std::int64_t n, std::int64_t shots, const EffectEmbedding& effect,
                           double epsilon, Provenance origin) {
  const DeltaBound bound = solve_delta(n, shots, epsilon);
  return HalfSpace{effect.eta, bound.frequency_bound() - effect.eta0, origin};
}

namespace {

// Factor 1 - sum_j eps_j of one POVM, validating the allocation invariants.
double povm_factor(const std::vector<double>& povm_eps) {
  if (povm_eps.empty()) throw std::invalid_argument("epsilon allocation: empty POVM entry");
  double sum = 0.0;
  for (double eps : povm_eps) {
    if (!(eps > 0.0) || !(eps < 1.0))
      throw std::invalid_argument("epsilon allocation: entries must lie in (0, 1)");
    sum += eps;
  }
  if (sum >= 1.0)
    throw std::invalid_argument("epsilon allocation: per-POVM epsilon sum reaches 1");
  return 1.0 - sum;
}

double flat_sum(const QstEpsilons& alloc) {
  double sum = 0.0;
  for (const auto& povm_eps : alloc)
    for (double eps : povm_eps) sum += eps;
  return sum;
}

// Confidence level of a uniform allocation over POVMs with the given effect
// counts, as a function of the shared epsilon.
double uniform_cl(const std::vector<int>& effect_counts, double eps) {
  double cl = 1.0;
  for (int p : effect_counts) cl *= 1.0 - static_cast<double>(p) * eps;
  return cl;
}

double bisect_uniform_epsilon(const std::vector<int>& effect_counts, double target) {
  if (!(target > 0.0) || !(target < 1.0))
    throw std::invalid_argument("uniform_allocation: target confidence must lie in (0, 1)");
  if (effect_counts.empty())
    throw std::invalid_argument("uniform_allocation: empty protocol shape");
  int max_effects = 0;
  for (int p : effect_counts) {
    if (p < 1) throw std::invalid_argument("uniform_allocation: POVM with no effects");
    max_effects = std::max(max_effects, p);
  }
  double lo = 0.0;
  double hi = 1.0 / static_cast<double>(max_effects);
  double mid = 0.5 * hi;
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (lo + hi);
    const double cl = uniform_cl(effect_counts, mid);
    if (std::abs(cl - target) <= 1e-12) return mid;
    if (cl > target)
      lo = mid;
    else
      hi = mid;
  }
  return mid;
}

}  // namespace

double confidence_level_qst(const QstEpsilons& alloc) {
  if (alloc.empty()) throw std::invalid_argument("confidence_level_qst: empty allocation");
  double cl = 1.0;
  for (const auto& povm_eps : alloc) cl *= povm_factor(povm_eps);
  return cl;
}

double confidence_level_qst_legacy(const QstEpsilons& alloc) {
  if (alloc.empty()) throw std::invalid_argument("confidence_level_qst_legacy: empty allocation");
  for (const auto& povm_eps : alloc) povm_factor(povm_eps);
  return 1.0 - flat_sum(alloc);
}

double confidence_level_qpt(const QptEpsilons& alloc) {
  if (alloc.empty()) throw std::invalid_argument("confidence_level_qpt: empty allocation");
  double cl = 1.0;
  for (const auto& input_eps : alloc) {
    if (input_eps.empty())
      throw std::invalid_argument("confidence_level_qpt: input with no POVMs");
    for (const auto& povm_eps : input_eps) cl *= povm_factor(povm_eps);
  }
  return cl;
}

QstEpsilons uniform_allocation(const QstShape& shape, double target_confidence) {
  const double eps = bisect_uniform_epsilon(shape.effects_per_povm, target_confidence);
  QstEpsilons alloc;
  alloc.reserve(shape.effects_per_povm.size());
  for (int p : shape.effects_per_povm)
    alloc.emplace_back(static_cast<std::size_t>(p), eps);
  return alloc;
}

QptEpsilons uniform_allocation(const QptShape& shape, double target_confidence) {
  if (shape.per_input.empty())
    throw std::invalid_argument("uniform_allocation: empty QPT shape");
  std::vector<int> flat;
  for (const QstShape& input_shape : shape.per_input)
    flat.insert(flat.end(), input_shape.effects_per_povm.begin(),
                input_shape.effects_per_povm.end());
  const double eps = bisect_uniform_epsilon(flat, target_confidence);
  QptEpsilons alloc;
  alloc.reserve(shape.per_input.size());
  for (const QstShape& input_shape : shape.per_input) {
    QstEpsilons per_input;
    per_input.reserve(input_shape.effects_per_povm.size());
    for (int p : input_shape.effects_per_povm)
      per_input.emplace_back(static_cast<std::size_t>(p), eps);
    alloc.push_back(std::move(per_input));
  }
  return alloc;
}

}  // namespace polytomo
