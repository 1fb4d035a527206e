#pragma once

#include "polytomo/polytope.hpp"

namespace polytomo {

enum class LpSense { Max, Min };
enum class LpStatus { Optimal, Unbounded, Infeasible };

/// maximize (or minimize) objective . x over x in the polyhedron; x is free
/// in sign, as embedding coordinates are.
struct LpProblem {
  VectorR objective;
  Polyhedron poly;
  LpSense sense = LpSense::Max;
};

struct LpSolution {
  LpStatus status = LpStatus::Optimal;
  double value = 0.0;  // meaningful when Optimal
  VectorR point;       // certificate, meaningful when Optimal
  int iterations = 0;
};

/// Dense two-phase primal simplex with Bland's anti-cycling rule. Free
/// variables are split into nonnegative pairs. Deterministic: identical
/// inputs give identical pivots. A detected numerical failure raises
/// std::runtime_error rather than returning a wrong Optimal.
LpSolution solve(const LpProblem& problem);

/// Same solver on raw data: optimize objective . x subject to a x <= b.
LpSolution solve_lp(const MatrixR& a, const VectorR& b, const VectorR& objective,
                    LpSense sense);

}  // namespace polytomo
