#include "polytomo/linprog.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace polytomo {

namespace {

constexpr double kPivotTol = 1e-9;  // feasibility / pivot magnitude
constexpr double kCostTol = 1e-9;   // reduced-cost optimality

// Dense simplex tableau for min c.y s.t. M y = rhs, y >= 0, rhs >= 0.
// Bottom row carries reduced costs; bottom-right carries minus the objective.
class Tableau {
 public:
  Tableau(MatrixR m, VectorR rhs, std::vector<Index> basis)
      : t_(m.rows() + 1, m.cols() + 1), basis_(std::move(basis)), rows_(m.rows()) {
    t_.setZero();
    t_.topLeftCorner(m.rows(), m.cols()) = m;
    t_.col(m.cols()).head(m.rows()) = rhs;
  }

  Index rows() const { return rows_; }
  Index cols() const { return t_.cols() - 1; }
  double rhs(Index row) const { return t_(row, cols()); }
  double objective() const { return -t_(rows_, cols()); }
  const std::vector<Index>& basis() const { return basis_; }
  int iterations() const { return iterations_; }

  void set_costs(const VectorR& costs) {
    t_.row(rows_).setZero();
    t_.row(rows_).head(costs.size()) = costs;
    for (Index i = 0; i < rows_; ++i) {
      const double cb = costs(basis_[i]);
      if (cb != 0.0) t_.row(rows_) -= cb * t_.row(i);
    }
  }

  // Bland's rule iteration until optimal or unbounded.
  LpStatus iterate(const std::vector<bool>& allowed, int iteration_cap) {
    while (true) {
      Index entering = -1;
      for (Index j = 0; j < cols(); ++j) {
        if (!allowed[static_cast<std::size_t>(j)]) continue;
        if (t_(rows_, j) < -kCostTol) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return LpStatus::Optimal;

      Index leaving = -1;
      double best_ratio = 0.0;
      for (Index i = 0; i < rows_; ++i) {
        const double coeff = t_(i, entering);
        if (coeff <= kPivotTol) continue;
        const double ratio = rhs(i) / coeff;
        if (leaving < 0 || ratio < best_ratio - 1e-15 ||
            (std::abs(ratio - best_ratio) <= 1e-15 && basis_[i] < basis_[leaving])) {
          leaving = i;
          best_ratio = ratio;
        }
      }
      if (leaving < 0) return LpStatus::Unbounded;

      pivot(leaving, entering);
      if (++iterations_ > iteration_cap)
        throw std::runtime_error("simplex: iteration limit exceeded (numerical failure)");
    }
  }

  void pivot(Index row, Index col) {
    t_.row(row) /= t_(row, col);
    for (Index r = 0; r < t_.rows(); ++r) {
      if (r == row) continue;
      const double factor = t_(r, col);
      if (factor != 0.0) t_.row(r) -= factor * t_.row(row);
    }
    basis_[static_cast<std::size_t>(row)] = col;
  }

  // Pivot a basic variable from `row` into any allowed column with a usable
  // coefficient; false means the row is linearly dependent on the others.
  bool pivot_out(Index row, const std::vector<bool>& allowed) {
    for (Index j = 0; j < cols(); ++j) {
      if (!allowed[static_cast<std::size_t>(j)]) continue;
      if (std::abs(t_(row, j)) > kPivotTol) {
        pivot(row, j);
        return true;
      }
    }
    return false;
  }

  void remove_row(Index row) {
    const Index last = rows_ - 1;
    if (row != last) {
      t_.row(row) = t_.row(last);
      basis_[static_cast<std::size_t>(row)] = basis_[static_cast<std::size_t>(last)];
    }
    // Shift the cost row up over the vacated slot.
    t_.row(last) = t_.row(rows_);
    t_.conservativeResize(t_.rows() - 1, Eigen::NoChange);
    basis_.pop_back();
    --rows_;
  }

 private:
  MatrixR t_;
  std::vector<Index> basis_;
  Index rows_;
  int iterations_ = 0;
};

}  // namespace

LpSolution solve_lp(const MatrixR& a, const VectorR& b, const VectorR& objective,
                    LpSense sense) {
  const Index num_constraints = a.rows();
  const Index num_vars = a.cols();
  if (objective.size() != num_vars)
    throw std::invalid_argument("solve_lp: objective length does not match constraint matrix");
  if (b.size() != num_constraints)
    throw std::invalid_argument("solve_lp: offset length does not match constraint matrix");

  // Columns: x = u - w with u, w >= 0, then one slack per row, then
  // artificials for rows whose right-hand side had to be negated.
  const Index base_cols = 2 * num_vars + num_constraints;
  std::vector<Index> artificial_rows;
  for (Index i = 0; i < num_constraints; ++i)
    if (b(i) < 0.0) artificial_rows.push_back(i);
  const Index total_cols = base_cols + static_cast<Index>(artificial_rows.size());

  MatrixR m = MatrixR::Zero(num_constraints, total_cols);
  VectorR rhs(num_constraints);
  std::vector<Index> basis(static_cast<std::size_t>(num_constraints), -1);
  for (Index i = 0; i < num_constraints; ++i) {
    const double sign = b(i) < 0.0 ? -1.0 : 1.0;
    m.row(i).head(num_vars) = sign * a.row(i);
    m.row(i).segment(num_vars, num_vars) = -sign * a.row(i);
    m(i, 2 * num_vars + i) = sign;
    rhs(i) = sign * b(i);
    if (sign > 0.0) basis[static_cast<std::size_t>(i)] = 2 * num_vars + i;
  }
  for (std::size_t k = 0; k < artificial_rows.size(); ++k) {
    const Index row = artificial_rows[k];
    const Index col = base_cols + static_cast<Index>(k);
    m(row, col) = 1.0;
    basis[static_cast<std::size_t>(row)] = col;
  }

  Tableau tableau(std::move(m), std::move(rhs), std::move(basis));
  std::vector<bool> allowed(static_cast<std::size_t>(total_cols), true);
  const int iteration_cap = 10000 + 100 * static_cast<int>(num_constraints + total_cols);

  // Phase 1: minimize the artificial total.
  if (!artificial_rows.empty()) {
    VectorR phase1_costs = VectorR::Zero(total_cols);
    phase1_costs.tail(static_cast<Index>(artificial_rows.size())).setOnes();
    tableau.set_costs(phase1_costs);
    if (tableau.iterate(allowed, iteration_cap) != LpStatus::Optimal)
      throw std::runtime_error("simplex: phase 1 reported an unbounded auxiliary problem");
    if (tableau.objective() > kPivotTol) return LpSolution{LpStatus::Infeasible, 0.0, {}, tableau.iterations()};

    for (Index j = base_cols; j < total_cols; ++j) allowed[static_cast<std::size_t>(j)] = false;
    for (Index i = 0; i < tableau.rows();) {
      if (tableau.basis()[static_cast<std::size_t>(i)] >= base_cols) {
        if (tableau.pivot_out(i, allowed))
          ++i;
        else
          tableau.remove_row(i);  // redundant constraint
      } else {
        ++i;
      }
    }
  }

  // Phase 2: the real objective. Maximization enters as minimization of the
  // negated costs; the reported value is recomputed from the certificate.
  VectorR costs = VectorR::Zero(total_cols);
  const double flip = sense == LpSense::Max ? -1.0 : 1.0;
  costs.head(num_vars) = flip * objective;
  costs.segment(num_vars, num_vars) = -flip * objective;
  tableau.set_costs(costs);
  const LpStatus status = tableau.iterate(allowed, iteration_cap);
  if (status == LpStatus::Unbounded)
    return LpSolution{LpStatus::Unbounded, 0.0, {}, tableau.iterations()};

  VectorR split = VectorR::Zero(total_cols);
  for (Index i = 0; i < tableau.rows(); ++i)
    split(tableau.basis()[static_cast<std::size_t>(i)]) = tableau.rhs(i);
  VectorR point = split.head(num_vars) - split.segment(num_vars, num_vars);

  // Never return a wrong Optimal: the certificate must satisfy the input.
  if (num_constraints > 0) {
    const double worst = (a * point - b).maxCoeff();
    if (worst > 1e-8)
      throw std::runtime_error("simplex: optimum certificate violates a constraint");
  }
  return LpSolution{LpStatus::Optimal, objective.dot(point), std::move(point),
                    tableau.iterations()};
}

LpSolution solve(const LpProblem& problem) {
  if (problem.objective.size() != problem.poly.ambient_dim)
    throw std::invalid_argument("solve: objective length does not match the polyhedron");
  return solve_lp(problem.poly.constraint_matrix(), problem.poly.offsets(), problem.objective,
                  problem.sense);
}

}  // namespace polytomo
