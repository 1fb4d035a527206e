#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "polytomo/linprog.hpp"
#include "test_helpers.hpp"

using namespace polytomo;
using namespace polytomo::testing;

namespace {

Polyhedron unit_square() {
  Polyhedron poly;
  poly.ambient_dim = 2;
  poly.confidence_level = 0.5;
  for (Index i = 0; i < 2; ++i) {
    VectorR e = VectorR::Zero(2);
    e(i) = 1.0;
    poly.halfspaces.push_back(HalfSpace{e, 1.0});
    poly.halfspaces.push_back(HalfSpace{-e, 1.0});
  }
  return poly;
}

VectorR vec2(double x, double y) {
  VectorR v(2);
  v << x, y;
  return v;
}

}  // namespace

TEST_CASE("maximize over the unit square") {
  const LpSolution sol = solve(LpProblem{vec2(1, 1), unit_square(), LpSense::Max});
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.value == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(sol.point(0) == doctest::Approx(1.0));
  CHECK(sol.point(1) == doctest::Approx(1.0));
}

TEST_CASE("unbounded direction is reported") {
  Polyhedron half;
  half.ambient_dim = 1;
  half.confidence_level = 0.5;
  VectorR n(1);
  n << -1.0;
  half.halfspaces.push_back(HalfSpace{n, 0.0});  // -x <= 0
  VectorR k(1);
  k << 1.0;
  const LpSolution sol = solve(LpProblem{k, half, LpSense::Max});
  CHECK(sol.status == LpStatus::Unbounded);
  // Minimizing along the bounded side still works.
  const LpSolution min_sol = solve(LpProblem{k, half, LpSense::Min});
  REQUIRE(min_sol.status == LpStatus::Optimal);
  CHECK(min_sol.value == doctest::Approx(0.0));
}

TEST_CASE("contradictory constraints are infeasible") {
  Polyhedron empty;
  empty.ambient_dim = 1;
  empty.confidence_level = 0.5;
  VectorR plus(1), minus(1);
  plus << 1.0;
  minus << -1.0;
  empty.halfspaces.push_back(HalfSpace{plus, -1.0});   // x <= -1
  empty.halfspaces.push_back(HalfSpace{minus, -2.0});  // x >= 2
  VectorR k(1);
  k << 1.0;
  CHECK(solve(LpProblem{k, empty, LpSense::Max}).status == LpStatus::Infeasible);
}

TEST_CASE("zero objective returns a feasible certificate") {
  const LpSolution sol = solve(LpProblem{vec2(0, 0), unit_square(), LpSense::Max});
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.value == doctest::Approx(0.0));
  CHECK(sol.point.cwiseAbs().maxCoeff() <= 1.0 + 1e-9);
}

TEST_CASE("no constraints means unbounded unless the objective vanishes") {
  Polyhedron free_space;
  free_space.ambient_dim = 2;
  free_space.confidence_level = 0.5;
  CHECK(solve(LpProblem{vec2(1, 0), free_space, LpSense::Max}).status == LpStatus::Unbounded);
  CHECK(solve(LpProblem{vec2(0, 0), free_space, LpSense::Max}).status == LpStatus::Optimal);
}

TEST_CASE("min equals negated max of the negated objective") {
  std::mt19937_64 rng(211);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int rep = 0; rep < 25; ++rep) {
    const Index dim = rep % 2 == 0 ? 2 : 3;
    const Polyhedron poly = random_bounded_polytope(dim, rng);
    VectorR k(dim);
    for (Index i = 0; i < dim; ++i) k(i) = gauss(rng);
    const LpSolution lo = solve(LpProblem{k, poly, LpSense::Min});
    const LpSolution hi = solve(LpProblem{VectorR(-k), poly, LpSense::Max});
    REQUIRE(lo.status == LpStatus::Optimal);
    REQUIRE(hi.status == LpStatus::Optimal);
    CHECK(lo.value == doctest::Approx(-hi.value).epsilon(1e-9));
  }
}

TEST_CASE("optimum matches the vertex-enumeration oracle") {
  std::mt19937_64 rng(223);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int rep = 0; rep < 30; ++rep) {
    const Index dim = rep % 2 == 0 ? 2 : 3;
    const Polyhedron poly = random_bounded_polytope(dim, rng);
    VectorR k(dim);
    for (Index i = 0; i < dim; ++i) k(i) = gauss(rng);
    const LpSolution sol = solve(LpProblem{k, poly, LpSense::Max});
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.value == doctest::Approx(vertex_oracle_extreme(poly, k, true)).epsilon(1e-8));
    // Certificate invariants.
    CHECK((poly.constraint_matrix() * sol.point - poly.offsets()).maxCoeff() <= 1e-8);
    CHECK(std::abs(k.dot(sol.point) - sol.value) <= 1e-8);
  }
}

TEST_CASE("weak duality against rejection-sampled interior points") {
  std::mt19937_64 rng(227);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> box(-2.0, 2.0);
  for (int rep = 0; rep < 5; ++rep) {
    const Polyhedron poly = random_bounded_polytope(3, rng);
    VectorR k(3);
    for (Index i = 0; i < 3; ++i) k(i) = gauss(rng);
    const LpSolution sol = solve(LpProblem{k, poly, LpSense::Max});
    REQUIRE(sol.status == LpStatus::Optimal);
    const MatrixR a = poly.constraint_matrix();
    const VectorR b = poly.offsets();
    int kept = 0;
    while (kept < 100) {
      VectorR x(3);
      for (Index i = 0; i < 3; ++i) x(i) = box(rng);
      if (((a * x - b).array() <= 0.0).all()) {
        CHECK(k.dot(x) <= sol.value + 1e-9);
        ++kept;
      }
    }
  }
}

TEST_CASE("identical inputs give identical solutions") {
  std::mt19937_64 rng(229);
  const Polyhedron poly = random_bounded_polytope(3, rng);
  VectorR k(3);
  k << 0.3, -1.2, 0.7;
  const LpSolution first = solve(LpProblem{k, poly, LpSense::Max});
  const LpSolution second = solve(LpProblem{k, poly, LpSense::Max});
  REQUIRE(first.status == LpStatus::Optimal);
  CHECK(first.value == second.value);
  CHECK((first.point - second.point).cwiseAbs().maxCoeff() == 0.0);
  CHECK(first.iterations == second.iterations);
}

TEST_CASE("objective length must match the polyhedron") {
  CHECK_THROWS_AS(solve(LpProblem{VectorR::Zero(3), unit_square(), LpSense::Max}),
                  std::invalid_argument);
}
