#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "polytomo/functionals.hpp"
#include "polytomo/simulator.hpp"
#include "test_helpers.hpp"

using namespace polytomo;
using namespace polytomo::testing;

namespace {

VectorC ket(int index, Index dim) {
  VectorC v = VectorC::Zero(dim);
  v(index) = 1.0;
  return v;
}

VectorC plus_state() {
  VectorC v(2);
  v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  return v;
}

}  // namespace

TEST_CASE("fidelity to a pure state") {
  const BasisSet basis = build_pauli_basis(1);
  const AffineFunctional f = fidelity_to_pure(ket(0, 2), basis);
  CHECK(f.evaluate(embed_state(DensityMatrix::pure(ket(0, 2)), basis)) == doctest::Approx(1.0));
  const DensityMatrix mixed{MatrixC(0.5 * MatrixC::Identity(2, 2))};
  CHECK(f.evaluate(embed_state(mixed, basis)) == doctest::Approx(0.5));

  const BasisSet basis2 = build_pauli_basis(2);
  const DensityMatrix ghz = ghz_state(2);
  VectorC ghz_vec = VectorC::Zero(4);
  ghz_vec(0) = ghz_vec(3) = 1.0 / std::sqrt(2.0);
  const AffineFunctional f2 = fidelity_to_pure(ghz_vec, basis2);
  CHECK(f2.evaluate(embed_state(ghz, basis2)) == doctest::Approx(1.0));

  VectorC unnormalized(2);
  unnormalized << 1.0, 1.0;
  CHECK_THROWS_AS(fidelity_to_pure(unnormalized, basis), std::invalid_argument);
}

TEST_CASE("observable mean and outcome probability") {
  const BasisSet basis = build_pauli_basis(1);
  const AffineFunctional z_mean = observable_mean(HermitianOperator(pauli(3)), basis);
  CHECK(z_mean.evaluate(embed_state(DensityMatrix::pure(ket(0, 2)), basis)) ==
        doctest::Approx(1.0));

  const AffineFunctional unit =
      observable_mean(HermitianOperator(MatrixC(MatrixC::Identity(2, 2))), basis);
  CHECK(unit.coeffs.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(unit.offset == doctest::Approx(1.0));

  const AffineFunctional x_mean = observable_mean(HermitianOperator(pauli(1)), basis);
  CHECK(x_mean.evaluate(embed_state(DensityMatrix::pure(plus_state()), basis)) ==
        doctest::Approx(1.0));

  const AffineFunctional p0 = outcome_probability(
      Effect(MatrixC(ket(0, 2) * ket(0, 2).adjoint())), basis);
  CHECK(p0.coeffs(2) == doctest::Approx(0.5));
  CHECK(p0.offset == doctest::Approx(0.5));
}

TEST_CASE("process fidelity against the identity channel") {
  const BasisSet basis = build_pauli_basis(1);
  const ChoiMatrix target = choi_of_unitary(MatrixC::Identity(2, 2));
  const AffineFunctional f = process_fidelity_to_unitary(target, basis, basis);

  const auto value = [&](const ChoiMatrix& c) {
    return f.evaluate(embed_choi(c, basis, basis).stacked());
  };
  CHECK(value(target) == doctest::Approx(1.0));
  CHECK(value(depolarizing_channel(1, 0.1)) == doctest::Approx(0.925));
  CHECK(value(depolarizing_channel(1, 1.0)) == doctest::Approx(0.25));

  // The fully depolarizing Choi state has full rank: not a unitary target.
  CHECK_THROWS_AS(process_fidelity_to_unitary(depolarizing_channel(1, 1.0), basis, basis),
                  std::invalid_argument);
}

TEST_CASE("output observables and probabilities") {
  const BasisSet basis = build_pauli_basis(1);
  const ChoiMatrix identity = choi_of_unitary(MatrixC::Identity(2, 2));
  const DensityMatrix zero = DensityMatrix::pure(ket(0, 2));

  const AffineFunctional z_out =
      output_observable(zero, HermitianOperator(pauli(3)), basis, basis);
  const auto value = [&](const AffineFunctional& f, const ChoiMatrix& c) {
    return f.evaluate(embed_choi(c, basis, basis).stacked());
  };
  CHECK(value(z_out, identity) == doctest::Approx(1.0));
  for (double p : {0.1, 0.4}) {
    CHECK(value(z_out, depolarizing_channel(1, p)) == doctest::Approx(1.0 - p));
  }

  const AffineFunctional unit =
      output_observable(zero, HermitianOperator(MatrixC(MatrixC::Identity(2, 2))), basis, basis);
  CHECK(unit.coeffs.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(unit.offset == doctest::Approx(1.0));

  const DensityMatrix plus = DensityMatrix::pure(plus_state());
  const Effect plus_effect{MatrixC(plus_state() * plus_state().adjoint())};
  const AffineFunctional p_plus = output_probability(plus, plus_effect, basis, basis);
  CHECK(value(p_plus, identity) == doctest::Approx(1.0));
  CHECK(value(p_plus, depolarizing_channel(1, 0.1)) == doctest::Approx(0.95));

  const AffineFunctional certain =
      output_probability(plus, Effect(MatrixC(MatrixC::Identity(2, 2))), basis, basis);
  CHECK(value(certain, identity) == doctest::Approx(1.0));
}

TEST_CASE("functional forms agree with direct operator traces") {
  std::mt19937_64 rng(307);
  const BasisSet basis = build_pauli_basis(1);
  for (int rep = 0; rep < 40; ++rep) {
    const DensityMatrix rho = random_density_matrix(2, rng);
    const VectorR r = embed_state(rho, basis);
    const VectorC psi = random_pure_state(2, rng);
    CHECK(std::abs(fidelity_to_pure(psi, basis).evaluate(r) -
                   (psi.adjoint() * rho.matrix() * psi)(0).real()) <= 1e-9);
    const HermitianOperator obs = random_hermitian(2, rng);
    CHECK(std::abs(observable_mean(obs, basis).evaluate(r) -
                   trace_product_real(rho.matrix(), obs.matrix())) <= 1e-9);
  }
  for (int rep = 0; rep < 40; ++rep) {
    const ChoiMatrix choi = random_choi(2, 2, 3, rng);
    const VectorR c = embed_choi(choi, basis, basis).stacked();
    const ChoiMatrix target = choi_of_unitary(MatrixC::Identity(2, 2));
    CHECK(std::abs(process_fidelity_to_unitary(target, basis, basis).evaluate(c) -
                   trace_product_real(choi.matrix(), target.matrix()) / 4.0) <= 1e-9);
    const DensityMatrix rho_in = random_density_matrix(2, rng);
    const HermitianOperator obs = random_hermitian(2, rng);
    const double direct = trace_product_real(
        kron(rho_in.matrix().transpose(), obs.matrix()), choi.matrix());
    CHECK(std::abs(output_observable(rho_in, obs, basis, basis).evaluate(c) - direct) <= 1e-9);
  }
}

TEST_CASE("interval extraction over reference polytopes") {
  // Constant functional over any nonempty region collapses to [q, q].
  Polyhedron square;
  square.ambient_dim = 2;
  square.confidence_level = 0.8;
  for (Index i = 0; i < 2; ++i) {
    VectorR e = VectorR::Zero(2);
    e(i) = 1.0;
    square.halfspaces.push_back(HalfSpace{e, 1.0});
    square.halfspaces.push_back(HalfSpace{-e, 1.0});
  }
  const AffineFunctional constant{VectorR::Zero(2), 0.37, "constant"};
  const ConfidenceInterval flat = interval(constant, square);
  CHECK(flat.lo == doctest::Approx(0.37));
  CHECK(flat.hi == doctest::Approx(0.37));
  CHECK(flat.confidence_level == doctest::Approx(0.8));

  VectorR x_axis(2);
  x_axis << 1.0, 0.0;
  const ConfidenceInterval span = interval(AffineFunctional{x_axis, 0.0, "x"}, square);
  CHECK(span.lo == doctest::Approx(-1.0));
  CHECK(span.hi == doctest::Approx(1.0));
}

TEST_CASE("fidelity interval over an exact-frequency qpt polytope") {
  const ChoiMatrix truth = depolarizing_channel(1, 0.1);
  const MeasurementProtocol protocol = tetrahedron_pauli_qpt_protocol(1, 100000);
  const QptDataset data = run_qpt_experiment(truth, protocol, 3, /*exact=*/true);
  const Polyhedron poly = build_qpt_polytope(data, uniform_allocation(data.shape(), 0.95));
  const AffineFunctional fidelity = process_fidelity_to_unitary(
      choi_of_unitary(MatrixC::Identity(2, 2)), data.basis_in(), data.basis_out());
  const ConfidenceInterval ci = interval(fidelity, poly);
  CHECK(ci.lo <= 0.925);
  CHECK(0.925 <= ci.hi);
  CHECK(ci.hi - ci.lo < 0.2);
}

TEST_CASE("unbounded and empty regions raise dedicated errors") {
  const DensityMatrix rho = ghz_state(1);
  const std::vector<Povm> all = pauli_povms(1);
  std::vector<std::vector<std::int64_t>> counts{{700, 300}};
  const QstDataset data({all[2]}, counts, basis_for_dim(2));
  const Polyhedron poly = build_qst_polytope(data, uniform_allocation(data.shape(), 0.9));
  const AffineFunctional z_mean =
      observable_mean(HermitianOperator(pauli(1)), data.basis());
  CHECK_THROWS_AS(interval(z_mean, poly), UnboundedRegionError);

  Polyhedron empty;
  empty.ambient_dim = 1;
  empty.confidence_level = 0.5;
  VectorR plus(1), minus(1);
  plus << 1.0;
  minus << -1.0;
  empty.halfspaces.push_back(HalfSpace{plus, -1.0});
  empty.halfspaces.push_back(HalfSpace{minus, -2.0});
  VectorR k(1);
  k << 1.0;
  CHECK_THROWS_AS(interval(AffineFunctional{k, 0.0, "x"}, empty), EmptyRegionError);
}

TEST_CASE("intervals nest as the confidence level drops") {
  const DensityMatrix mixed{MatrixC(0.5 * MatrixC::Identity(2, 2))};
  const MeasurementProtocol protocol = pauli_qst_protocol(1, 5000);
  const QstDataset data = run_qst_experiment(mixed, protocol, 17, /*exact=*/true);
  const AffineFunctional z_mean = observable_mean(HermitianOperator(pauli(3)), data.basis());
  double prev_lo = -1e9;
  double prev_hi = 1e9;
  for (double cl : {0.999, 0.99, 0.9, 0.7, 0.5}) {
    const Polyhedron poly = build_qst_polytope(data, uniform_allocation(data.shape(), cl));
    const ConfidenceInterval ci = interval(z_mean, poly);
    CHECK(ci.lo >= prev_lo - 1e-12);
    CHECK(ci.hi <= prev_hi + 1e-12);
    prev_lo = ci.lo;
    prev_hi = ci.hi;
  }
}
