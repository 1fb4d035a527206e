#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "polytomo/simulator.hpp"
#include "test_helpers.hpp"

using namespace polytomo;

TEST_CASE("ghz states") {
  const DensityMatrix plus = ghz_state(1);
  CHECK(plus.matrix()(0, 1).real() == doctest::Approx(0.5));
  CHECK(trace_product_real(plus.matrix(), plus.matrix()) == doctest::Approx(1.0));

  const DensityMatrix bell = ghz_state(2);
  CHECK(bell.dim() == 4);
  CHECK(bell.matrix()(0, 3).real() == doctest::Approx(0.5));
  CHECK(bell.matrix()(1, 1).real() == doctest::Approx(0.0));
  CHECK(trace_product_real(bell.matrix(), bell.matrix()) == doctest::Approx(1.0));

  CHECK_THROWS_AS(ghz_state(0), std::invalid_argument);
}

TEST_CASE("depolarizing endpoints") {
  const ChoiMatrix id = depolarizing_channel(1, 0.0);
  CHECK((id.matrix() - choi_of_unitary(MatrixC::Identity(2, 2)).matrix())
            .cwiseAbs()
            .maxCoeff() <= 1e-12);
  CHECK_THROWS_AS(depolarizing_channel(1, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(depolarizing_channel(1, -0.1), std::invalid_argument);
}

TEST_CASE("tetrahedron inputs") {
  const auto states = tetrahedron_inputs(1);
  REQUIRE(states.size() == 4);
  for (const DensityMatrix& rho : states)
    CHECK(trace_product_real(rho.matrix(), rho.matrix()) == doctest::Approx(1.0));
  // Bloch dot products of -1/3 give pairwise overlaps (1 + a.b)/2 = 1/3.
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = a + 1; b < 4; ++b)
      CHECK(trace_product_real(states[a].matrix(), states[b].matrix()) ==
            doctest::Approx(1.0 / 3.0));

  CHECK(tetrahedron_inputs(2).size() == 16);
  // Product structure: state (i, j) = state_i (x) state_j.
  const auto two = tetrahedron_inputs(2);
  const MatrixC expect = kron(states[1].matrix(), states[2].matrix());
  CHECK((two[1 * 4 + 2].matrix() - expect).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("pauli povm family") {
  const auto povms = pauli_povms(1);
  REQUIRE(povms.size() == 3);
  for (const Povm& povm : povms) CHECK(povm.size() == 2);
  // Axis order x, y, z; + effect first.
  CHECK((povms[0][0].matrix() - 0.5 * (pauli(0) + pauli(1))).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((povms[2][1].matrix() - 0.5 * (pauli(0) - pauli(3))).cwiseAbs().maxCoeff() <= 1e-12);

  const auto two = pauli_povms(2);
  CHECK(two.size() == 9);
  for (const Povm& povm : two) CHECK(povm.size() == 4);
}

TEST_CASE("readout confusion keeps the povm valid and skews probabilities") {
  Eigen::Matrix2d nu;
  nu << 0.98, 0.05, 0.02, 0.95;
  const auto povms = pauli_povms(1, nu);  // constructor revalidates POVM closure
  VectorC zero(2);
  zero << 1.0, 0.0;
  const VectorR dist = born_distribution(DensityMatrix::pure(zero), povms[2]);
  CHECK(dist(0) == doctest::Approx(0.98));
  CHECK(dist(1) == doctest::Approx(0.02));

  Eigen::Matrix2d bad;
  bad << 0.9, 0.0, 0.2, 1.0;  // columns do not sum to one
  CHECK_THROWS_AS(pauli_povms(1, bad), std::invalid_argument);
}

TEST_CASE("born distributions for reference states") {
  const auto povms = pauli_povms(1);
  VectorC zero(2);
  zero << 1.0, 0.0;
  const VectorR z_dist = born_distribution(DensityMatrix::pure(zero), povms[2]);
  CHECK(z_dist(0) == doctest::Approx(1.0));
  CHECK(z_dist(1) == doctest::Approx(0.0));

  const VectorR x_dist = born_distribution(ghz_state(1), povms[2]);
  CHECK(x_dist(0) == doctest::Approx(0.5));
  CHECK(x_dist(1) == doctest::Approx(0.5));

  const DensityMatrix mixed{MatrixC(0.5 * MatrixC::Identity(2, 2))};
  for (const Povm& povm : povms) {
    const VectorR dist = born_distribution(mixed, povm);
    CHECK(dist(0) == doctest::Approx(0.5));
  }
}

TEST_CASE("sample_counts determinism and edge cases") {
  VectorR dist(2);
  dist << 0.3, 0.7;
  const auto zero_shots = sample_counts(dist, 0, 99);
  CHECK(zero_shots[0] == 0);
  CHECK(zero_shots[1] == 0);

  VectorR point_mass(2);
  point_mass << 1.0, 0.0;
  const auto all_first = sample_counts(point_mass, 1000, 5);
  CHECK(all_first[0] == 1000);
  CHECK(all_first[1] == 0);

  const auto a = sample_counts(dist, 10000, 42);
  const auto b = sample_counts(dist, 10000, 42);
  CHECK(a == b);
  const auto c = sample_counts(dist, 10000, 43);
  CHECK(a != c);
  CHECK(a[0] + a[1] == 10000);

  // 5-sigma sanity band around the mean.
  const double sigma = std::sqrt(10000 * 0.3 * 0.7);
  CHECK(std::abs(static_cast<double>(a[0]) - 3000.0) < 5.0 * sigma);

  VectorR invalid(2);
  invalid << 0.5, 0.4;
  CHECK_THROWS_AS(sample_counts(invalid, 10, 1), std::invalid_argument);
}

TEST_CASE("qst experiment determinism and sub-seed independence") {
  const DensityMatrix rho = ghz_state(1);
  const MeasurementProtocol protocol = pauli_qst_protocol(1, 2000);
  const QstDataset run1 = run_qst_experiment(rho, protocol, 123);
  const QstDataset run2 = run_qst_experiment(rho, protocol, 123);
  CHECK(run1.counts() == run2.counts());

  // Per-setting counts equal a direct draw with the derived sub-seed, so
  // they cannot depend on the other settings.
  for (std::size_t i = 0; i < protocol.povms.size(); ++i) {
    const VectorR dist = born_distribution(rho, protocol.povms[i]);
    const auto direct = sample_counts(dist, 2000, derive_subseed(123, i));
    CHECK(run1.counts()[i] == direct);
  }

  // Dropping the last POVM leaves earlier counts untouched.
  MeasurementProtocol shorter = protocol;
  shorter.povms.pop_back();
  const QstDataset run3 = run_qst_experiment(rho, shorter, 123);
  CHECK(run3.counts()[0] == run1.counts()[0]);
  CHECK(run3.counts()[1] == run1.counts()[1]);
}

TEST_CASE("exact-frequency mode reproduces born frequencies") {
  const DensityMatrix rho = ghz_state(1);
  const MeasurementProtocol protocol = pauli_qst_protocol(1, 1000);
  const QstDataset data = run_qst_experiment(rho, protocol, 7, /*exact=*/true);
  CHECK(data.counts()[0][0] == 1000);  // x basis: deterministic outcome
  CHECK(data.counts()[0][1] == 0);
  CHECK(data.counts()[1][0] == 500);   // y basis: balanced
  CHECK(data.counts()[2][0] == 500);   // z basis: balanced

  const MeasurementProtocol zero_shot = pauli_qst_protocol(1, 0);
  const QstDataset empty = run_qst_experiment(rho, zero_shot, 7);
  for (const auto& row : empty.counts())
    for (std::int64_t c : row) CHECK(c == 0);
}

TEST_CASE("qpt experiment concentrates near uniform for the erasing channel") {
  const ChoiMatrix choi = depolarizing_channel(1, 1.0);
  const MeasurementProtocol protocol = tetrahedron_pauli_qpt_protocol(1, 20000);
  const QptDataset data = run_qpt_experiment(choi, protocol, 31);
  const double sigma = std::sqrt(20000 * 0.25);
  for (const auto& per_input : data.settings())
    for (const QptSetting& setting : per_input)
      for (std::int64_t c : setting.counts)
        CHECK(std::abs(static_cast<double>(c) - 10000.0) < 5.0 * sigma);

  // Determinism across reruns.
  const QptDataset again = run_qpt_experiment(choi, protocol, 31);
  for (std::size_t i = 0; i < data.settings().size(); ++i)
    for (std::size_t j = 0; j < data.settings()[i].size(); ++j)
      CHECK(data.settings()[i][j].counts == again.settings()[i][j].counts);
}

TEST_CASE("protocol size caps") {
  CHECK_THROWS_AS(pauli_qst_protocol(4, 10), std::invalid_argument);
  CHECK_NOTHROW(pauli_qst_protocol(4, 10, std::nullopt, /*override=*/true));
  CHECK_THROWS_AS(tetrahedron_pauli_qpt_protocol(3, 10), std::invalid_argument);
  CHECK_THROWS_AS(pauli_qst_protocol(0, 10), std::invalid_argument);
  CHECK_THROWS_AS(pauli_qst_protocol(1, -5), std::invalid_argument);
}

TEST_CASE("experiments validate the protocol kind") {
  const DensityMatrix rho = ghz_state(1);
  const MeasurementProtocol qpt = tetrahedron_pauli_qpt_protocol(1, 10);
  CHECK_THROWS_AS(run_qst_experiment(rho, qpt, 1), std::invalid_argument);
  const MeasurementProtocol qst = pauli_qst_protocol(1, 10);
  CHECK_THROWS_AS(run_qpt_experiment(depolarizing_channel(1, 0.1), qst, 1),
                  std::invalid_argument);
}
