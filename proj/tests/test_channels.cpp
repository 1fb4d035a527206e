#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polytomo/channels.hpp"
#include "polytomo/simulator.hpp"
#include "test_helpers.hpp"

using namespace polytomo;
using polytomo::testing::random_density_matrix;
using polytomo::testing::random_kraus_set;

namespace {

// Choi state of the qubit identity channel: 2 |psi+><psi+| with the input
// factor first, |psi+> = (|00> + |11>) / sqrt(2).
MatrixC identity_choi_matrix() {
  MatrixC c = MatrixC::Zero(4, 4);
  c(0, 0) = c(0, 3) = c(3, 0) = c(3, 3) = 1.0;
  return c;
}

}  // namespace

TEST_CASE("choi of the identity qubit channel") {
  const ChoiMatrix choi = choi_of_unitary(MatrixC::Identity(2, 2));
  CHECK((choi.matrix() - identity_choi_matrix()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("choi of the depolarizing channel") {
  const double p = 0.37;
  const ChoiMatrix choi = depolarizing_channel(1, p);
  const MatrixC expected =
      (1.0 - p) * identity_choi_matrix() + (p / 2.0) * MatrixC::Identity(4, 4);
  CHECK((choi.matrix() - expected).cwiseAbs().maxCoeff() <= 1e-12);

  const ChoiMatrix fully = depolarizing_channel(1, 1.0);
  CHECK((fully.matrix() - 0.5 * MatrixC::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("choi construction rejects non-CPTP maps") {
  // Doubling map is not trace preserving.
  CHECK_THROWS_AS(
      choi_of_channel([](const MatrixC& rho) { return MatrixC(2.0 * rho); }, 2, 2),
      std::invalid_argument);
  // Transposition is positive but not completely positive.
  CHECK_THROWS_AS(
      choi_of_channel([](const MatrixC& rho) { return MatrixC(rho.transpose()); }, 2, 2),
      std::invalid_argument);
}

TEST_CASE("apply_choi recovers the channel action") {
  std::mt19937_64 rng(29);
  const ChoiMatrix identity = choi_of_unitary(MatrixC::Identity(2, 2));
  for (int rep = 0; rep < 10; ++rep) {
    const DensityMatrix rho = random_density_matrix(2, rng);
    const DensityMatrix out = apply_choi(identity, rho);
    CHECK((out.matrix() - rho.matrix()).cwiseAbs().maxCoeff() <= 1e-12);
  }

  // Depolarizing p = 0.1 on |0><0| gives diag(0.95, 0.05).
  VectorC zero(2);
  zero << 1.0, 0.0;
  const DensityMatrix out =
      apply_choi(depolarizing_channel(1, 0.1), DensityMatrix::pure(zero));
  CHECK(out.matrix()(0, 0).real() == doctest::Approx(0.95));
  CHECK(out.matrix()(1, 1).real() == doctest::Approx(0.05));
  CHECK(std::abs(out.matrix()(0, 1)) <= 1e-12);

  // Fully depolarizing sends everything to the maximally mixed state.
  const DensityMatrix mixed =
      apply_choi(depolarizing_channel(1, 1.0), random_density_matrix(2, rng));
  CHECK((mixed.matrix() - 0.5 * MatrixC::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("kraus route agrees with direct application") {
  std::mt19937_64 rng(31);
  for (Index d : {Index(2), Index(3)}) {
    const auto kraus = random_kraus_set(d, d, 3, rng);
    const ChoiMatrix choi = choi_of_kraus(kraus);
    for (int rep = 0; rep < 5; ++rep) {
      const DensityMatrix rho = random_density_matrix(d, rng);
      MatrixC direct = MatrixC::Zero(d, d);
      for (const MatrixC& k : kraus) direct += k * rho.matrix() * k.adjoint();
      const DensityMatrix via_choi = apply_choi(choi, rho);
      CHECK((via_choi.matrix() - direct).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("apply_choi rejects dimension mismatch") {
  std::mt19937_64 rng(37);
  const ChoiMatrix choi = choi_of_unitary(MatrixC::Identity(2, 2));
  CHECK_THROWS_AS(apply_choi(choi, random_density_matrix(3, rng)), std::invalid_argument);
}
