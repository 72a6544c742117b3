#include <doctest.h>

#include <random>

#include "cavitygate/verifier.hpp"
#include "oracle.hpp"

using namespace cavitygate;

TEST_SUITE("verifier") {

TEST_CASE("single-qubit examples") {
  CHECK(max_entry_deviation(single_qubit_u<double>({}), CMatrix2d::Identity()) < 1e-15);
  CMatrix2d x;
  x << 0, 1, 1, 0;
  CHECK(max_entry_deviation(single_qubit_u<double>({kPi / 2, 0, kPi, kPi}), x) < 1e-15);
  CMatrix2d y;
  y << 0, Complex<double>(0, -1), Complex<double>(0, 1), 0;
  CHECK(max_entry_deviation(single_qubit_u<double>({kPi / 2, 0, kPi, 0}), y) < 1e-15);
}

TEST_CASE("single-qubit unitarity, determinant and the written-out form") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 200; ++k) {
    const GateParams p = oracle::random_params(rng);
    const CMatrix2d u = single_qubit_u<double>(p);
    CHECK(unitarity_defect(u) < 1e-13);
    CHECK(std::abs(u.determinant() - std::polar(1.0, 2 * p.alpha)) < 1e-12);
    CHECK(max_entry_deviation(u, oracle::euler(p)) < 1e-14);
  }
}

TEST_CASE("ideal controlled-U") {
  const auto cnot = ideal_controlled_u(2, {kPi / 2, 0, kPi, kPi});
  CMatrixXd expected = CMatrixXd::Zero(4, 4);
  expected(0, 0) = expected(1, 1) = expected(2, 3) = expected(3, 2) = 1;
  CHECK(max_entry_deviation(cnot.matrix, expected) < 1e-15);
  CHECK(max_entry_deviation(ideal_controlled_u(2, {}).matrix, CMatrixXd::Identity(4, 4)) == 0.0);

  std::mt19937_64 rng(9);
  for (int k = 0; k < 200; ++k) {
    const int n = 2 + k % 4;
    const auto g = ideal_controlled_u(n, oracle::random_params(rng));
    const Index dim = Index{1} << n;
    CMatrixXd m = g.matrix;
    m.bottomRightCorner(2, 2) = CMatrix2d::Identity();
    CHECK(max_entry_deviation(m, CMatrixXd::Identity(dim, dim)) == 0.0);
  }
  CHECK_THROWS_AS(ideal_controlled_u(1, {}), std::invalid_argument);
}

TEST_CASE("computational extraction") {
  const HilbertLayout layout(2, 2);
  const auto id = extract_computational_gate(OperatorMatrix<double>::identity(layout));
  CHECK(max_entry_deviation(id.matrix, CMatrixXd::Identity(4, 4)) == 0.0);
  CHECK(id.leakage == 0.0);

  const auto u1 = embed(layout, drive_local<double>(2, DriveSpec{0, Transition::OneTwo, -kPi / 2, kPi}), true);
  const auto shelved = extract_computational_gate(u1);
  CHECK(shelved.leakage == doctest::Approx(1.0));
  CHECK(shelved.matrix.col(2).norm() < 1e-15);
  CHECK(shelved.matrix.col(3).norm() < 1e-15);
  CHECK(std::abs(shelved.matrix(0, 0) - 1.0) < 1e-15);

  CHECK_THROWS_AS(extract_computational_gate(CMatrixXd(CMatrixXd::Identity(4, 4)), layout), std::invalid_argument);
}

TEST_CASE("gate distance") {
  const auto ideal = ideal_controlled_u(2, {0.3, 1.0, 2.0, -0.5});
  const auto same = gate_distance(ideal.matrix, ideal);
  CHECK(same.max_entry_error == 0.0);
  CHECK(same.phase_sensitive_fidelity == doctest::Approx(1.0).epsilon(1e-15));

  const auto flipped = gate_distance(CMatrixXd(-ideal.matrix), ideal);
  CHECK(flipped.phase_sensitive_fidelity == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(flipped.max_entry_error == doctest::Approx(2 * ideal.matrix.cwiseAbs().maxCoeff()));

  // Zeroing column j removes ideal^dagger_j . ideal_j = 1 from a trace of 4.
  CMatrixXd dropped = ideal.matrix;
  dropped.col(1).setZero();
  CHECK(gate_distance(dropped, ideal).phase_sensitive_fidelity == doctest::Approx(0.75).epsilon(1e-14));

  CHECK_THROWS_AS(gate_distance(CMatrixXd(CMatrixXd::Identity(2, 2)), ideal), std::invalid_argument);
}

TEST_CASE("residues") {
  const HilbertLayout layout(2, 1);
  CMatrixXd images = CMatrixXd::Zero(layout.dimension(), 4);
  for (unsigned b = 0; b < 4; ++b) images(computational_index(layout, b), b) = 1;
  auto r = residues(images, layout);
  CHECK(r.cavity == 0.0);
  CHECK(r.level2 == 0.0);
  images(layout.index_of(std::vector<int>{0, 0}, 1), 0) = 0.3;
  images(layout.index_of(std::vector<int>{2, 1}, 0), 3) = 0.2;
  r = residues(images, layout);
  CHECK(r.cavity == doctest::Approx(0.3));
  CHECK(r.level2 == doctest::Approx(0.2));
}

}
