#include <doctest.h>

#include "cavitygate/hilbert.hpp"

using namespace cavitygate;

TEST_SUITE("hilbert") {

TEST_CASE("dimension is 3^n (N+1)") {
  CHECK(build_layout(1, 1).dimension() == 6);
  CHECK(build_layout(3, 1).dimension() == 54);
  CHECK(build_layout(5, 2).dimension() == 729);
  CHECK_THROWS_AS(build_layout(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_layout(2, 0), std::invalid_argument);
}

TEST_CASE("index round trip over the whole space") {
  for (int n = 1; n <= 4; ++n)
    for (int cutoff = 1; cutoff <= 3; ++cutoff) {
      const HilbertLayout layout(n, cutoff);
      for (Index i = 0; i < layout.dimension(); ++i) {
        const auto levels = layout.levels_of(i);
        REQUIRE(layout.index_of(levels, layout.photons_of(i)) == i);
      }
    }
}

TEST_CASE("basis states") {
  const HilbertLayout one(1, 1);
  const auto e0 = basis_state<double>(one, {0}, 0);
  CHECK(e0[0] == Complex<double>(1));
  CHECK(e0.squared_norm() == doctest::Approx(1));

  const HilbertLayout two(2, 1);
  const auto s = basis_state<double>(two, {1, 0}, 0);
  // |10>|0>: level code 1*3 + 0 = 3, times cavity dim 2
  CHECK(s[6] == Complex<double>(1));
  CHECK(s.squared_norm() == doctest::Approx(1));
  CHECK(two.ket(6) == "|10>|0>_c");

  CHECK_THROWS_AS(basis_state<double>(two, {1}, 0), std::invalid_argument);
  CHECK_THROWS_AS(basis_state<double>(two, {3, 0}, 0), std::invalid_argument);
  CHECK_THROWS_AS(basis_state<double>(two, {0, 0}, 2), std::invalid_argument);
}

TEST_CASE("embed_local") {
  const HilbertLayout layout(1, 1);
  const auto id = embed_local<double>(layout, Site::system(0), CMatrixXd::Identity(3, 3));
  CHECK(max_entry_deviation(id.entries(), CMatrixXd::Identity(6, 6)) == 0.0);

  CMatrixXd raise = CMatrixXd::Zero(3, 3);
  raise(2, 0) = 1;
  const auto up = embed_local<double>(layout, Site::system(0), raise) * basis_state<double>(layout, {0}, 0);
  CHECK(std::abs(up[layout.index_of(std::vector<int>{2}, 0)] - 1.0) == 0.0);

  CMatrixXd a = CMatrixXd::Zero(2, 2);
  a(0, 1) = 1;
  const auto lower = embed_local<double>(layout, Site::cavity(), a);
  const auto from_one = lower * basis_state<double>(layout, {0}, 1);
  const auto from_zero = lower * basis_state<double>(layout, {0}, 0);
  CHECK(std::abs(from_one[0] - 1.0) == 0.0);
  CHECK(from_zero.squared_norm() == 0.0);

  CHECK_THROWS_AS(embed_local<double>(layout, Site::cavity(), CMatrixXd::Identity(3, 3)), std::invalid_argument);
  CHECK_THROWS_AS(embed_local<double>(layout, Site::system(1), CMatrixXd::Identity(3, 3)), std::out_of_range);
}

TEST_CASE("operators on disjoint sites commute") {
  const HilbertLayout layout(3, 2);
  CMatrixXd a = CMatrixXd::Random(3, 3), b = CMatrixXd::Random(3, 3), c = CMatrixXd::Random(3, 3);
  const auto ea = embed_local<double>(layout, Site::system(0), a);
  const auto eb = embed_local<double>(layout, Site::system(2), b);
  const auto ec = embed_local<double>(layout, Site::cavity(), c);
  CHECK(max_entry_deviation((ea * eb).entries(), (eb * ea).entries()) < 1e-13);
  CHECK(max_entry_deviation((ea * ec).entries(), (ec * ea).entries()) < 1e-13);
}

TEST_CASE("structured block application equals its dense embedding") {
  const HilbertLayout layout(3, 2);
  for (int system = 0; system < 3; ++system) {
    SystemCavityOperator<double> op{system, CMatrixXd::Random(9, 9)};
    const auto dense = embed(layout, op, false);
    CMatrixXd states = CMatrixXd::Random(layout.dimension(), 4);
    const CMatrixXd expected = dense.entries() * states;
    apply_in_place(layout, op, states);
    CHECK(max_entry_deviation(states, expected) < 1e-13);
  }
}

}
