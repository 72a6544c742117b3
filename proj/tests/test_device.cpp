#include <doctest.h>

#include "cavitygate/config.hpp"
#include "cavitygate/device.hpp"

using namespace cavitygate;
using namespace cavitygate::device;

namespace {

DeviceBundle table() { return load_device_file(CAVITYGATE_DATA_DIR "/squid_cavity_device.yaml"); }

// hbar g written out with the reduced constant and h nu_c under the root.
double coupling_by_hand(const DeviceBundle& d, double x) {
  const double h = 6.62607015e-34, e = 1.602176634e-19;
  const double hbar = h / (2 * 3.14159265358979323846);
  const double phi0 = h / (2 * e);
  const double root = std::sqrt(h * d.cavity.nu_c / (d.cavity.L0 * d.cavity.length));
  return d.cavity.M_sc / d.squid.L * root * d.squid.phi_20 * phi0 *
         std::sin(2 * 3.14159265358979323846 * x / d.cavity.wavelength) / hbar;
}

}  // namespace

TEST_SUITE("device") {

TEST_CASE("coupling constant") {
  const auto d = table();
  CHECK(coupling_g(d.squid, d.cavity, 0) == 0.0);
  const double x = antinode_position(d.cavity);
  const double g = coupling_g(d.squid, d.cavity, x);
  CHECK(g == doctest::Approx(coupling_by_hand(d, x)).epsilon(1e-12));
  CHECK(std::abs(g / 5.8e9 - 1) < 0.10);

  auto doubled = d.cavity;
  doubled.M_sc *= 2;
  CHECK(coupling_g(d.squid, doubled, x) == doctest::Approx(2 * g).epsilon(1e-14));

  for (int k = 0; k < 5; ++k) {
    const double anti = antinode_position(d.cavity, k);
    CHECK(std::abs(coupling_g(d.squid, d.cavity, anti)) == doctest::Approx(g).epsilon(1e-12));
    CHECK(std::abs(coupling_g(d.squid, d.cavity, anti + d.cavity.wavelength / 4)) < 1e-6 * g);
    CHECK(std::abs(coupling_g(d.squid, d.cavity, anti + 0.01 * d.cavity.wavelength)) < std::abs(g));
  }
  CHECK_THROWS_AS(coupling_g(d.squid, d.cavity, -1e-3), std::invalid_argument);
  CHECK_THROWS_AS(coupling_g(d.squid, d.cavity, d.cavity.length * 1.01), std::invalid_argument);
}

TEST_CASE("rabi frequency") {
  const auto d = table();
  CHECK(rabi_frequency(d.squid, 0) == 0.0);
  CHECK(rabi_frequency(d.squid, 2e-15) == doctest::Approx(2 * rabi_frequency(d.squid, 1e-15)));
  const double omega = kPi / 0.5e-9;
  const double flux = flux_for_rabi(d.squid, omega);
  CHECK(rabi_frequency(d.squid, flux) * 0.5e-9 == doctest::Approx(kPi).epsilon(1e-14));
  const double hbar = 6.62607015e-34 / (2 * kPi), phi0 = 6.62607015e-34 / (2 * 1.602176634e-19);
  CHECK(flux == doctest::Approx(omega * 240e-12 * hbar / (2.6e-2 * phi0)).epsilon(1e-12));
}

TEST_CASE("total time") {
  const TimingParams t{0.5e-9, 3.4e-9, 3.4e-9, 0, 0};
  CHECK(total_time(2, {}, t) == doctest::Approx(4 * t.tau_c1));
  CHECK(total_time(5, {}, t) == doctest::Approx(10 * t.tau_c1));

  // n = 5, alpha = pi, beta = delta = 2 pi, gamma = 4 pi, tau_a = tau_uw = tau_c1:
  // (10 + 2) 0.5 + 2 pi 3.4 + 4 pi 3.4 + 19 0.5 + 4 0.5 = 81.588 ns
  const TimingParams full{0.5e-9, 3.4e-9, 3.4e-9, 0.5e-9, 0.5e-9};
  const GateParams longest{kPi, 2 * kPi, 4 * kPi, 2 * kPi};
  CHECK(total_time(5, longest, full) == doctest::Approx(6e-9 + 6 * kPi * 3.4e-9 + 9.5e-9 + 2e-9).epsilon(1e-12));
  CHECK(std::abs(total_time(5, longest, full) / 81.1e-9 - 1) < 0.05);

  const GateParams mirrored{-kPi, -2 * kPi, 4 * kPi, -2 * kPi};
  CHECK(total_time(5, mirrored, full) == doctest::Approx(total_time(5, longest, full)));
  CHECK_THROWS_AS(total_time(1, {}, t), std::invalid_argument);
}

TEST_CASE("total time is monotone in every input") {
  const TimingParams base{0.5e-9, 3.4e-9, 3.4e-9, 0.2e-9, 0.1e-9};
  const GateParams p{0.5, -1.0, 2.0, 1.5};
  const double ref = total_time(3, p, base);
  CHECK(total_time(4, p, base) > ref);
  CHECK(total_time(3, {0.6, -1.0, 2.0, 1.5}, base) > ref);
  CHECK(total_time(3, {0.5, -1.1, 2.0, 1.5}, base) > ref);
  CHECK(total_time(3, {0.5, -1.0, 2.1, 1.5}, base) > ref);
  CHECK(total_time(3, {0.5, -1.0, 2.0, 1.6}, base) > ref);
  auto more = base;
  more.tau_a *= 2;
  CHECK(total_time(3, p, more) > ref);
  more = base;
  more.tau_uw *= 2;
  CHECK(total_time(3, p, more) > ref);
}

TEST_CASE("unit times from couplings") {
  const double g = 5.8e9;
  const auto t = timing_from_couplings(g, CouplingTable::uniform(2, g), 1e-9, 2e-9);
  CHECK(t.tau_c1 == doctest::Approx(kPi / g));
  CHECK(t.tau_c2 == doctest::Approx(20 / g));
  CHECK(t.tau_c3 == doctest::Approx(20 / g));
  CHECK(std::abs(t.tau_c2 / 3.4e-9 - 1) < 0.05);
  CHECK(t.tau_a == 1e-9);
  CHECK(t.tau_uw == 2e-9);
  CHECK_THROWS_AS(timing_from_couplings(0, CouplingTable::uniform(2, g), 0, 0), std::invalid_argument);
}

TEST_CASE("step counts") {
  const auto c5 = step_counts(5);
  CHECK(c5.this_work == 21);
  CHECK(c5.barenco == 29);
  CHECK(c5.bergholm == 32);
  const auto c4 = step_counts(4);
  CHECK(c4.this_work == 19);
  CHECK(c4.barenco == 13);
  CHECK(c4.bergholm == 16);
  const auto c3 = step_counts(3);
  CHECK(c3.this_work == 17);
  CHECK(c3.barenco == 5);
  CHECK(c3.bergholm == 8);
  for (int n = 3; n <= 12; ++n) CHECK((step_counts(n).this_work < step_counts(n).barenco) == (n >= 5));
  CHECK(crossover(3, 12) == 5);
  CHECK(crossover(3, 4) == 0);
  CHECK_THROWS_AS(step_counts(2), std::invalid_argument);
}

TEST_CASE("leakage estimate") {
  const double g = 2e9;
  CHECK(leakage_estimate(g, 0) == 1.0);
  CHECK(leakage_estimate(g, g) == doctest::Approx(0.5));
  CHECK(leakage_estimate(g, 10 * g) == doctest::Approx(1.0 / 101));
  CHECK(leakage_estimate(g, -3 * g) == leakage_estimate(g, 3 * g));
  double prev = 2;
  for (int k = 0; k <= 400; ++k) {
    const double p = leakage_estimate(g, 0.05 * k * g);
    CHECK(p < prev);
    prev = p;
  }
  CHECK_THROWS_AS(leakage_estimate(0, 1), std::invalid_argument);
}

TEST_CASE("dipole mutual inductance") {
  const double s = 2e-8, d = 5.25e-3;
  const double m = mutual_inductance_dipole(s, s, d, LoopGeometry::Coplanar);
  CHECK(m == doctest::Approx(1e-7 * s * s / (d * d * d)).epsilon(1e-9));
  CHECK(m == doctest::Approx(2.76e-16).epsilon(0.01));
  CHECK(mutual_inductance_dipole(s, s, 2 * d, LoopGeometry::Coplanar) == doctest::Approx(m / 8));
  CHECK(mutual_inductance_dipole(s, s, d, LoopGeometry::Coaxial) == doctest::Approx(2 * m));
  CHECK(m / 100e-12 < 1e-3);
  CHECK_THROWS_AS(mutual_inductance_dipole(s, s, 1e-4, LoopGeometry::Coplanar), std::domain_error);
  CHECK_THROWS_AS(mutual_inductance_dipole(0, s, d, LoopGeometry::Coplanar), std::invalid_argument);
}

TEST_CASE("decoherence margins") {
  const auto d = table();
  CHECK(d.cavity.kappa_inv() == doctest::Approx(6e4 / (2 * kPi * 11.4e9)));
  CHECK(std::abs(d.cavity.kappa_inv() / 0.8e-6 - 1) < 0.10);
  const auto m = decoherence_margin(81.1e-9, d.squid, d.cavity);
  CHECK(m.ratio_gamma2 == doctest::Approx(81.1e-9 / 3.2e-6));
  CHECK(m.ratio_gamma2 == doctest::Approx(0.025).epsilon(0.02));
  CHECK(m.pass);
  const auto zero = decoherence_margin(0, d.squid, d.cavity);
  CHECK(zero.ratio_gamma2 == 0.0);
  CHECK(zero.ratio_kappa == 0.0);
  CHECK(zero.pass);
  CHECK_FALSE(decoherence_margin(1e-6, d.squid, d.cavity).pass);
}

TEST_CASE("parameter validation") {
  const auto d = table();
  CHECK_NOTHROW(validate(d.squid));
  CHECK_NOTHROW(validate(d.cavity));
  auto bad = d.squid;
  bad.L = 0;
  bad.phi_20 = -1;
  try {
    validate(bad);
    FAIL("expected an exception");
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    CHECK(what.find("L") != std::string::npos);
    CHECK(what.find("phi_20") != std::string::npos);
  }
}

}
