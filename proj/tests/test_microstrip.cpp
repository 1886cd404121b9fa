#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "soilrf/microstrip.hpp"

using namespace soilrf;

namespace {

constexpr double kC = 299792458.0;

// Hammerstad-Jensen (1980) synthesis formulas, used only as an outside
// reference for the simpler closed forms under test.
double hj_eps_eff(double eps_r, double u) {
  const double a = 1.0 + std::log((std::pow(u, 4) + std::pow(u / 52.0, 2)) / (std::pow(u, 4) + 0.432)) / 49.0 +
                   std::log(1.0 + std::pow(u / 18.1, 3)) / 18.7;
  const double b = 0.564 * std::pow((eps_r - 0.9) / (eps_r + 3.0), 0.053);
  return (eps_r + 1.0) / 2.0 + (eps_r - 1.0) / 2.0 * std::pow(1.0 + 10.0 / u, -a * b);
}

double hj_z0(double eps_r, double u) {
  const double f = 6.0 + (2.0 * std::numbers::pi - 6.0) * std::exp(-std::pow(30.666 / u, 0.7528));
  const double z01 = 60.0 * std::log(f / u + std::sqrt(1.0 + 4.0 / (u * u)));
  return z01 / std::sqrt(hj_eps_eff(eps_r, u));
}

}  // namespace

TEST_CASE("air substrate gives unit effective permittivity") {
  const Substrated air{1.0, 0.0, 1.6e-3};
  for (double w : {0.05e-3, 0.5e-3, 1.6e-3, 3e-3, 50e-3}) {
    CHECK(effective_permittivity(air, w) == 1.0);
  }
}

TEST_CASE("FR-4, h = 1.6 mm, w = 1 mm") {
  const double eps_e = effective_permittivity(kFr4, 1e-3);
  const double z0 = characteristic_impedance(kFr4, 1e-3);
  // Hand evaluation: 2.65 + 1.65 (1/sqrt(20.2) + 0.04 * 0.375^2).
  CHECK(eps_e == doctest::Approx(3.026401431579237).epsilon(1e-12));
  CHECK(eps_e == doctest::Approx(3.027).epsilon(1e-3));
  CHECK(z0 == doctest::Approx(88.3477754312914).epsilon(1e-12));
  CHECK(z0 == doctest::Approx(88.3).epsilon(1e-3));

  // Within a couple of percent of the Hammerstad-Jensen reference.
  const double u = 1.0 / 1.6;
  CHECK(eps_e == doctest::Approx(hj_eps_eff(4.3, u)).epsilon(0.01));
  CHECK(z0 == doctest::Approx(hj_z0(4.3, u)).epsilon(0.02));
}

TEST_CASE("50-ohm geometry on FR-4 lands near 50 ohm") {
  // w/h ~ 1.9 is the textbook 50-ohm line on eps_r 4.3.
  const double z0 = characteristic_impedance(kFr4, 1.9 * kFr4.h);
  CHECK(z0 == doctest::Approx(50.0).epsilon(0.05));
  CHECK(z0 == doctest::Approx(hj_z0(4.3, 1.9)).epsilon(0.02));
}

TEST_CASE("wide-strip limit approaches eps_r from below") {
  double prev = 0.0;
  for (double u : {1.0, 10.0, 100.0, 1e4, 1e6}) {
    const double e = effective_permittivity(kFr4, u * kFr4.h);
    CHECK(e > prev);
    CHECK(e < kFr4.eps_r);
    prev = e;
  }
  CHECK(prev == doctest::Approx(kFr4.eps_r).epsilon(1e-2));
}

TEST_CASE("branch continuity at w = h") {
  for (double eps_r : {1.0, 2.2, 3.55, 4.3, 10.2}) {
    const Substrated sub{eps_r, 0.0, 1.6e-3};
    const double w = sub.h;
    CHECK(effective_permittivity(sub, w, MicrostripBranch::Narrow) ==
          effective_permittivity(sub, w, MicrostripBranch::Wide));
    const double zn = characteristic_impedance(sub, w, MicrostripBranch::Narrow);
    const double zw = characteristic_impedance(sub, w, MicrostripBranch::Wide);
    CHECK(std::abs(zn - zw) / zw < 0.01);
    CHECK(select_branch(sub, w) == MicrostripBranch::Wide);
    CHECK(characteristic_impedance(sub, w) == zw);
  }
}

TEST_CASE("doubling a narrow strip lowers Z0") {
  for (double w = 0.05e-3; w < 0.8e-3; w *= 1.3) {
    CHECK(characteristic_impedance(kFr4, 2 * w) < characteristic_impedance(kFr4, w));
  }
}

TEST_CASE("monotonicity over random geometries") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> eps(1.0, 12.0), h(0.1e-3, 3e-3), logw(std::log(0.01e-3), std::log(30e-3));
  for (int i = 0; i < 1000; ++i) {
    const Substrated sub{eps(rng), 0.01, h(rng)};
    double w1 = std::exp(logw(rng)), w2 = std::exp(logw(rng));
    if (w1 > w2) std::swap(w1, w2);
    if (w1 == w2) continue;
    const double e1 = effective_permittivity(sub, w1), e2 = effective_permittivity(sub, w2);
    REQUIRE(e1 >= 1.0);
    REQUIRE(e2 <= sub.eps_r);
    REQUIRE(e1 <= e2);
    REQUIRE(characteristic_impedance(sub, w1) > characteristic_impedance(sub, w2));
  }
}

TEST_CASE("segment inductance") {
  CHECK(segment_inductance(50.0, 1.0, 0.299792458) == doctest::Approx(50e-9).epsilon(1e-12));
  const double base = segment_inductance(60.0, 2.0, 0.05);
  CHECK(segment_inductance(60.0, 8.0, 0.05) == doctest::Approx(2 * base).epsilon(1e-12));
  CHECK(segment_inductance(120.0, 2.0, 0.05) == doctest::Approx(2 * base).epsilon(1e-12));
  CHECK(segment_inductance(60.0, 2.0, 0.15) == doctest::Approx(3 * base).epsilon(1e-12));
  // 88.3 * sqrt(3.027) * 0.1 / c
  CHECK(segment_inductance(88.3, 3.027, 0.10) == doctest::Approx(88.3 * std::sqrt(3.027) * 0.1 / kC));
  CHECK(segment_inductance(88.3, 3.027, 0.10) == doctest::Approx(51.2e-9).epsilon(1e-3));
}

TEST_CASE("single precision instantiation") {
  const Substrate<float> sub{4.3f, 0.025f, 1.6e-3f};
  CHECK(effective_permittivity(sub, 1e-3f) == doctest::Approx(3.0264).epsilon(1e-4));
  CHECK(characteristic_impedance(sub, 1e-3f) == doctest::Approx(88.348).epsilon(1e-4));
}

TEST_CASE("invalid inputs raise DomainError") {
  CHECK_THROWS_AS(effective_permittivity(kFr4, 0.0), DomainError);
  CHECK_THROWS_AS(effective_permittivity(kFr4, -1e-3), DomainError);
  CHECK_THROWS_AS(effective_permittivity(kFr4, std::nan("")), DomainError);
  CHECK_THROWS_AS(characteristic_impedance(Substrated{0.5, 0.0, 1e-3}, 1e-3), DomainError);
  CHECK_THROWS_AS(characteristic_impedance(Substrated{4.3, -0.1, 1e-3}, 1e-3), DomainError);
  CHECK_THROWS_AS(characteristic_impedance(Substrated{4.3, 0.0, 0.0}, 1e-3), DomainError);
  CHECK_THROWS_AS(segment_inductance(0.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(segment_inductance(50.0, -1.0, 1.0), DomainError);
  CHECK_THROWS_AS(segment_inductance(50.0, 1.0, double(INFINITY)), DomainError);
}
