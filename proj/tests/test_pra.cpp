#include <cmath>
#include <optional>

#include "doctest.h"
#include "soilrf/errors.hpp"
#include "soilrf/pra.hpp"

using namespace soilrf;

namespace {

// Three points, three unknowns: cj0 is C(0); vj solves
// ln(1 + 3/vj) / ln(1 + 15/vj) = ln(C0/C3) / ln(C0/C15) by bisection.
VaractorModel exact_three_point() {
  const double c0 = 2.35, c3 = 0.970, c15 = 0.466;
  const double target = std::log(c0 / c3) / std::log(c0 / c15);
  auto g = [&](double vj) { return std::log1p(3.0 / vj) / std::log1p(15.0 / vj) - target; };
  double lo = 1e-3, hi = 100.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((g(lo) < 0) == (g(mid) < 0)) lo = mid; else hi = mid;
  }
  const double vj = 0.5 * (lo + hi);
  return {c0, vj, std::log(c0 / c3) / std::log1p(3.0 / vj)};
}

std::optional<Pattern> try_pattern(double v12, double v34) {
  try {
    return pattern_from_bias({v12, v34}).pattern;
  } catch (const NoDefinedPattern&) {
    return std::nullopt;
  }
}

}  // namespace

TEST_CASE("varactor fit passes through the datasheet points") {
  const auto& m = default_varactor();
  for (const auto& p : kVaractorPoints) {
    CHECK(std::abs(capacitance_from_bias(m, p.v) - p.pf) / p.pf < 0.05);
  }
  const VaractorModel oracle = exact_three_point();
  CHECK(m.cj0 == doctest::Approx(oracle.cj0).epsilon(1e-6));
  CHECK(m.vj == doctest::Approx(oracle.vj).epsilon(1e-4));
  CHECK(m.m == doctest::Approx(oracle.m).epsilon(1e-4));
  MESSAGE("fitted cj0 " << m.cj0 << " pF, vj " << m.vj << " V, m " << m.m);

  double prev = INFINITY;
  for (double v = 0.0; v <= kMaxBias; v += 0.25) {
    const double c = capacitance_from_bias(m, v);
    CHECK(c < prev);
    prev = c;
  }
  CHECK_THROWS_AS(capacitance_from_bias(m, -0.1), DomainError);
  CHECK_THROWS_AS(capacitance_from_bias(m, 15.1), DomainError);
}

TEST_CASE("varactor fit recovers a known law") {
  const VaractorModel truth{1.5, 1.1, 0.45};
  const std::array<CvPoint, 4> pts{{{0, truth.capacitance(0)},
                                    {2, truth.capacitance(2)},
                                    {6, truth.capacitance(6)},
                                    {12, truth.capacitance(12)}}};
  const auto fit = fit_varactor(pts);
  CHECK(fit.cj0 == doctest::Approx(truth.cj0).epsilon(1e-6));
  CHECK(fit.vj == doctest::Approx(truth.vj).epsilon(1e-4));
  CHECK(fit.m == doctest::Approx(truth.m).epsilon(1e-4));
  const std::array<CvPoint, 2> two{{{0, 2.0}, {3, 1.0}}};
  CHECK_THROWS_AS(fit_varactor(two), DomainError);
}

TEST_CASE("bias rows map to their patterns") {
  CHECK(pattern_from_bias({0, 0}).pattern == Pattern::Front);
  CHECK(pattern_from_bias({15, 15}).pattern == Pattern::Back);
  CHECK(pattern_from_bias({0, 3}).pattern == Pattern::UpperLeft);
  CHECK(pattern_from_bias({0, 15}).pattern == Pattern::Left);
  CHECK(pattern_from_bias({3, 0}).pattern == Pattern::UpperRight);
  CHECK(pattern_from_bias({15, 0}).pattern == Pattern::Right);
  for (const auto& s : pattern_table()) {
    CHECK(pattern_from_bias(bias_for(s.pattern)).pattern == s.pattern);
  }
  CHECK_THROWS_AS(pattern_from_bias({0, 7}), NoDefinedPattern);
  CHECK_THROWS_AS(pattern_from_bias({3, 3}), NoDefinedPattern);
  CHECK_THROWS_AS(pattern_from_bias({0, 16}), DomainError);
}

TEST_CASE("capacitance bands") {
  CHECK(classify_capacitance(2.35) == CapBand::High);
  CHECK(classify_capacitance(1.8) == CapBand::High);
  CHECK(classify_capacitance(1.0) == CapBand::Mid);
  CHECK(classify_capacitance(0.6) == CapBand::Low);
  CHECK_THROWS_AS(classify_capacitance(1.5), NoDefinedPattern);
  CHECK_THROWS_AS(classify_capacitance(0.65), NoDefinedPattern);
}

TEST_CASE("bias swap mirrors the pattern") {
  for (double a = 0.0; a <= kMaxBias; a += 0.125) {
    for (double b = 0.0; b <= kMaxBias; b += 0.125) {
      const auto p = try_pattern(a, b);
      const auto q = try_pattern(b, a);
      REQUIRE(p.has_value() == q.has_value());
      if (p) REQUIRE(*q == mirror(*p));
    }
  }
  CHECK(mirror(Pattern::Front) == Pattern::Front);
  CHECK(mirror(Pattern::Back) == Pattern::Back);
  for (const auto& s : pattern_table()) CHECK(mirror(mirror(s.pattern)) == s.pattern);
}

TEST_CASE("pattern names round trip") {
  for (const auto& s : pattern_table()) CHECK(parse_pattern(pattern_name(s.pattern)) == s.pattern);
  CHECK_THROWS_AS(parse_pattern("Sideways"), InputError);
}

TEST_CASE("beam gain model") {
  const auto beams = default_beams();
  const BeamModel& front = beams[0];
  CHECK(gain_toward(front, 6.0) == 5.63);
  CHECK(gain_toward(front, 6.0 + 45.0) == doctest::Approx(5.63 - 3.0));
  CHECK(gain_toward(front, 6.0 - 45.0) == doctest::Approx(5.63 - 3.0));
  CHECK(gain_toward(front, 186.0) == doctest::Approx(5.63 - 15.0));
  CHECK(gain_toward(front, 366.0) == gain_toward(front, 6.0));
  CHECK(angular_distance(350, 10) == doctest::Approx(20));
  CHECK(angular_distance(10, 350) == doctest::Approx(20));
  CHECK(angular_distance(0, 180) == doctest::Approx(180));

  for (const auto& b : beams) {
    for (double t = 0.0; t < 360.0; t += 1.0) {
      const double g = gain_toward(b, t);
      CHECK(g <= b.state.gain_max);
      CHECK(g >= b.state.gain_max - b.backlobe_suppression);
    }
  }
}

TEST_CASE("pattern selection") {
  const auto beams = default_beams();
  CHECK(select_pattern(beams, 6.0).pattern == Pattern::Front);
  CHECK(select_pattern(beams, 185.0).pattern == Pattern::Back);

  // The winner always has the largest modelled gain toward the bearing.
  for (double t = 0.0; t < 360.0; t += 0.5) {
    const auto& best = select_beam(beams, t);
    for (const auto& b : beams) CHECK(gain_toward(best, t) >= gain_toward(b, t));
  }

  // Raising every Gmax by the same amount does not change the choice.
  auto lifted = beams;
  for (auto& b : lifted) b.state.gain_max += 7.5;
  for (double t = 0.0; t < 360.0; t += 5.0) {
    CHECK(select_pattern(lifted, t).pattern == select_pattern(beams, t).pattern);
  }

  // Narrow beams separate the measured lobe directions.
  auto narrow = beams;
  for (auto& b : narrow) b.hpbw = 5.0;
  for (const auto& s : pattern_table()) {
    CHECK(select_pattern(narrow, s.theta_m).pattern == s.pattern);
  }

  const std::vector<BeamModel> none;
  CHECK_THROWS_AS(select_beam(none, 0.0), DomainError);
}

TEST_CASE("Friis link budget") {
  const double pr = friis_received_power(20, 5.63, 12, 1000, 2.45e9);
  CHECK(std::abs(pr - (-62.60)) < 0.05);
  CHECK(free_space_path_loss(1000, 2.45e9) ==
        doctest::Approx(20 * std::log10(4 * M_PI * 1000 * 2.45e9 / 299792458.0)));
  for (double d = 1.0; d < 1e5; d *= 1.37) {
    const double drop = friis_received_power(20, 5.63, 12, d, 2.45e9) -
                        friis_received_power(20, 5.63, 12, 2 * d, 2.45e9);
    CHECK(drop == doctest::Approx(20 * std::log10(2.0)).epsilon(1e-9));
    CHECK(std::abs(drop - 6.02) < 0.01);
  }
  CHECK(friis_received_power(20, 5.63, 12, 100, 2.45e9) == doctest::Approx(pr + 20));
  for (double f = 100e6; f < 10e9; f *= 1.5) {
    CHECK(friis_received_power(20, 5.63, 12, 50, 1.5 * f) < friis_received_power(20, 5.63, 12, 50, f));
  }
  CHECK_THROWS_AS(friis_received_power(20, 5.63, 12, 0.5, 2.45e9), DomainError);
  CHECK_THROWS_AS(friis_received_power(20, 5.63, 12, 0.0, 2.45e9), DomainError);
}

TEST_CASE("energy harvesting") {
  const auto& front = pattern_state(Pattern::Front);
  CHECK(harvest_energy(0.0, front, 2.45e9, 60, 0.5) == 0.0);
  const double lambda = 299792458.0 / 2.45e9;
  CHECK(lambda == doctest::Approx(0.12236).epsilon(1e-4));
  CHECK(effective_aperture(5.63, 2.45e9) == doctest::Approx(std::pow(10, 0.563) * lambda * lambda / (4 * M_PI)));
  CHECK(effective_aperture(5.63, 2.45e9) == doctest::Approx(0.004356).epsilon(1e-3));
  const double e1 = harvest_energy(1e-3, front, 2.45e9, 60, 0.5);
  CHECK(harvest_energy(1e-3, front, 2.45e9, 120, 0.5) == doctest::Approx(2 * e1));
  CHECK(harvest_energy(2e-3, front, 2.45e9, 60, 0.5) == doctest::Approx(2 * e1));
  CHECK(e1 == doctest::Approx(1e-3 * 0.004356 * 0.5 * 60).epsilon(1e-3));
  CHECK_THROWS_AS(harvest_energy(-1.0, front, 2.45e9, 60, 0.5), DomainError);
  CHECK_THROWS_AS(harvest_energy(1.0, front, 2.45e9, 60, 1.5), DomainError);
  CHECK(dbm_to_watts(20) == doctest::Approx(0.1));
  CHECK(dbm_to_watts(0) == doctest::Approx(1e-3));
}
