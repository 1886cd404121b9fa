#pragma once

// Lumped LC model of an N-turn complementary spiral resonator.
//
// Turns are unrolled as concentric squares with pitch (w_t + s). Each turn
// contributes one microstrip segment inductance; the tank capacitance is
// calibrated against an observed resonance and scaled across a family by
// (total slot perimeter) / w_t.

#include <Eigen/Core>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "soilrf/constants.hpp"
#include "soilrf/errors.hpp"
#include "soilrf/microstrip.hpp"

namespace soilrf {

template <typename Scalar>
using ArrayX = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
struct SpiralSpec {
  int turns;
  Scalar turn_width;    // w_t [m]
  Scalar turn_spacing;  // s [m]
  Scalar outer_side;    // [m]
  Substrate<Scalar> substrate;

  void validate() const {
    if (turns < 1) detail::throw_domain("spiral needs at least one turn");
    detail::check_positive(turn_width, "turn width");
    detail::check_positive(turn_spacing, "turn spacing");
    detail::check_positive(outer_side, "outer side");
    substrate.validate();
    if (Scalar(turns) * (turn_width + turn_spacing) > outer_side / Scalar(2) + turn_width) {
      detail::throw_domain("spiral turns do not fit inside the outer side");
    }
  }

  friend bool operator==(const SpiralSpec&, const SpiralSpec&) = default;
};

using SpiralSpecd = SpiralSpec<double>;

template <typename Scalar>
struct LCTank {
  Scalar le;  // [H]
  Scalar ce;  // [F]
};

using LCTankd = LCTank<double>;

/// Perimeter of every turn, outermost first. Strictly decreasing.
template <typename Scalar>
ArrayX<Scalar> unwound_turn_lengths(const SpiralSpec<Scalar>& spec) {
  spec.validate();
  const Scalar pitch = spec.turn_width + spec.turn_spacing;
  ArrayX<Scalar> lengths(spec.turns);
  for (int k = 0; k < spec.turns; ++k) {
    lengths[k] = Scalar(4) * (spec.outer_side - Scalar(2 * k) * pitch);
  }
  return lengths;
}

template <typename Scalar>
Scalar total_slot_perimeter(const SpiralSpec<Scalar>& spec) {
  return unwound_turn_lengths(spec).sum();
}

template <typename Scalar>
Scalar equivalent_inductance(const SpiralSpec<Scalar>& spec) {
  const ArrayX<Scalar> lengths = unwound_turn_lengths(spec);
  const Scalar eps_e = effective_permittivity(spec.substrate, spec.turn_width);
  const Scalar z0 = characteristic_impedance(spec.substrate, spec.turn_width);
  Scalar le(0);
  for (Scalar l : lengths) le += segment_inductance(z0, eps_e, l);
  return le;
}

/// f = 1 / (2 pi sqrt(Le Ce))
template <typename Scalar>
Scalar resonance_frequency(const LCTank<Scalar>& tank) {
  detail::check_positive(tank.le, "tank inductance");
  detail::check_positive(tank.ce, "tank capacitance");
  using std::sqrt;
  return Scalar(1) / (Scalar(2) * pi<Scalar> * sqrt(tank.le * tank.ce));
}

/// Capacitance that puts a tank of inductance `le` at `f_obs`.
template <typename Scalar>
Scalar calibrate_capacitance(Scalar le, Scalar f_obs) {
  detail::check_positive(le, "inductance");
  detail::check_positive(f_obs, "observed frequency");
  const Scalar omega = Scalar(2) * pi<Scalar> * f_obs;
  return Scalar(1) / (omega * omega * le);
}

/// Tanks for every member of a family, with Ce calibrated on the anchor and
/// scaled by perimeter / turn width.
template <typename Scalar>
std::vector<LCTank<Scalar>> family_tanks(std::span<const SpiralSpec<Scalar>> specs,
                                         const SpiralSpec<Scalar>& anchor, Scalar anchor_f) {
  if (specs.empty()) detail::throw_domain("resonator family is empty");
  bool found = false;
  for (const auto& s : specs) {
    if (s == anchor) found = true;
    if (!(s.substrate == anchor.substrate)) {
      detail::throw_domain("resonator family members must share the anchor substrate");
    }
  }
  if (!found) detail::throw_domain("anchor spec is not a member of the family");

  const Scalar anchor_le = equivalent_inductance(anchor);
  const Scalar anchor_ce = calibrate_capacitance(anchor_le, anchor_f);
  const Scalar anchor_shape = total_slot_perimeter(anchor) / anchor.turn_width;

  std::vector<LCTank<Scalar>> tanks;
  tanks.reserve(specs.size());
  for (const auto& s : specs) {
    if (s == anchor) {
      tanks.push_back({anchor_le, anchor_ce});
      continue;
    }
    const Scalar shape = total_slot_perimeter(s) / s.turn_width;
    tanks.push_back({equivalent_inductance(s), anchor_ce * shape / anchor_shape});
  }
  return tanks;
}

template <typename Scalar>
ArrayX<Scalar> predict_family(std::span<const SpiralSpec<Scalar>> specs,
                              const SpiralSpec<Scalar>& anchor, Scalar anchor_f) {
  const auto tanks = family_tanks(specs, anchor, anchor_f);
  ArrayX<Scalar> f(static_cast<Eigen::Index>(tanks.size()));
  for (std::size_t i = 0; i < tanks.size(); ++i) {
    f[static_cast<Eigen::Index>(i)] = resonance_frequency(tanks[i]);
  }
  return f;
}

// Reference geometries: 40 mm outer side on FR-4. The 3-turn variant uses
// 1 mm turns, the 4- and 5-turn variants 0.5 mm. Spacing equals the width.
inline constexpr double kOuterSide = 40e-3;
inline constexpr SpiralSpecd kThreeTurnCsr{3, 1.0e-3, 1.0e-3, kOuterSide, kFr4};
inline constexpr SpiralSpecd kFourTurnCsr{4, 0.5e-3, 0.5e-3, kOuterSide, kFr4};
inline constexpr SpiralSpecd kFiveTurnCsr{5, 0.5e-3, 0.5e-3, kOuterSide, kFr4};

/// Simulated resonances of the 3/4/5-turn variants [Hz].
inline constexpr double kThreeTurnResonance = 180e6;
inline constexpr double kFourTurnResonance = 102e6;
inline constexpr double kFiveTurnResonance = 86e6;

}  // namespace soilrf
