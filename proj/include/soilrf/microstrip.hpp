#pragma once

// Closed-form quasi-static microstrip analysis (Hammerstad-style formulas).
// Everything is templated on the scalar type and works in SI units.

#include <cmath>
#include <string>

#include "soilrf/constants.hpp"
#include "soilrf/errors.hpp"

namespace soilrf {

namespace detail {
template <typename Scalar>
void check_positive(Scalar value, const char* name) {
  using std::isfinite;
  if (!isfinite(value) || !(value > Scalar(0))) {
    throw_domain(std::string(name) + " must be finite and positive");
  }
}
}  // namespace detail

template <typename Scalar>
struct Substrate {
  Scalar eps_r;      // relative permittivity
  Scalar tan_delta;  // loss tangent
  Scalar h;          // thickness [m]

  void validate() const {
    using std::isfinite;
    if (!isfinite(eps_r) || eps_r < Scalar(1)) {
      detail::throw_domain("substrate eps_r must be >= 1");
    }
    if (!isfinite(tan_delta) || tan_delta < Scalar(0)) {
      detail::throw_domain("substrate tan_delta must be >= 0");
    }
    detail::check_positive(h, "substrate thickness");
  }

  friend bool operator==(const Substrate&, const Substrate&) = default;
};

using Substrated = Substrate<double>;

template <typename Scalar>
struct TraceGeometry {
  Scalar w_t;  // conductor width [m]
  Scalar l;    // conductor length [m]

  void validate() const {
    detail::check_positive(w_t, "trace width");
    detail::check_positive(l, "trace length");
  }
};

/// FR-4 board used for the soil sensor (eps_r 4.3, tan_delta 0.025, 1.6 mm).
inline constexpr Substrated kFr4{4.3, 0.025, 1.6e-3};
/// Rogers RO4003C board used for the antenna.
inline constexpr Substrated kRo4003c{3.55, 0.0027, 1.524e-3};

enum class MicrostripBranch { Narrow, Wide };

/// Narrow branch for w_t < h, wide branch otherwise (ties go to the wide one).
template <typename Scalar>
MicrostripBranch select_branch(const Substrate<Scalar>& sub, Scalar w_t) {
  return w_t < sub.h ? MicrostripBranch::Narrow : MicrostripBranch::Wide;
}

/// Effective permittivity on an explicitly chosen branch.
///
/// The second coefficient is (eps_r - 1)/2, so eps_r = 1 gives exactly 1.
template <typename Scalar>
Scalar effective_permittivity(const Substrate<Scalar>& sub, Scalar w_t,
                              MicrostripBranch branch) {
  sub.validate();
  detail::check_positive(w_t, "trace width");
  using std::sqrt;
  const Scalar u = w_t / sub.h;
  const Scalar mean = (sub.eps_r + Scalar(1)) / Scalar(2);
  const Scalar half_diff = (sub.eps_r - Scalar(1)) / Scalar(2);
  Scalar bracket = Scalar(1) / sqrt(Scalar(1) + Scalar(12) * sub.h / w_t);
  if (branch == MicrostripBranch::Narrow) {
    const Scalar d = Scalar(1) - u;
    bracket += Scalar(0.04) * d * d;
  }
  return mean + half_diff * bracket;
}

template <typename Scalar>
Scalar effective_permittivity(const Substrate<Scalar>& sub, Scalar w_t) {
  return effective_permittivity(sub, w_t, select_branch(sub, w_t));
}

/// Characteristic impedance [ohm] on an explicitly chosen branch.
template <typename Scalar>
Scalar characteristic_impedance(const Substrate<Scalar>& sub, Scalar w_t,
                                MicrostripBranch branch) {
  using std::log;
  using std::sqrt;
  const Scalar eps_e = effective_permittivity(sub, w_t, branch);
  const Scalar u = w_t / sub.h;
  if (branch == MicrostripBranch::Narrow) {
    return Scalar(60) / sqrt(eps_e) * log(Scalar(8) / u + Scalar(0.25) * u);
  }
  const Scalar denom =
      sqrt(eps_e) * (u + Scalar(1.393) + Scalar(2) / Scalar(3) * log(u + Scalar(1.444)));
  return Scalar(120) * pi<Scalar> / denom;
}

template <typename Scalar>
Scalar characteristic_impedance(const Substrate<Scalar>& sub, Scalar w_t) {
  return characteristic_impedance(sub, w_t, select_branch(sub, w_t));
}

/// L0 = Z0 sqrt(eps_e) l / c  [H]
template <typename Scalar>
Scalar segment_inductance(Scalar z0, Scalar eps_e, Scalar l) {
  detail::check_positive(z0, "line impedance");
  detail::check_positive(eps_e, "effective permittivity");
  detail::check_positive(l, "line length");
  using std::sqrt;
  return z0 * sqrt(eps_e) * l / speed_of_light<Scalar>;
}

}  // namespace soilrf
