#pragma once

#include <numbers>

namespace soilrf {

template <typename Scalar = double>
inline constexpr Scalar speed_of_light = Scalar(299792458.0);

template <typename Scalar = double>
inline constexpr Scalar pi = std::numbers::pi_v<Scalar>;

inline constexpr double kMilli = 1e-3;
inline constexpr double kMega = 1e6;
inline constexpr double kGiga = 1e9;
inline constexpr double kNano = 1e-9;
inline constexpr double kPico = 1e-12;

}  // namespace soilrf
