#pragma once

// Synthetic |S11| traces with a single Lorentzian notch, and dip detection.

#include <Eigen/Core>
#include <cstdint>

namespace soilrf {

struct NotchModel {
  double f0;             // [Hz]
  double bandwidth_3db;  // [Hz]
  double depth;          // [dB], negative
  double floor;          // [dB], off-resonance level, <= 0

  void validate() const;

  /// Notch contribution in dB at frequency f (depth at f0, depth/2 at f0 +- BW/2).
  double notch_db(double f) const;
  double magnitude_db(double f) const { return floor + notch_db(f); }
};

/// Default unloaded sensor: 170 MHz, 4 MHz wide, 25 dB deep.
NotchModel default_unloaded_notch();

/// Same notch, moved to f0 and deepened by loss: depth * (1 + k * eps_imag).
NotchModel loaded_notch(const NotchModel& base, double f0, double eps_imag, double loss_k);

struct S11Trace {
  Eigen::ArrayXd freqs;   // [Hz], uniform and strictly increasing
  Eigen::ArrayXd mag_db;  // [dB]

  void validate() const;
  double step() const { return freqs[1] - freqs[0]; }
};

S11Trace synthesize_trace(const NotchModel& model, double f_start, double f_stop, int points,
                          double noise_std_db, std::uint64_t seed);

/// Global minimum refined by a three-point parabola. The off-resonance level
/// is taken as the trace median; a minimum less than `min_depth` below it
/// raises NoDipError.
double find_resonance(const S11Trace& trace, double min_depth);

/// Largest |f_hat - f0| over `trials` measurements with Gaussian frequency
/// jitter sigma_f. Each measurement is a noiseless sweep centred on the
/// nominal f0 followed by find_resonance.
double repeatability_check(const NotchModel& model, double sigma_f, int trials,
                           std::uint64_t seed);

inline constexpr double kRepeatabilityBound = 5e6;
inline constexpr double kDefaultFrequencyJitter = 2e6;

}  // namespace soilrf
