#pragma once

// Soil calibration, frequency <-> VWC inversion and sensor metrics.

#include <string>
#include <utility>
#include <vector>

#include "soilrf/interpolation.hpp"

namespace soilrf {

/// Volumetric water content [%] from dry-soil and water weights.
double vwc_from_weights(double w_dry, double w_water);

struct Permittivity {
  double real;
  double imag;
};

struct SoilRow {
  double vwc;  // [%]
  double eps_real;
  double eps_imag;
};

class SoilCalibrationTable {
 public:
  explicit SoilCalibrationTable(std::vector<SoilRow> rows);

  const std::vector<SoilRow>& rows() const { return rows_; }
  double min_vwc() const { return rows_.front().vwc; }
  double max_vwc() const { return rows_.back().vwc; }

  /// Independent linear interpolation of both components.
  Permittivity permittivity_at(double vwc) const;

 private:
  std::vector<SoilRow> rows_;
  PiecewiseLinear real_;
  PiecewiseLinear imag_;
};

/// Sand permittivity ladder at 130 MHz, 0..30 % VWC in 5 % steps.
const SoilCalibrationTable& default_soil_table();

inline Permittivity permittivity_at_vwc(const SoilCalibrationTable& table, double vwc) {
  return table.permittivity_at(vwc);
}

struct CalibrationAnchor {
  double vwc;    // [%]
  double f_res;  // [Hz]
};

/// Monotone piecewise-linear VWC -> resonance map. Frequency strictly
/// decreases with VWC.
class CalibrationCurve {
 public:
  const std::vector<CalibrationAnchor>& anchors() const { return anchors_; }
  double min_frequency() const { return anchors_.back().f_res; }
  double max_frequency() const { return anchors_.front().f_res; }
  double min_vwc() const { return anchors_.front().vwc; }
  double max_vwc() const { return anchors_.back().vwc; }

  double frequency_at(double vwc) const { return map_(vwc); }
  double vwc_at(double f) const { return map_.inverse(f); }

 private:
  friend CalibrationCurve fit_calibration_curve(std::vector<CalibrationAnchor> anchors);
  std::vector<CalibrationAnchor> anchors_;
  PiecewiseLinear map_;
};

/// Throws DomainError for fewer than two anchors or non-increasing VWC and
/// CalibrationError when frequency does not strictly decrease.
CalibrationCurve fit_calibration_curve(std::vector<CalibrationAnchor> anchors);

inline double vwc_from_frequency(const CalibrationCurve& curve, double f) {
  return curve.vwc_at(f);
}

/// Measured loaded-sensor band edges: dry sand and 30 % VWC.
inline constexpr double kDryResonance = 158e6;
inline constexpr double kWetResonance = 115e6;
inline constexpr double kUnloadedResonance = 170e6;

/// Two-anchor curve through (0 %, 158 MHz) and (30 %, 115 MHz).
CalibrationCurve default_calibration_curve();

/// Resonance linear in eps' between two reference points.
struct LinearShiftModel {
  double eps_ref;
  double f_ref;
  double df_deps;  // [Hz per unit eps']

  static LinearShiftModel through(double eps1, double f1, double eps2, double f2);
  double frequency(double eps_real) const { return f_ref + df_deps * (eps_real - eps_ref); }
};

/// Shift model through the table endpoints and the measured band edges.
LinearShiftModel default_shift_model(const SoilCalibrationTable& table);

/// One anchor per table row, frequency from the shift model.
CalibrationCurve ladder_calibration_curve(const SoilCalibrationTable& table,
                                          const LinearShiftModel& model);

struct SensorDescriptor {
  double f_unloaded;     // [Hz]
  double physical_side;  // [m]

  double electrical_side() const;
};

/// |(f1 - f2) / (fu (eps1 - eps2))| * 100  [%]
double sensitivity(double fu, double f1, double f2, double eps1, double eps2);

/// S * eps_rm / l, with l in free-space wavelengths.
double figure_of_merit(double s, double eps_rm, double l);

/// side * f / c
double electrical_size(double side, double f);

struct ComparisonRow {
  std::string label;
  double s;
  double eps_rm;
  double l;
};

struct ComparisonEntry {
  ComparisonRow row;
  double fom;
};

/// FOM per row, sorted by FOM descending (stable for ties).
std::vector<ComparisonEntry> comparison_report(const std::vector<ComparisonRow>& rows);

/// Sensors with a published size, with the FOM printed next to each.
struct PublishedComparison {
  ComparisonRow row;
  double printed_fom;
};
const std::vector<PublishedComparison>& published_comparison();

/// Headline sensitivity [%] quoted for this sensor; the frequency pair behind
/// it is not published, so it is an input constant rather than derived.
inline constexpr double kHeadlineSensitivity = 2.05;
inline constexpr double kMaxMeasurablePermittivity = 23.0;
inline constexpr double kSensorSide = 50e-3;

}  // namespace soilrf
