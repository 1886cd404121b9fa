#include "soilrf/sensing.hpp"

#include <algorithm>
#include <cmath>

#include "soilrf/constants.hpp"

namespace soilrf {

double vwc_from_weights(double w_dry, double w_water) {
  require_non_negative(w_dry, "dry soil weight");
  require_non_negative(w_water, "water weight");
  const double total = w_dry + w_water;
  if (total == 0.0) throw DomainError("dry soil and water weights are both zero");
  return 100.0 * w_water / total;
}

namespace {

Eigen::ArrayXd column(const std::vector<SoilRow>& rows, double SoilRow::*field) {
  Eigen::ArrayXd out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) out[static_cast<Eigen::Index>(i)] = rows[i].*field;
  return out;
}

}  // namespace

SoilCalibrationTable::SoilCalibrationTable(std::vector<SoilRow> rows) : rows_(std::move(rows)) {
  if (rows_.size() < 2) throw DomainError("soil table needs at least two rows");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto& r = rows_[i];
    if (!std::isfinite(r.vwc) || !std::isfinite(r.eps_real) || !std::isfinite(r.eps_imag)) {
      throw DomainError("soil table entries must be finite");
    }
    if (r.eps_real < 1.0) throw DomainError("soil table eps' must be >= 1");
    if (r.eps_imag < 0.0) throw DomainError("soil table eps'' must be >= 0");
    if (i == 0) continue;
    const auto& p = rows_[i - 1];
    if (!(r.vwc > p.vwc)) throw DomainError("soil table VWC must be strictly increasing");
    if (!(r.eps_real > p.eps_real)) throw DomainError("soil table eps' must be strictly increasing");
    if (r.eps_imag < p.eps_imag) throw DomainError("soil table eps'' must be non-decreasing");
  }
  const Eigen::ArrayXd vwc = column(rows_, &SoilRow::vwc);
  real_ = PiecewiseLinear(vwc, column(rows_, &SoilRow::eps_real));
  imag_ = PiecewiseLinear(vwc, column(rows_, &SoilRow::eps_imag));
}

Permittivity SoilCalibrationTable::permittivity_at(double vwc) const {
  return {real_(vwc), imag_(vwc)};
}

const SoilCalibrationTable& default_soil_table() {
  static const SoilCalibrationTable table({
      {0.0, 2.5, 0.05},
      {5.0, 6.0, 0.5},
      {10.0, 8.0, 0.9},
      {15.0, 14.5, 1.8},
      {20.0, 18.0, 2.5},
      {25.0, 21.0, 3.1},
      {30.0, 23.0, 3.5},
  });
  return table;
}

CalibrationCurve fit_calibration_curve(std::vector<CalibrationAnchor> anchors) {
  if (anchors.size() < 2) throw DomainError("calibration needs at least two anchors");
  Eigen::ArrayXd vwc(static_cast<Eigen::Index>(anchors.size()));
  Eigen::ArrayXd f(vwc.size());
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const auto& a = anchors[i];
    if (!std::isfinite(a.vwc) || !std::isfinite(a.f_res) || a.f_res <= 0.0) {
      throw DomainError("calibration anchors must be finite with positive frequency");
    }
    if (i > 0 && !(a.vwc > anchors[i - 1].vwc)) {
      throw DomainError("calibration anchor VWC must be strictly increasing");
    }
    if (i > 0 && !(a.f_res < anchors[i - 1].f_res)) {
      throw CalibrationError("resonance must fall strictly as VWC rises (anchor " +
                             std::to_string(i) + ")");
    }
    vwc[static_cast<Eigen::Index>(i)] = a.vwc;
    f[static_cast<Eigen::Index>(i)] = a.f_res;
  }
  CalibrationCurve curve;
  curve.anchors_ = std::move(anchors);
  curve.map_ = PiecewiseLinear(std::move(vwc), std::move(f));
  return curve;
}

CalibrationCurve default_calibration_curve() {
  return fit_calibration_curve({{0.0, kDryResonance}, {30.0, kWetResonance}});
}

LinearShiftModel LinearShiftModel::through(double eps1, double f1, double eps2, double f2) {
  if (eps1 == eps2) throw DomainError("shift model needs two distinct permittivities");
  return {eps1, f1, (f2 - f1) / (eps2 - eps1)};
}

LinearShiftModel default_shift_model(const SoilCalibrationTable& table) {
  return LinearShiftModel::through(table.rows().front().eps_real, kDryResonance,
                                   table.rows().back().eps_real, kWetResonance);
}

CalibrationCurve ladder_calibration_curve(const SoilCalibrationTable& table,
                                          const LinearShiftModel& model) {
  std::vector<CalibrationAnchor> anchors;
  anchors.reserve(table.rows().size());
  for (const auto& r : table.rows()) anchors.push_back({r.vwc, model.frequency(r.eps_real)});
  return fit_calibration_curve(std::move(anchors));
}

double SensorDescriptor::electrical_side() const { return electrical_size(physical_side, f_unloaded); }

double sensitivity(double fu, double f1, double f2, double eps1, double eps2) {
  require_positive(fu, "unloaded resonance");
  if (eps1 == eps2) throw DomainError("sensitivity needs two distinct permittivities");
  return std::abs((f1 - f2) / (fu * (eps1 - eps2))) * 100.0;
}

double figure_of_merit(double s, double eps_rm, double l) {
  require_non_negative(s, "sensitivity");
  require_positive(eps_rm, "max permittivity");
  require_positive(l, "electrical length");
  return s * eps_rm / l;
}

double electrical_size(double side, double f) {
  require_positive(side, "side");
  require_positive(f, "frequency");
  return side * f / speed_of_light<double>;
}

std::vector<ComparisonEntry> comparison_report(const std::vector<ComparisonRow>& rows) {
  std::vector<ComparisonEntry> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back({r, figure_of_merit(r.s, r.eps_rm, r.l)});
  std::stable_sort(out.begin(), out.end(),
                   [](const ComparisonEntry& a, const ComparisonEntry& b) { return a.fom > b.fom; });
  return out;
}

const std::vector<PublishedComparison>& published_comparison() {
  // l is the larger electrical dimension of each sensor.
  static const std::vector<PublishedComparison> rows = {
      {{"This Work", 2.05, 23.0, 0.028}, 1683.92},
      {{"[4]", 0.9, 16.7, 0.67}, 22.43},
      {{"[23]", 1.6, 9.2, 0.35}, 42.05},
      {{"[25]", 0.2, 70.0, 0.32}, 43.75},
      {{"[26]", 1.7, 10.2, 0.36}, 48.167},
      {{"[29]", 0.614, 19.0, 0.34}, 34.31},
      {{"[31]", 0.214, 26.0, 0.44}, 12.65},
      {{"[30]", 0.224, 70.0, 0.198}, 79.19},
      {{"[27]", 0.04476, 70.0, 0.372}, 8.42},
      {{"[28]", 4.47, 4.4, 0.6}, 32.78},
      {{"[5]", 0.109, 19.1, 0.38}, 5.47},
  };
  return rows;
}

}  // namespace soilrf
