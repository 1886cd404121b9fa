#include "soilrf/trace.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "soilrf/errors.hpp"
#include "soilrf/random.hpp"

namespace soilrf {

void NotchModel::validate() const {
  require_positive(f0, "notch f0");
  require_positive(bandwidth_3db, "notch bandwidth");
  if (!std::isfinite(depth) || !std::isfinite(floor) || !(depth < floor) || floor > 0.0) {
    throw DomainError("notch needs depth < floor <= 0 dB");
  }
}

double NotchModel::notch_db(double f) const {
  const double x = 2.0 * (f - f0) / bandwidth_3db;
  return depth / (1.0 + x * x);
}

NotchModel default_unloaded_notch() { return {170e6, 4e6, -25.0, -0.2}; }

NotchModel loaded_notch(const NotchModel& base, double f0, double eps_imag, double loss_k) {
  require_non_negative(eps_imag, "eps''");
  require_non_negative(loss_k, "loss factor");
  NotchModel m = base;
  m.f0 = f0;
  m.depth = base.depth * (1.0 + loss_k * eps_imag);
  m.validate();
  return m;
}

void S11Trace::validate() const {
  if (freqs.size() != mag_db.size()) throw DomainError("trace arrays differ in length");
  if (freqs.size() < 3) throw DomainError("trace needs at least three points");
  const double h = freqs[1] - freqs[0];
  if (!(h > 0.0)) throw DomainError("trace frequencies must be strictly increasing");
  for (Eigen::Index i = 1; i < freqs.size(); ++i) {
    const double d = freqs[i] - freqs[i - 1];
    if (!(d > 0.0) || std::abs(d - h) > 1e-6 * h) {
      throw DomainError("trace frequencies must lie on a uniform grid");
    }
  }
  if (!mag_db.allFinite()) throw DomainError("trace magnitudes must be finite");
}

S11Trace synthesize_trace(const NotchModel& model, double f_start, double f_stop, int points,
                          double noise_std_db, std::uint64_t seed) {
  model.validate();
  if (points < 16) throw DomainError("trace needs at least 16 points");
  if (!(f_start < model.f0 && model.f0 < f_stop)) {
    throw DomainError("notch f0 lies outside the sweep span");
  }
  require_non_negative(noise_std_db, "trace noise");

  S11Trace trace;
  const double step = (f_stop - f_start) / (points - 1);
  trace.freqs = f_start + Eigen::ArrayXd::LinSpaced(points, 0.0, points - 1.0) * step;
  trace.mag_db = trace.freqs.unaryExpr([&](double f) { return model.magnitude_db(f); });
  if (noise_std_db > 0.0) {
    NormalSampler noise(seed);
    for (auto& v : trace.mag_db) v += noise(0.0, noise_std_db);
  }
  trace.mag_db = trace.mag_db.min(0.0);
  return trace;
}

double find_resonance(const S11Trace& trace, double min_depth) {
  trace.validate();
  const auto& y = trace.mag_db;
  Eigen::Index i = 0;
  const double lowest = y.minCoeff(&i);

  std::vector<double> sorted(y.begin(), y.end());
  auto mid = sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2);
  std::nth_element(sorted.begin(), mid, sorted.end());
  const double level = *mid;
  if (level - lowest < min_depth) {
    throw NoDipError("deepest point is " + std::to_string(level - lowest) +
                     " dB below the trace level, need " + std::to_string(min_depth));
  }

  const double fi = trace.freqs[i];
  if (i == 0 || i == y.size() - 1) return fi;
  const double ym = y[i - 1], y0 = y[i], yp = y[i + 1];
  const double curvature = ym - 2.0 * y0 + yp;
  if (!(curvature > 0.0)) return fi;
  const double offset = 0.5 * (ym - yp) / curvature;
  return fi + offset * trace.step();
}

double repeatability_check(const NotchModel& model, double sigma_f, int trials,
                           std::uint64_t seed) {
  model.validate();
  if (trials < 3) throw DomainError("repeatability needs at least three trials");
  require_non_negative(sigma_f, "frequency jitter");

  const double step = model.bandwidth_3db / 40.0;
  const double half_span = std::max(20.0 * model.bandwidth_3db, 10.0 * sigma_f);
  const int half_points = static_cast<int>(std::ceil(half_span / step));
  const double f_start = model.f0 - half_points * step;
  const double f_stop = model.f0 + half_points * step;
  const int points = 2 * half_points + 1;

  NormalSampler jitter(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    NotchModel shifted = model;
    shifted.f0 = model.f0 + jitter(0.0, sigma_f);
    const S11Trace trace = synthesize_trace(shifted, f_start, f_stop, points, 0.0, 0);
    const double estimate = find_resonance(trace, 0.5 * std::abs(model.depth));
    worst = std::max(worst, std::abs(estimate - model.f0));
  }
  return worst;
}

}  // namespace soilrf
