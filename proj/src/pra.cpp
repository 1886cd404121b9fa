#include "soilrf/pra.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "soilrf/constants.hpp"
#include "soilrf/errors.hpp"

namespace soilrf {

double VaractorModel::capacitance(double v) const { return cj0 / std::pow(1.0 + v / vj, m); }

namespace {

// Parameters are optimised as logs so they stay positive.
Eigen::VectorXd log_residuals(const Eigen::Vector3d& p, std::span<const CvPoint> pts) {
  const double cj0 = std::exp(p[0]), vj = std::exp(p[1]), m = std::exp(p[2]);
  Eigen::VectorXd r(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double model = std::log(cj0) - m * std::log1p(pts[i].v / vj);
    r[static_cast<Eigen::Index>(i)] = model - std::log(pts[i].pf);
  }
  return r;
}

Eigen::MatrixXd log_jacobian(const Eigen::Vector3d& p, std::span<const CvPoint> pts) {
  const double vj = std::exp(p[1]), m = std::exp(p[2]);
  Eigen::MatrixXd j(static_cast<Eigen::Index>(pts.size()), 3);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double v = pts[i].v;
    const auto row = static_cast<Eigen::Index>(i);
    j(row, 0) = 1.0;
    // d/d(log vj) of -m log(1 + v/vj) = m (v/vj) / (1 + v/vj)
    j(row, 1) = m * (v / vj) / (1.0 + v / vj);
    j(row, 2) = -m * std::log1p(v / vj);
  }
  return j;
}

}  // namespace

VaractorModel fit_varactor(std::span<const CvPoint> points) {
  if (points.size() < 3) throw DomainError("varactor fit needs at least three C-V points");
  double c_min_v = points[0].pf, v_min = points[0].v;
  for (const auto& pt : points) {
    require_non_negative(pt.v, "bias voltage");
    require_positive(pt.pf, "capacitance");
    if (pt.v < v_min) {
      v_min = pt.v;
      c_min_v = pt.pf;
    }
  }

  // Levenberg-Marquardt on a 3x3 system.
  Eigen::Vector3d p(std::log(c_min_v), std::log(0.7), std::log(0.5));
  double lambda = 1e-3;
  double cost = log_residuals(p, points).squaredNorm();
  for (int iter = 0; iter < 200 && cost > 1e-24; ++iter) {
    const Eigen::VectorXd r = log_residuals(p, points);
    const Eigen::MatrixXd j = log_jacobian(p, points);
    const Eigen::Matrix3d jtj = j.transpose() * j;
    const Eigen::Vector3d g = j.transpose() * r;
    bool improved = false;
    for (int tries = 0; tries < 20; ++tries) {
      Eigen::Matrix3d a = jtj;
      a.diagonal() += lambda * (jtj.diagonal().array() + 1e-12).matrix();
      const Eigen::Vector3d step = a.ldlt().solve(-g);
      const Eigen::Vector3d trial = p + step;
      const double trial_cost = log_residuals(trial, points).squaredNorm();
      if (std::isfinite(trial_cost) && trial_cost < cost) {
        p = trial;
        cost = trial_cost;
        lambda = std::max(lambda / 10.0, 1e-12);
        improved = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!improved) break;
  }
  return {std::exp(p[0]), std::exp(p[1]), std::exp(p[2])};
}

const VaractorModel& default_varactor() {
  static const VaractorModel model = fit_varactor(kVaractorPoints);
  return model;
}

double capacitance_from_bias(const VaractorModel& model, double v) {
  if (!std::isfinite(v) || v < 0.0 || v > kMaxBias) {
    throw DomainError("bias " + std::to_string(v) + " V outside [0, 15] V");
  }
  return model.capacitance(v);
}

std::string_view pattern_name(Pattern p) {
  switch (p) {
    case Pattern::Front: return "Front";
    case Pattern::Back: return "Back";
    case Pattern::Left: return "Left";
    case Pattern::Right: return "Right";
    case Pattern::UpperLeft: return "UpperLeft";
    case Pattern::UpperRight: return "UpperRight";
  }
  return "?";
}

Pattern parse_pattern(std::string_view name) {
  for (const auto& s : pattern_table()) {
    if (pattern_name(s.pattern) == name) return s.pattern;
  }
  throw InputError("unknown pattern '" + std::string(name) + "'");
}

Pattern mirror(Pattern p) {
  switch (p) {
    case Pattern::Left: return Pattern::Right;
    case Pattern::Right: return Pattern::Left;
    case Pattern::UpperLeft: return Pattern::UpperRight;
    case Pattern::UpperRight: return Pattern::UpperLeft;
    default: return p;
  }
}

const std::array<PatternState, 6>& pattern_table() {
  static const std::array<PatternState, 6> table{{
      {Pattern::Front, 5.63, 6.0, 6.17, 0.0},
      {Pattern::Back, 4.14, 185.0, 4.45, 180.0},
      {Pattern::Left, 2.54, 10.0, 2.7, 132.0},
      {Pattern::Right, 2.62, 340.0, 2.73, 220.0},
      {Pattern::UpperLeft, 5.08, 25.0, 5.117, 15.0},
      {Pattern::UpperRight, 4.923, 354.0, 5.08, 345.0},
  }};
  return table;
}

const PatternState& pattern_state(Pattern p) {
  return pattern_table()[static_cast<std::size_t>(p)];
}

CapBand classify_capacitance(double pf) {
  if (pf >= 1.8) return CapBand::High;
  if (pf >= 0.7 && pf <= 1.3) return CapBand::Mid;
  if (pf <= 0.6) return CapBand::Low;
  throw NoDefinedPattern("capacitance " + std::to_string(pf) + " pF falls between bands");
}

PatternState pattern_from_bias(const BiasState& bias, const VaractorModel& model) {
  const CapBand a = classify_capacitance(capacitance_from_bias(model, bias.v12));
  const CapBand b = classify_capacitance(capacitance_from_bias(model, bias.v34));
  using enum CapBand;
  if (a == High && b == High) return pattern_state(Pattern::Front);
  if (a == High && b == Mid) return pattern_state(Pattern::UpperLeft);
  if (a == High && b == Low) return pattern_state(Pattern::Left);
  if (a == Mid && b == High) return pattern_state(Pattern::UpperRight);
  if (a == Low && b == High) return pattern_state(Pattern::Right);
  if (a == Low && b == Low) return pattern_state(Pattern::Back);
  throw NoDefinedPattern("bias (" + std::to_string(bias.v12) + " V, " + std::to_string(bias.v34) +
                         " V) has no defined pattern");
}

BiasState bias_for(Pattern p) {
  switch (p) {
    case Pattern::Front: return {0.0, 0.0};
    case Pattern::UpperLeft: return {0.0, 3.0};
    case Pattern::Left: return {0.0, 15.0};
    case Pattern::UpperRight: return {3.0, 0.0};
    case Pattern::Right: return {15.0, 0.0};
    case Pattern::Back: return {15.0, 15.0};
  }
  return {0.0, 0.0};
}

std::vector<BeamModel> default_beams() {
  std::vector<BeamModel> beams;
  for (const auto& s : pattern_table()) beams.push_back({s});
  return beams;
}

double angular_distance(double a_deg, double b_deg) {
  double d = std::fmod(std::abs(a_deg - b_deg), 360.0);
  return d > 180.0 ? 360.0 - d : d;
}

double gain_toward(const BeamModel& beam, double theta_deg) {
  const double delta = angular_distance(theta_deg, beam.state.theta_m);
  const double ratio = delta / beam.hpbw;
  const double lobe = beam.state.gain_max - 12.0 * ratio * ratio;
  return std::max(lobe, beam.state.gain_max - beam.backlobe_suppression);
}

const BeamModel& select_beam(std::span<const BeamModel> beams, double bearing_deg) {
  if (beams.empty()) throw DomainError("no beam states to select from");
  const BeamModel* best = &beams.front();
  double best_gain = gain_toward(*best, bearing_deg);
  for (const auto& b : beams.subspan(1)) {
    const double g = gain_toward(b, bearing_deg);
    if (g > best_gain) {
      best = &b;
      best_gain = g;
    }
  }
  return *best;
}

double free_space_path_loss(double d, double f) {
  require_positive(f, "frequency");
  if (!std::isfinite(d) || d < 1.0) throw DomainError("link distance must be at least 1 m");
  return 20.0 * std::log10(4.0 * pi<double> * d * f / speed_of_light<double>);
}

double friis_received_power(double pt_dbm, double gt_dbi, double gr_dbi, double d, double f) {
  return pt_dbm + gt_dbi + gr_dbi - free_space_path_loss(d, f);
}

double effective_aperture(double gain_dbi, double f) {
  require_positive(f, "frequency");
  const double lambda = speed_of_light<double> / f;
  return std::pow(10.0, gain_dbi / 10.0) * lambda * lambda / (4.0 * pi<double>);
}

double harvest_energy(double incident_w_m2, const PatternState& state, double f, double duration,
                      double rectifier_eff) {
  require_non_negative(incident_w_m2, "incident power density");
  require_non_negative(duration, "duration");
  if (!(rectifier_eff >= 0.0 && rectifier_eff <= 1.0)) {
    throw DomainError("rectifier efficiency must lie in [0, 1]");
  }
  return incident_w_m2 * effective_aperture(state.gain_max, f) * rectifier_eff * duration;
}

double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

}  // namespace soilrf
