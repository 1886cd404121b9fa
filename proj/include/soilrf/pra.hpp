#pragma once

// Six-state pattern-reconfigurable antenna: varactor C-V law, bias to
// pattern lookup, per-state beam model, link budget and harvesting.

#include <array>
#include <span>
#include <string_view>
#include <vector>

namespace soilrf {

/// Abrupt-junction law C(V) = cj0 / (1 + V/vj)^m. Capacitance in pF.
struct VaractorModel {
  double cj0;  // [pF]
  double vj;   // [V]
  double m;

  double capacitance(double v) const;
};

struct CvPoint {
  double v;   // [V]
  double pf;  // [pF]
};

/// Least-squares fit of (cj0, vj, m) on log-capacitance residuals.
VaractorModel fit_varactor(std::span<const CvPoint> points);

/// Bias/capacitance pairs for the SMV1231 diodes used on the antenna.
inline constexpr std::array<CvPoint, 3> kVaractorPoints{{{0.0, 2.35}, {3.0, 0.970}, {15.0, 0.466}}};
inline constexpr double kMaxBias = 15.0;

/// Fitted once from kVaractorPoints.
const VaractorModel& default_varactor();

/// C(V) over the allowed bias range [0, 15] V; DomainError outside it.
double capacitance_from_bias(const VaractorModel& model, double v);

enum class Pattern { Front, Back, Left, Right, UpperLeft, UpperRight };

std::string_view pattern_name(Pattern p);
/// Accepts the names printed by pattern_name; throws InputError otherwise.
Pattern parse_pattern(std::string_view name);

/// Left<->Right, UpperLeft<->UpperRight; Front and Back are fixed.
Pattern mirror(Pattern p);

struct PatternState {
  Pattern pattern;
  double gain_max;  // measured [dBi]
  double theta_m;   // measured lobe direction in the xz-plane [deg]
  double sim_gain_max;
  double sim_theta_m;
};

/// Far-field table, in declaration order of Pattern.
const std::array<PatternState, 6>& pattern_table();
const PatternState& pattern_state(Pattern p);

struct BiasState {
  double v12;  // diodes D1, D2 [V]
  double v34;  // diodes D3, D4 [V]
};

enum class CapBand { Low, Mid, High };

/// HIGH >= 1.8 pF, MID in [0.7, 1.3] pF, LOW <= 0.6 pF. NoDefinedPattern in the gaps.
CapBand classify_capacitance(double pf);

PatternState pattern_from_bias(const BiasState& bias, const VaractorModel& model);
inline PatternState pattern_from_bias(const BiasState& bias) {
  return pattern_from_bias(bias, default_varactor());
}

/// Bias voltages that produce each pattern.
BiasState bias_for(Pattern p);

struct BeamModel {
  PatternState state;
  double hpbw = 90.0;                 // [deg]
  double backlobe_suppression = 15.0; // [dB]
};

/// One beam per pattern with default shape parameters.
std::vector<BeamModel> default_beams();

/// Shortest angular distance in [0, 180].
double angular_distance(double a_deg, double b_deg);

/// Parabolic main lobe in dB, floored at gain_max - backlobe_suppression.
double gain_toward(const BeamModel& beam, double theta_deg);

/// Beam with the highest modelled gain toward `bearing`; first wins ties.
const BeamModel& select_beam(std::span<const BeamModel> beams, double bearing_deg);
inline PatternState select_pattern(std::span<const BeamModel> beams, double bearing_deg) {
  return select_beam(beams, bearing_deg).state;
}

/// Free-space path loss [dB].
double free_space_path_loss(double d, double f);

/// Pr = Pt + Gt + Gr - FSPL [dBm]; d >= 1 m.
double friis_received_power(double pt_dbm, double gt_dbi, double gr_dbi, double d, double f);

/// G lambda^2 / (4 pi) [m^2]
double effective_aperture(double gain_dbi, double f);

/// Energy [J] collected from an incident power density over `duration`.
double harvest_energy(double incident_w_m2, const PatternState& state, double f, double duration,
                      double rectifier_eff);

inline constexpr double kWlanFrequency = 2.45e9;

double dbm_to_watts(double dbm);

}  // namespace soilrf
