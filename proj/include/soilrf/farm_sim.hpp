#pragma once

// Deterministic epoch-stepped simulation of a sensor field: every node senses
// its cell through the full trace pipeline, selects an antenna pattern toward
// the base station, and pays for transmissions out of a harvested energy
// budget.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "soilrf/pra.hpp"
#include "soilrf/sensing.hpp"
#include "soilrf/trace.hpp"

namespace soilrf {

class NormalSampler;

struct FieldGrid {
  int rows = 0;
  int cols = 0;
  double cell_m = 1.0;
  std::vector<double> vwc;  // row-major, [%]

  double width() const { return cols * cell_m; }
  double height() const { return rows * cell_m; }
  bool contains(double x, double y) const;
  /// VWC of the cell holding (x, y); x runs along columns, y along rows.
  double at(double x, double y) const;
};

struct NodeSpec {
  std::string id;
  double x = 0.0;
  double y = 0.0;
  SensorDescriptor sensor{kUnloadedResonance, kSensorSide};
  CalibrationCurve curve = default_calibration_curve();
  double battery_j = 0.0;
  double soil_depth_m = 0.1;  // does not enter the sensed frequency
};

struct BaseStation {
  double x = 0.0;
  double y = 0.0;
  double gr_dbi = 12.0;
};

struct RfConfig {
  double pt_dbm = 20.0;
  double f = kWlanFrequency;
  double link_margin_min = 3.0;   // [dB]
  double rx_sensitivity = -90.0;  // [dBm]
  double t_tx = 10e-3;            // [s]
  double pa_efficiency = 0.3;

  /// Pt(W) * t_tx / eta_PA
  double transmit_energy() const;
};

struct SensingConfig {
  double sigma_f = kDefaultFrequencyJitter;  // [Hz]
  double noise_std_db = 0.0;
  double sweep_start = 100e6;
  double sweep_stop = 250e6;
  int points = 1501;
  NotchModel notch = default_unloaded_notch();
  double loss_k = 0.1;
  double min_depth_db = 3.0;
};

struct FarmScenario {
  FieldGrid field;
  std::vector<NodeSpec> nodes;
  BaseStation base_station;
  RfConfig rf;
  SensingConfig sensing;
  std::vector<BeamModel> beams = default_beams();
  SoilCalibrationTable soil = default_soil_table();
  double ambient_rf = 0.0;  // [W/m^2]
  double rectifier_efficiency = 0.5;
  double epoch_s = 60.0;
  std::uint64_t seed = 12345;

  void validate() const;
};

enum class NodeStatus {
  Delivered,
  BelowMargin,
  InsufficientBattery,
  NoDip,
  OutOfRange,
};

std::string_view status_name(NodeStatus s);

struct SenseResult {
  double measured_f;
  double inverted_vwc;
};

/// Forward map, noisy sweep, dip detection and inversion for one reading.
/// Throws ExtrapolationError or NoDipError on failure.
SenseResult sense(const NodeSpec& node, const SensingConfig& cfg, const SoilCalibrationTable& soil,
                  double true_vwc, NormalSampler& rng);

struct LinkResult {
  Pattern pattern;
  double bearing_deg;
  double pr_dbm;
  bool delivered;
};

/// Pattern and received power toward the base station. Pure; battery is
/// handled by the caller.
LinkResult communicate(const NodeSpec& node, const BaseStation& bs, const RfConfig& rf,
                       std::span<const BeamModel> beams);

struct EpochRow {
  int epoch = 0;
  std::string node_id;
  double true_vwc = 0.0;
  std::optional<double> measured_f;
  std::optional<double> inverted_vwc;
  std::optional<Pattern> pattern;
  std::optional<double> pr_dbm;
  bool delivered = false;
  NodeStatus status = NodeStatus::Delivered;
  double battery_before = 0.0;
  double harvested = 0.0;
  double spent = 0.0;
  double battery_after = 0.0;
};

using EpochReport = std::vector<EpochRow>;

struct RunSummary {
  int epochs = 0;
  int nodes = 0;
  int readings = 0;
  int delivered = 0;
  int measurements = 0;
  int insufficient_battery = 0;
  int below_margin = 0;
  int measurement_failures = 0;
  double delivery_rate = 0.0;
  double mean_abs_vwc_error = 0.0;
  double initial_energy = 0.0;
  double harvested_energy = 0.0;
  double spent_energy = 0.0;
  double final_energy = 0.0;
};

class FarmSimulator {
 public:
  explicit FarmSimulator(FarmScenario scenario);

  const FarmScenario& scenario() const { return scenario_; }
  const std::vector<double>& batteries() const { return batteries_; }

  /// Advances every node by one epoch. Randomness depends only on
  /// (seed, epoch_index, node index).
  EpochReport step(int epoch_index);

  /// Runs epochs [0, n_epochs), handing each report to `sink` as it is produced.
  RunSummary run(int n_epochs, const std::function<void(const EpochReport&)>& sink = {});

 private:
  FarmScenario scenario_;
  std::vector<double> batteries_;
  std::vector<std::size_t> parked_beams_;  // index into scenario_.beams
};

/// Summary statistics over a set of rows.
RunSummary summarize(const std::vector<EpochRow>& rows, int epochs, int nodes,
                     double initial_energy);

}  // namespace soilrf
