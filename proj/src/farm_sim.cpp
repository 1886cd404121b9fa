#include "soilrf/farm_sim.hpp"

#include <cmath>
#include <numbers>

#include "soilrf/errors.hpp"
#include "soilrf/random.hpp"

namespace soilrf {

bool FieldGrid::contains(double x, double y) const {
  return x >= 0.0 && y >= 0.0 && x <= width() && y <= height();
}

double FieldGrid::at(double x, double y) const {
  if (!contains(x, y)) throw DomainError("position lies outside the field");
  const int c = std::min(cols - 1, static_cast<int>(x / cell_m));
  const int r = std::min(rows - 1, static_cast<int>(y / cell_m));
  return vwc[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) +
             static_cast<std::size_t>(c)];
}

double RfConfig::transmit_energy() const { return dbm_to_watts(pt_dbm) * t_tx / pa_efficiency; }

void FarmScenario::validate() const {
  if (field.rows < 1 || field.cols < 1) throw DomainError("field grid must be non-empty");
  require_positive(field.cell_m, "cell size");
  if (field.vwc.size() != static_cast<std::size_t>(field.rows) * static_cast<std::size_t>(field.cols)) {
    throw DomainError("field VWC array does not match rows * cols");
  }
  if (nodes.empty()) throw DomainError("scenario needs at least one node");
  if (beams.empty()) throw DomainError("scenario needs at least one beam state");
  for (const auto& n : nodes) {
    if (!field.contains(n.x, n.y)) throw DomainError("node " + n.id + " lies outside the field");
    require_non_negative(n.battery_j, "battery energy");
    require_non_negative(n.soil_depth_m, "soil depth");
    require_positive(n.sensor.f_unloaded, "unloaded resonance");
    if (n.curve.min_frequency() <= sensing.sweep_start || n.curve.max_frequency() >= sensing.sweep_stop) {
      throw DomainError("calibration band of node " + n.id + " is not inside the sweep span");
    }
    if (std::hypot(base_station.x - n.x, base_station.y - n.y) < 1.0) {
      throw DomainError("node " + n.id + " is closer than 1 m to the base station");
    }
  }
  require_positive(rf.f, "carrier frequency");
  require_positive(rf.t_tx, "transmit time");
  require_positive(rf.pa_efficiency, "PA efficiency");
  require_non_negative(ambient_rf, "ambient RF density");
  require_positive(epoch_s, "epoch length");
  if (rf.t_tx > epoch_s) throw DomainError("transmit time exceeds the epoch");
  require_non_negative(sensing.sigma_f, "frequency jitter");
  require_non_negative(sensing.noise_std_db, "trace noise");
  if (sensing.points < 16) throw DomainError("sweep needs at least 16 points");
  sensing.notch.validate();
  if (!(rectifier_efficiency >= 0.0 && rectifier_efficiency <= 1.0)) {
    throw DomainError("rectifier efficiency must lie in [0, 1]");
  }
}

std::string_view status_name(NodeStatus s) {
  switch (s) {
    case NodeStatus::Delivered: return "delivered";
    case NodeStatus::BelowMargin: return "below_margin";
    case NodeStatus::InsufficientBattery: return "insufficient_battery";
    case NodeStatus::NoDip: return "no_dip";
    case NodeStatus::OutOfRange: return "out_of_range";
  }
  return "?";
}

SenseResult sense(const NodeSpec& node, const SensingConfig& cfg, const SoilCalibrationTable& soil,
                  double true_vwc, NormalSampler& rng) {
  const double f_true = node.curve.frequency_at(true_vwc);
  // Loss only deepens the notch; outside the tabulated range it is dropped.
  double eps_imag = 0.0;
  if (true_vwc >= soil.min_vwc() && true_vwc <= soil.max_vwc()) {
    eps_imag = soil.permittivity_at(true_vwc).imag;
  }
  const double f_center = f_true + (cfg.sigma_f > 0.0 ? rng(0.0, cfg.sigma_f) : 0.0);
  const std::uint64_t trace_seed = static_cast<std::uint64_t>(rng.uniform() * 0x1.0p53);
  if (!(f_center > cfg.sweep_start && f_center < cfg.sweep_stop)) {
    throw ExtrapolationError("jittered resonance left the sweep span");
  }
  const NotchModel notch = loaded_notch(cfg.notch, f_center, eps_imag, cfg.loss_k);
  const S11Trace trace =
      synthesize_trace(notch, cfg.sweep_start, cfg.sweep_stop, cfg.points, cfg.noise_std_db, trace_seed);
  const double f_hat = find_resonance(trace, cfg.min_depth_db);
  return {f_hat, node.curve.vwc_at(f_hat)};
}

namespace {

double bearing_deg(double from_x, double from_y, double to_x, double to_y) {
  double deg = std::atan2(to_y - from_y, to_x - from_x) * 180.0 / std::numbers::pi;
  if (deg < 0.0) deg += 360.0;
  return deg >= 360.0 ? deg - 360.0 : deg;
}

}  // namespace

LinkResult communicate(const NodeSpec& node, const BaseStation& bs, const RfConfig& rf,
                       std::span<const BeamModel> beams) {
  const double bearing = bearing_deg(node.x, node.y, bs.x, bs.y);
  const BeamModel& beam = select_beam(beams, bearing);
  const double d = std::hypot(bs.x - node.x, bs.y - node.y);
  const double pr = friis_received_power(rf.pt_dbm, gain_toward(beam, bearing), bs.gr_dbi, d, rf.f);
  return {beam.state.pattern, bearing, pr, pr >= rf.rx_sensitivity + rf.link_margin_min};
}

FarmSimulator::FarmSimulator(FarmScenario scenario) : scenario_(std::move(scenario)) {
  scenario_.validate();
  for (const auto& n : scenario_.nodes) {
    batteries_.push_back(n.battery_j);
    const double bearing = bearing_deg(n.x, n.y, scenario_.base_station.x, scenario_.base_station.y);
    const BeamModel& parked = select_beam(scenario_.beams, bearing);
    parked_beams_.push_back(static_cast<std::size_t>(&parked - scenario_.beams.data()));
  }
}

EpochReport FarmSimulator::step(int epoch_index) {
  const auto& sc = scenario_;
  EpochReport report;
  report.reserve(sc.nodes.size());
  const double standby = sc.epoch_s - sc.rf.t_tx;
  const double tx_cost = sc.rf.transmit_energy();

  for (std::size_t i = 0; i < sc.nodes.size(); ++i) {
    const NodeSpec& node = sc.nodes[i];
    NormalSampler rng{sc.seed, static_cast<std::uint64_t>(epoch_index), static_cast<std::uint64_t>(i)};

    EpochRow row;
    row.epoch = epoch_index;
    row.node_id = node.id;
    row.true_vwc = sc.field.at(node.x, node.y);
    row.battery_before = batteries_[i];
    // The antenna stays parked on the base-station beam while idle.
    row.harvested = harvest_energy(sc.ambient_rf, sc.beams[parked_beams_[i]].state, sc.rf.f, standby,
                                   sc.rectifier_efficiency);
    const double available = row.battery_before + row.harvested;

    bool have_reading = false;
    try {
      const SenseResult s = sense(node, sc.sensing, sc.soil, row.true_vwc, rng);
      row.measured_f = s.measured_f;
      row.inverted_vwc = s.inverted_vwc;
      have_reading = true;
    } catch (const NoDipError&) {
      row.status = NodeStatus::NoDip;
    } catch (const ExtrapolationError&) {
      row.status = NodeStatus::OutOfRange;
    }

    if (have_reading) {
      if (available < tx_cost) {
        row.status = NodeStatus::InsufficientBattery;
      } else {
        const LinkResult link = communicate(node, sc.base_station, sc.rf, sc.beams);
        row.pattern = link.pattern;
        row.pr_dbm = link.pr_dbm;
        row.delivered = link.delivered;
        row.status = link.delivered ? NodeStatus::Delivered : NodeStatus::BelowMargin;
        row.spent = tx_cost;
      }
    }
    row.battery_after = row.battery_before + row.harvested - row.spent;
    batteries_[i] = row.battery_after;
    report.push_back(std::move(row));
  }
  return report;
}

RunSummary FarmSimulator::run(int n_epochs, const std::function<void(const EpochReport&)>& sink) {
  if (n_epochs < 1) throw DomainError("run needs at least one epoch");
  double initial = 0.0;
  for (double b : batteries_) initial += b;
  std::vector<EpochRow> all;
  all.reserve(static_cast<std::size_t>(n_epochs) * scenario_.nodes.size());
  for (int e = 0; e < n_epochs; ++e) {
    EpochReport rep = step(e);
    if (sink) sink(rep);
    for (auto& r : rep) all.push_back(std::move(r));
  }
  RunSummary summary = summarize(all, n_epochs, static_cast<int>(scenario_.nodes.size()), initial);
  summary.final_energy = 0.0;
  for (double b : batteries_) summary.final_energy += b;
  return summary;
}

RunSummary summarize(const std::vector<EpochRow>& rows, int epochs, int nodes,
                     double initial_energy) {
  RunSummary s;
  s.epochs = epochs;
  s.nodes = nodes;
  s.readings = static_cast<int>(rows.size());
  s.initial_energy = initial_energy;
  s.final_energy = initial_energy;
  double err_sum = 0.0;
  for (const auto& r : rows) {
    if (r.delivered) ++s.delivered;
    if (r.inverted_vwc) {
      ++s.measurements;
      err_sum += std::abs(*r.inverted_vwc - r.true_vwc);
    }
    switch (r.status) {
      case NodeStatus::InsufficientBattery: ++s.insufficient_battery; break;
      case NodeStatus::BelowMargin: ++s.below_margin; break;
      case NodeStatus::NoDip:
      case NodeStatus::OutOfRange: ++s.measurement_failures; break;
      case NodeStatus::Delivered: break;
    }
    s.harvested_energy += r.harvested;
    s.spent_energy += r.spent;
    s.final_energy += r.harvested - r.spent;
  }
  s.delivery_rate = s.readings > 0 ? static_cast<double>(s.delivered) / s.readings : 0.0;
  s.mean_abs_vwc_error = s.measurements > 0 ? err_sum / s.measurements : 0.0;
  return s;
}

}  // namespace soilrf
