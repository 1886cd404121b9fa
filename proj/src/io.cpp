#include "soilrf/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "soilrf/errors.hpp"

namespace soilrf::io {

using nlohmann::json;

namespace {

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("malformed JSON at " + line_col(text, e.byte) + ": " + e.what());
  }
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(std::string("field '") + key + "' has the wrong type");
  }
}

template <typename T>
T field_or(const json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return field<T>(j, key);
}

std::string num(double v, const char* spec = "%.17g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_number(const std::string& s, std::size_t line_no) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw InputError("line " + std::to_string(line_no) + ": '" + s + "' is not a number");
  }
  return v;
}

/// Data rows after a required header; blank lines are skipped.
std::vector<std::pair<std::size_t, std::vector<std::string>>> csv_rows(
    const std::string& text, const std::vector<std::string>& header) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cells = split_csv_line(line);
    if (!saw_header) {
      if (cells != header) {
        std::string want;
        for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
        throw InputError("line " + std::to_string(line_no) + ": expected header '" + want + "'");
      }
      saw_header = true;
      continue;
    }
    if (cells.size() != header.size()) {
      throw InputError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " columns");
    }
    rows.emplace_back(line_no, std::move(cells));
  }
  if (!saw_header) throw InputError("CSV input is empty");
  return rows;
}

json anchors_json(const std::vector<CalibrationAnchor>& anchors) {
  json arr = json::array();
  for (const auto& a : anchors) arr.push_back({{"vwc", a.vwc}, {"f_hz", a.f_res}});
  return arr;
}

std::vector<CalibrationAnchor> anchors_from(const json& arr) {
  if (!arr.is_array()) throw InputError("'anchors' must be an array");
  std::vector<CalibrationAnchor> out;
  for (const auto& a : arr) {
    double f = 0.0;
    if (a.contains("f_hz")) {
      f = field<double>(a, "f_hz");
    } else {
      f = field<double>(a, "f_mhz") * 1e6;
    }
    out.push_back({field<double>(a, "vwc"), f});
  }
  return out;
}

BeamModel beam_from(const json& j) {
  const Pattern p = parse_pattern(field<std::string>(j, "pattern"));
  PatternState state = pattern_state(p);
  state.gain_max = field_or<double>(j, "gain_max_dbi", state.gain_max);
  state.theta_m = field_or<double>(j, "theta_m_deg", state.theta_m);
  BeamModel beam{state};
  beam.hpbw = field_or<double>(j, "hpbw_deg", beam.hpbw);
  beam.backlobe_suppression = field_or<double>(j, "backlobe_suppression_db", beam.backlobe_suppression);
  require_positive(beam.hpbw, "hpbw");
  require_positive(beam.backlobe_suppression, "backlobe suppression");
  return beam;
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SoilCalibrationTable parse_soil_table(const std::string& json_text) {
  const json j = parse_json(json_text);
  const json rows = field<json>(j, "rows");
  if (!rows.is_array()) throw InputError("'rows' must be an array");
  std::vector<SoilRow> out;
  for (const auto& r : rows) {
    out.push_back({field<double>(r, "vwc"), field<double>(r, "eps_real"), field<double>(r, "eps_imag")});
  }
  return SoilCalibrationTable(std::move(out));
}

std::vector<CalibrationAnchor> parse_anchors(const std::string& json_text) {
  const json j = parse_json(json_text);
  return anchors_from(field<json>(j, "anchors"));
}

std::string curve_to_json(const CalibrationCurve& curve) {
  json j = {{"kind", "monotone_piecewise_linear"}, {"anchors", anchors_json(curve.anchors())}};
  return j.dump(2) + "\n";
}

std::vector<BeamModel> parse_beams(const std::string& json_text) {
  const json j = parse_json(json_text);
  const json arr = field<json>(j, "beams");
  if (!arr.is_array() || arr.empty()) throw InputError("'beams' must be a non-empty array");
  std::vector<BeamModel> beams;
  for (const auto& b : arr) beams.push_back(beam_from(b));
  return beams;
}

std::string beams_to_json(const std::vector<BeamModel>& beams) {
  json arr = json::array();
  for (const auto& b : beams) {
    arr.push_back({{"pattern", std::string(pattern_name(b.state.pattern))},
                   {"gain_max_dbi", b.state.gain_max},
                   {"theta_m_deg", b.state.theta_m},
                   {"hpbw_deg", b.hpbw},
                   {"backlobe_suppression_db", b.backlobe_suppression}});
  }
  return json{{"beams", arr}}.dump(2) + "\n";
}

FarmScenario parse_scenario(const std::string& json_text) {
  const json j = parse_json(json_text);
  FarmScenario sc;
  sc.seed = field_or<std::uint64_t>(j, "seed", sc.seed);
  sc.epoch_s = field_or<double>(j, "epoch_s", sc.epoch_s);
  sc.ambient_rf = field_or<double>(j, "ambient_rf_w_m2", sc.ambient_rf);
  sc.rectifier_efficiency = field_or<double>(j, "rectifier_efficiency", sc.rectifier_efficiency);

  const json f = field<json>(j, "field");
  sc.field.rows = field<int>(f, "rows");
  sc.field.cols = field<int>(f, "cols");
  sc.field.cell_m = field<double>(f, "cell_m");
  sc.field.vwc = field<std::vector<double>>(f, "vwc");

  const json bs = field<json>(j, "base_station");
  sc.base_station.x = field<double>(bs, "x");
  sc.base_station.y = field<double>(bs, "y");
  sc.base_station.gr_dbi = field_or<double>(bs, "gr_dbi", sc.base_station.gr_dbi);

  if (j.contains("rf")) {
    const json& rf = j["rf"];
    sc.rf.pt_dbm = field_or<double>(rf, "pt_dbm", sc.rf.pt_dbm);
    sc.rf.f = field_or<double>(rf, "f_hz", sc.rf.f);
    sc.rf.link_margin_min = field_or<double>(rf, "link_margin_min_db", sc.rf.link_margin_min);
    sc.rf.rx_sensitivity = field_or<double>(rf, "rx_sensitivity_dbm", sc.rf.rx_sensitivity);
    sc.rf.t_tx = field_or<double>(rf, "t_tx_s", sc.rf.t_tx);
    sc.rf.pa_efficiency = field_or<double>(rf, "pa_efficiency", sc.rf.pa_efficiency);
  }

  if (j.contains("sensing")) {
    const json& s = j["sensing"];
    auto& cfg = sc.sensing;
    cfg.sigma_f = field_or<double>(s, "sigma_f_hz", cfg.sigma_f);
    cfg.noise_std_db = field_or<double>(s, "noise_std_db", cfg.noise_std_db);
    cfg.sweep_start = field_or<double>(s, "sweep_start_hz", cfg.sweep_start);
    cfg.sweep_stop = field_or<double>(s, "sweep_stop_hz", cfg.sweep_stop);
    cfg.points = field_or<int>(s, "points", cfg.points);
    cfg.notch.bandwidth_3db = field_or<double>(s, "bandwidth_hz", cfg.notch.bandwidth_3db);
    cfg.notch.depth = field_or<double>(s, "depth_db", cfg.notch.depth);
    cfg.notch.floor = field_or<double>(s, "floor_db", cfg.notch.floor);
    cfg.loss_k = field_or<double>(s, "loss_k", cfg.loss_k);
    cfg.min_depth_db = field_or<double>(s, "min_depth_db", cfg.min_depth_db);
  }

  if (j.contains("beams")) sc.beams = parse_beams(j.dump());
  if (j.contains("soil_table")) sc.soil = parse_soil_table(j["soil_table"].dump());

  const json nodes = field<json>(j, "nodes");
  if (!nodes.is_array()) throw InputError("'nodes' must be an array");
  for (const auto& n : nodes) {
    NodeSpec node;
    node.id = field<std::string>(n, "id");
    node.x = field<double>(n, "x");
    node.y = field<double>(n, "y");
    node.battery_j = field<double>(n, "battery_j");
    node.soil_depth_m = field_or<double>(n, "soil_depth_m", node.soil_depth_m);
    if (n.contains("sensor")) {
      node.sensor.f_unloaded = field_or<double>(n["sensor"], "f_unloaded_hz", node.sensor.f_unloaded);
      node.sensor.physical_side = field_or<double>(n["sensor"], "side_m", node.sensor.physical_side);
    }
    if (n.contains("calibration")) {
      node.curve = fit_calibration_curve(anchors_from(field<json>(n["calibration"], "anchors")));
    }
    sc.nodes.push_back(std::move(node));
  }
  sc.validate();
  return sc;
}

std::vector<ComparisonRow> parse_comparison_csv(const std::string& csv_text) {
  std::vector<ComparisonRow> out;
  for (const auto& [line_no, cells] : csv_rows(csv_text, {"label", "S", "eps_rm", "l"})) {
    out.push_back({cells[0], parse_number(cells[1], line_no), parse_number(cells[2], line_no),
                   parse_number(cells[3], line_no)});
  }
  return out;
}

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonEntry>& entries) {
  out << "label,S,eps_rm,l,fom\n";
  for (const auto& e : entries) {
    out << e.row.label << ',' << num(e.row.s, "%.6g") << ',' << num(e.row.eps_rm, "%.6g") << ','
        << num(e.row.l, "%.6g") << ',' << num(e.fom, "%.4f") << '\n';
  }
}

S11Trace parse_trace_csv(const std::string& csv_text) {
  const auto rows = csv_rows(csv_text, {"freq_hz", "mag_db"});
  S11Trace t;
  t.freqs.resize(static_cast<Eigen::Index>(rows.size()));
  t.mag_db.resize(t.freqs.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& [line_no, cells] = rows[i];
    t.freqs[static_cast<Eigen::Index>(i)] = parse_number(cells[0], line_no);
    t.mag_db[static_cast<Eigen::Index>(i)] = parse_number(cells[1], line_no);
  }
  t.validate();
  return t;
}

void write_trace_csv(std::ostream& out, const S11Trace& trace) {
  out << "freq_hz,mag_db\n";
  for (Eigen::Index i = 0; i < trace.freqs.size(); ++i) {
    out << num(trace.freqs[i]) << ',' << num(trace.mag_db[i]) << '\n';
  }
}

void write_gain_sweep_csv(std::ostream& out, const BeamModel& beam, double step_deg) {
  require_positive(step_deg, "sweep step");
  out << "theta_deg,gain_dbi\n";
  const int n = static_cast<int>(std::floor(360.0 / step_deg + 1e-9));
  for (int i = 0; i < n; ++i) {
    const double theta = i * step_deg;
    if (theta >= 360.0) break;
    out << num(theta, "%.6g") << ',' << num(gain_toward(beam, theta), "%.6f") << '\n';
  }
}

void write_epoch_header(std::ostream& out) {
  out << "epoch,node_id,true_vwc,measured_f_hz,inverted_vwc,pattern,pr_dbm,delivered,battery_j\n";
}

void write_epoch_rows(std::ostream& out, const EpochReport& report) {
  for (const auto& r : report) {
    out << r.epoch << ',' << r.node_id << ',' << num(r.true_vwc, "%.6f") << ','
        << (r.measured_f ? num(*r.measured_f, "%.3f") : "") << ','
        << (r.inverted_vwc ? num(*r.inverted_vwc, "%.6f") : "") << ','
        << (r.pattern ? std::string(pattern_name(*r.pattern)) : "") << ','
        << (r.pr_dbm ? num(*r.pr_dbm, "%.4f") : "") << ',' << (r.delivered ? 1 : 0) << ','
        << num(r.battery_after, "%.9g") << '\n';
  }
}

std::string summary_to_json(const RunSummary& s) {
  json j = {
      {"epochs", s.epochs},
      {"nodes", s.nodes},
      {"readings", s.readings},
      {"delivered", s.delivered},
      {"delivery_rate", s.delivery_rate},
      {"measurements", s.measurements},
      {"measurement_failures", s.measurement_failures},
      {"insufficient_battery", s.insufficient_battery},
      {"below_margin", s.below_margin},
      {"mean_abs_vwc_error", s.mean_abs_vwc_error},
      {"energy_j",
       {{"initial", s.initial_energy},
        {"harvested", s.harvested_energy},
        {"spent", s.spent_energy},
        {"final", s.final_energy}}},
  };
  return j.dump(2) + "\n";
}

}  // namespace soilrf::io
