// soilrf: command-line front end for the sensor, antenna and farm models.
//
// Exit codes: 0 success, 2 input/validation error, 3 calibration/model
// error, 4 out-of-range query.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "soilrf/constants.hpp"
#include "soilrf/errors.hpp"
#include "soilrf/farm_sim.hpp"
#include "soilrf/io.hpp"
#include "soilrf/microstrip.hpp"
#include "soilrf/pra.hpp"
#include "soilrf/resonator.hpp"
#include "soilrf/sensing.hpp"
#include "soilrf/trace.hpp"

namespace fs = std::filesystem;
using namespace soilrf;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitModel = 3;
constexpr int kExitRange = 4;
constexpr std::uint64_t kDefaultSeed = 12345;

/// Optional config directory holding soil_table.json, curve.json,
/// beams.json and comparison.csv overrides.
std::optional<fs::path> config_file(const std::string& name) {
  const char* dir = std::getenv("SOILRF_CONFIG_DIR");
  if (dir == nullptr || *dir == '\0') return std::nullopt;
  fs::path p = fs::path(dir) / name;
  if (fs::exists(p)) return p;
  return std::nullopt;
}

int guarded(const std::function<void()>& body) {
  try {
    body();
    return 0;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const CalibrationError& e) {
    std::cerr << "calibration error: " << e.what() << '\n';
    return kExitModel;
  } catch (const NoDipError& e) {
    std::cerr << "no resonance: " << e.what() << '\n';
    return kExitModel;
  } catch (const NoDefinedPattern& e) {
    std::cerr << "no pattern: " << e.what() << '\n';
    return kExitModel;
  } catch (const ExtrapolationError& e) {
    std::cerr << "out of range: " << e.what() << '\n';
    return kExitRange;
  }
}

/// Writes to `path`, or stdout when it is empty.
void emit(const std::string& path, const std::function<void(std::ostream&)>& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  write(out);
}

// ---- design ---------------------------------------------------------------

struct DesignArgs {
  int turns = 3;
  double width_mm = 1.0;
  double spacing_mm = 1.0;
  double outer_mm = 40.0;
  double eps_r = kFr4.eps_r;
  double tan_delta = kFr4.tan_delta;
  double h_mm = kFr4.h * 1e3;
  double anchor_mhz = kThreeTurnResonance / kMega;
  std::vector<int> sweep_turns;
  std::vector<double> sweep_widths_mm;
};

void run_design(const DesignArgs& a) {
  const Substrated sub{a.eps_r, a.tan_delta, a.h_mm * kMilli};
  const SpiralSpecd anchor{a.turns, a.width_mm * kMilli, a.spacing_mm * kMilli, a.outer_mm * kMilli, sub};
  anchor.validate();
  const double anchor_f = a.anchor_mhz * kMega;
  require_positive(anchor_f, "anchor frequency");

  if (!a.sweep_turns.empty() || !a.sweep_widths_mm.empty()) {
    const std::vector<int> turns = a.sweep_turns.empty() ? std::vector<int>{a.turns} : a.sweep_turns;
    const std::vector<double> widths =
        a.sweep_widths_mm.empty() ? std::vector<double>{a.width_mm} : a.sweep_widths_mm;
    // Spacing follows width in sweeps (equal line and gap).
    std::vector<SpiralSpecd> specs{anchor};
    for (int n : turns) {
      for (double w : widths) {
        specs.push_back({n, w * kMilli, w * kMilli, anchor.outer_side, sub});
      }
    }
    for (const auto& s : specs) s.validate();
    const auto tanks = family_tanks<double>(specs, anchor, anchor_f);
    std::cout << "turns,width_mm,spacing_mm,le_nh,ce_pf,f_mhz\n";
    std::cout << std::setprecision(6);
    for (std::size_t i = 1; i < specs.size(); ++i) {
      const auto& s = specs[i];
      std::cout << s.turns << ',' << s.turn_width / kMilli << ',' << s.turn_spacing / kMilli << ','
                << tanks[i].le / kNano << ',' << tanks[i].ce / kPico << ','
                << resonance_frequency(tanks[i]) / kMega << '\n';
    }
    return;
  }

  const double w = anchor.turn_width;
  const double eps_e = effective_permittivity(sub, w);
  const double z0 = characteristic_impedance(sub, w);
  const auto lengths = unwound_turn_lengths(anchor);
  const double le = equivalent_inductance(anchor);
  const double ce = calibrate_capacitance(le, anchor_f);

  std::cout << std::fixed << std::setprecision(4);
  std::cout << "spiral: " << anchor.turns << " turns, w_t=" << a.width_mm << " mm, s=" << a.spacing_mm
            << " mm, outer=" << a.outer_mm << " mm\n";
  std::cout << "substrate: eps_r=" << sub.eps_r << ", h=" << a.h_mm << " mm\n";
  std::cout << "eps_e=" << eps_e << "\n";
  std::cout << "z0_ohm=" << z0 << "\n";
  for (Eigen::Index k = 0; k < lengths.size(); ++k) {
    std::cout << "turn_" << k + 1 << "_length_mm=" << lengths[k] / kMilli << "\n";
  }
  std::cout << "le_nh=" << le / kNano << "\n";
  std::cout << "ce_pf=" << ce / kPico << " (anchored at " << a.anchor_mhz << " MHz)\n";

  // Reference family, anchored on the 3-turn variant.
  const std::vector<SpiralSpecd> family{kThreeTurnCsr, kFourTurnCsr, kFiveTurnCsr};
  const std::array<double, 3> targets{kThreeTurnResonance, kFourTurnResonance, kFiveTurnResonance};
  const auto f = predict_family<double>(family, kThreeTurnCsr, kThreeTurnResonance);
  std::cout << "family:\n";
  std::cout << "turns,width_mm,f_pred_mhz,f_ref_mhz,rel_err\n";
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    std::cout << family[i].turns << ',' << family[i].turn_width / kMilli << ',' << f[idx] / kMega << ','
              << targets[i] / kMega << ',' << (f[idx] - targets[i]) / targets[i] << '\n';
  }
}

// ---- calibrate / invert ---------------------------------------------------

CalibrationCurve load_curve(const std::string& path) {
  if (!path.empty()) return fit_calibration_curve(io::parse_anchors(io::read_file(path)));
  if (auto p = config_file("curve.json")) return fit_calibration_curve(io::parse_anchors(io::read_file(*p)));
  return default_calibration_curve();
}

SoilCalibrationTable load_table(const std::string& path) {
  if (!path.empty()) return io::parse_soil_table(io::read_file(path));
  if (auto p = config_file("soil_table.json")) return io::parse_soil_table(io::read_file(*p));
  return default_soil_table();
}

std::vector<BeamModel> load_beams(const std::string& path) {
  if (!path.empty()) return io::parse_beams(io::read_file(path));
  if (auto p = config_file("beams.json")) return io::parse_beams(io::read_file(*p));
  return default_beams();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Soil-moisture resonator, reconfigurable antenna and farm network models"};
  app.require_subcommand(1);

  // design
  DesignArgs design;
  auto* design_cmd = app.add_subcommand("design", "Spiral resonator LC model and family prediction");
  design_cmd->add_option("--turns", design.turns, "Number of turns");
  design_cmd->add_option("--width-mm", design.width_mm, "Turn width [mm]");
  design_cmd->add_option("--spacing-mm", design.spacing_mm, "Turn spacing [mm]");
  design_cmd->add_option("--outer-mm", design.outer_mm, "Outer side [mm]");
  design_cmd->add_option("--eps-r", design.eps_r, "Substrate relative permittivity");
  design_cmd->add_option("--tan-delta", design.tan_delta, "Substrate loss tangent");
  design_cmd->add_option("--h-mm", design.h_mm, "Substrate thickness [mm]");
  design_cmd->add_option("--anchor-mhz", design.anchor_mhz, "Observed resonance of this spiral [MHz]");
  design_cmd->add_option("--sweep-turns", design.sweep_turns, "CSV sweep over these turn counts");
  design_cmd->add_option("--sweep-widths-mm", design.sweep_widths_mm, "CSV sweep over these widths [mm]");

  // calibrate
  std::string anchors_path, curve_out;
  auto* cal_cmd = app.add_subcommand("calibrate", "Fit a VWC calibration curve from anchors");
  cal_cmd->add_option("--anchors", anchors_path, "Anchors JSON")->required();
  cal_cmd->add_option("--out", curve_out, "Curve JSON output (default stdout)");

  // invert
  double invert_mhz = 0.0;
  std::string curve_path, table_path;
  auto* inv_cmd = app.add_subcommand("invert", "Resonance frequency to VWC and permittivity");
  inv_cmd->add_option("--mhz", invert_mhz, "Measured resonance [MHz]")->required();
  inv_cmd->add_option("--curve", curve_path, "Calibration curve JSON");
  inv_cmd->add_option("--table", table_path, "Soil permittivity table JSON");

  // simulate
  std::string scenario_path, sim_out, summary_out;
  int epochs = 100;
  std::optional<std::uint64_t> sim_seed;
  auto* sim_cmd = app.add_subcommand("simulate", "Run the farm network simulator");
  sim_cmd->add_option("--scenario", scenario_path, "Scenario JSON")->required();
  sim_cmd->add_option("--epochs", epochs, "Number of epochs");
  sim_cmd->add_option("--out", sim_out, "Per-epoch CSV (default stdout)");
  sim_cmd->add_option("--summary", summary_out, "Summary JSON (default stderr)");
  sim_cmd->add_option("--seed", sim_seed, "Override the scenario seed");

  // report
  std::string rows_path, report_out;
  auto* rep_cmd = app.add_subcommand("report", "Figure-of-merit comparison table");
  rep_cmd->add_option("--rows", rows_path, "Rows CSV (label,S,eps_rm,l); default: bundled comparison");
  rep_cmd->add_option("--out", report_out, "CSV output (default stdout)");

  // trace
  auto* trace_cmd = app.add_subcommand("trace", "Synthesize or analyse |S11| traces");
  trace_cmd->require_subcommand(1);
  struct {
    double f0_mhz = kUnloadedResonance / kMega;
    double bw_mhz = 4.0, depth_db = -25.0, floor_db = -0.2;
    double start_mhz = 100.0, stop_mhz = 250.0, noise_db = 0.0;
    int points = 1501;
    std::uint64_t seed = kDefaultSeed;
    std::string out;
  } synth;
  auto* synth_cmd = trace_cmd->add_subcommand("synth", "Write a synthetic notch trace");
  synth_cmd->add_option("--f0-mhz", synth.f0_mhz, "Notch frequency [MHz]");
  synth_cmd->add_option("--bw-mhz", synth.bw_mhz, "3-dB bandwidth [MHz]");
  synth_cmd->add_option("--depth-db", synth.depth_db, "Notch depth [dB]");
  synth_cmd->add_option("--floor-db", synth.floor_db, "Off-resonance level [dB]");
  synth_cmd->add_option("--start-mhz", synth.start_mhz, "Sweep start [MHz]");
  synth_cmd->add_option("--stop-mhz", synth.stop_mhz, "Sweep stop [MHz]");
  synth_cmd->add_option("--points", synth.points, "Sweep points");
  synth_cmd->add_option("--noise-db", synth.noise_db, "Gaussian noise std [dB]");
  synth_cmd->add_option("--seed", synth.seed, "Noise seed");
  synth_cmd->add_option("--out", synth.out, "Trace CSV (default stdout)");
  std::string find_in;
  double min_depth = 3.0;
  auto* find_cmd = trace_cmd->add_subcommand("find", "Locate the resonance in a trace CSV");
  find_cmd->add_option("--in", find_in, "Trace CSV")->required();
  find_cmd->add_option("--min-depth-db", min_depth, "Minimum notch depth [dB]");

  // pattern
  std::string bias_arg, sweep_pattern, beams_path;
  double sweep_step = 1.0;
  std::optional<double> select_bearing;
  auto* pat_cmd = app.add_subcommand("pattern", "Antenna bias lookup, beam selection and gain sweeps");
  pat_cmd->add_option("--bias", bias_arg, "Bias 'v12,v34' in volts");
  pat_cmd->add_option("--select", select_bearing, "Pick the best pattern toward a bearing [deg]");
  pat_cmd->add_option("--sweep", sweep_pattern, "Gain sweep CSV for a pattern name");
  pat_cmd->add_option("--step-deg", sweep_step, "Sweep step [deg]");
  pat_cmd->add_option("--beams", beams_path, "Beam table JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  if (*design_cmd) return guarded([&] { run_design(design); });

  if (*cal_cmd) {
    return guarded([&] {
      const CalibrationCurve curve = fit_calibration_curve(io::parse_anchors(io::read_file(anchors_path)));
      emit(curve_out, [&](std::ostream& o) { o << io::curve_to_json(curve); });
    });
  }

  if (*inv_cmd) {
    return guarded([&] {
      const CalibrationCurve curve = load_curve(curve_path);
      const SoilCalibrationTable table = load_table(table_path);
      const double vwc = vwc_from_frequency(curve, invert_mhz * kMega);
      std::cout << std::fixed << std::setprecision(4) << "vwc_percent=" << vwc << '\n';
      if (vwc >= table.min_vwc() && vwc <= table.max_vwc()) {
        const Permittivity eps = table.permittivity_at(vwc);
        std::cout << "eps_real=" << eps.real << "\neps_imag=" << eps.imag << '\n';
      } else {
        std::cout << "eps_real=n/a\neps_imag=n/a\n";
      }
    });
  }

  if (*sim_cmd) {
    return guarded([&] {
      if (epochs < 1) throw InputError("--epochs must be at least 1");
      FarmScenario sc = io::parse_scenario(io::read_file(scenario_path));
      if (sim_seed) sc.seed = *sim_seed;
      FarmSimulator sim(std::move(sc));
      RunSummary summary;
      emit(sim_out, [&](std::ostream& o) {
        io::write_epoch_header(o);
        summary = sim.run(epochs, [&](const EpochReport& rep) { io::write_epoch_rows(o, rep); });
      });
      const std::string js = io::summary_to_json(summary);
      if (summary_out.empty()) {
        std::cerr << js;
      } else {
        emit(summary_out, [&](std::ostream& o) { o << js; });
      }
    });
  }

  if (*rep_cmd) {
    return guarded([&] {
      std::vector<ComparisonRow> rows;
      std::optional<fs::path> src = rows_path.empty() ? config_file("comparison.csv") : fs::path(rows_path);
      if (src) {
        rows = io::parse_comparison_csv(io::read_file(*src));
      } else {
        for (const auto& p : published_comparison()) rows.push_back(p.row);
      }
      std::vector<ComparisonEntry> entries;
      try {
        entries = comparison_report(rows);
      } catch (const DomainError& e) {
        throw CalibrationError(e.what());
      }
      emit(report_out, [&](std::ostream& o) { io::write_comparison_csv(o, entries); });
    });
  }

  if (*synth_cmd) {
    return guarded([&] {
      const NotchModel model{synth.f0_mhz * kMega, synth.bw_mhz * kMega, synth.depth_db, synth.floor_db};
      const S11Trace t = synthesize_trace(model, synth.start_mhz * kMega, synth.stop_mhz * kMega,
                                          synth.points, synth.noise_db, synth.seed);
      emit(synth.out, [&](std::ostream& o) { io::write_trace_csv(o, t); });
    });
  }

  if (*find_cmd) {
    return guarded([&] {
      const S11Trace t = io::parse_trace_csv(io::read_file(find_in));
      std::cout << std::fixed << std::setprecision(6) << "f_res_mhz=" << find_resonance(t, min_depth) / kMega
                << '\n';
    });
  }

  if (*pat_cmd) {
    return guarded([&] {
      const std::vector<BeamModel> beams = load_beams(beams_path);
      bool did = false;
      if (!bias_arg.empty()) {
        const auto comma = bias_arg.find(',');
        if (comma == std::string::npos) throw InputError("--bias expects 'v12,v34'");
        BiasState bias{};
        try {
          bias = {std::stod(bias_arg.substr(0, comma)), std::stod(bias_arg.substr(comma + 1))};
        } catch (const std::exception&) {
          throw InputError("--bias expects two numbers");
        }
        const PatternState s = pattern_from_bias(bias);
        std::cout << "pattern=" << pattern_name(s.pattern) << "\ngain_max_dbi=" << s.gain_max
                  << "\ntheta_m_deg=" << s.theta_m << '\n';
        did = true;
      }
      if (select_bearing) {
        const BeamModel& b = select_beam(beams, *select_bearing);
        std::cout << "selected=" << pattern_name(b.state.pattern) << "\ngain_dbi=" << std::fixed
                  << std::setprecision(4) << gain_toward(b, *select_bearing) << '\n';
        did = true;
      }
      if (!sweep_pattern.empty()) {
        const Pattern p = parse_pattern(sweep_pattern);
        const auto it = std::find_if(beams.begin(), beams.end(),
                                     [&](const BeamModel& b) { return b.state.pattern == p; });
        if (it == beams.end()) throw InputError("pattern not present in the beam table");
        io::write_gain_sweep_csv(std::cout, *it, sweep_step);
        did = true;
      }
      if (!did) throw InputError("pattern needs --bias, --select or --sweep");
    });
  }
  return kExitInput;
}
