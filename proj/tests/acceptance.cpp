#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "soilrf/errors.hpp"
#include "soilrf/farm_sim.hpp"
#include "soilrf/io.hpp"
#include "soilrf/microstrip.hpp"
#include "soilrf/pra.hpp"
#include "soilrf/random.hpp"
#include "soilrf/resonator.hpp"
#include "soilrf/sensing.hpp"
#include "soilrf/trace.hpp"

using namespace soilrf;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::vector<int> failed;

void criterion(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o{false, {}};
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0 && dt > budget_s) {
    o.pass = false;
    o.detail += " (over time budget)";
  }
  if (!o.pass) failed.push_back(id);
  std::printf("%s %2d %s [%.3f s] %s\n", o.pass ? "PASS" : "FAIL", id, name, dt, o.detail.c_str());
}

std::string fmt(const char* f, double a) {
  char b[128];
  std::snprintf(b, sizeof b, f, a);
  return b;
}

std::string run_demo(int epochs) {
  FarmScenario sc = io::parse_scenario(io::read_file(std::string(SOILRF_DATA_DIR) + "/demo_scenario.json"));
  FarmSimulator sim(std::move(sc));
  std::ostringstream out;
  io::write_epoch_header(out);
  sim.run(epochs, [&](const EpochReport& r) { io::write_epoch_rows(out, r); });
  return out.str();
}

}  // namespace

// Usage: acceptance [--known-failure ID]...
// Exit status is 0 when the set of failing criteria equals the known set.
int main(int argc, char** argv) {
  std::vector<int> known;
  for (int i = 1; i + 1 < argc; i += 2) {
    if (std::string(argv[i]) == "--known-failure") known.push_back(std::atoi(argv[i + 1]));
  }
  criterion(1, "FOM reproduction", 1.0, [] {
    std::vector<ComparisonRow> rows;
    for (const auto& p : published_comparison()) rows.push_back(p.row);
    const auto report = comparison_report(rows);
    double worst = 0.0;
    bool sorted = true;
    for (std::size_t i = 1; i < report.size(); ++i) sorted = sorted && report[i].fom <= report[i - 1].fom;
    for (const auto& p : published_comparison()) {
      for (const auto& e : report) {
        if (e.row.label == p.row.label) worst = std::max(worst, std::abs(e.fom - p.printed_fom) / p.printed_fom);
      }
    }
    return Outcome{report.size() == 11 && sorted && worst < 0.005,
                   fmt("worst relative error %.4f %%", 100 * worst)};
  });

  criterion(2, "Electrical size", 0, [] {
    const double l = electrical_size(50e-3, 170e6);
    return Outcome{std::abs(l - 0.028) / 0.028 <= 0.02, fmt("l = %.6f", l)};
  });

  criterion(3, "Sensitivity formula", 0, [] {
    const double s = sensitivity(170, 158, 115, 2.5, 23);
    return Outcome{std::abs(s - 1.2338) <= 1e-4, fmt("S = %.6f %%", s)};
  });

  criterion(4, "Resonator family", 0, [] {
    const std::vector<SpiralSpecd> fam{kThreeTurnCsr, kFourTurnCsr, kFiveTurnCsr};
    const auto f = predict_family<double>(fam, kThreeTurnCsr, kThreeTurnResonance);
    const bool ok = f[0] == kThreeTurnResonance && f[1] < f[0] && f[2] < f[1];
    char b[256];
    std::snprintf(b, sizeof b, "f = %.3f, %.3f, %.3f MHz; vs 102/86 MHz: %+.1f %%, %+.1f %%", f[0] / 1e6,
                  f[1] / 1e6, f[2] / 1e6, 100 * (f[1] - kFourTurnResonance) / kFourTurnResonance,
                  100 * (f[2] - kFiveTurnResonance) / kFiveTurnResonance);
    return Outcome{ok, b};
  });

  criterion(5, "Microstrip physics", 5.0, [] {
    bool ok = true;
    for (double w : {0.1e-3, 1e-3, 10e-3}) ok = ok && effective_permittivity(Substrated{1.0, 0.0, 1.6e-3}, w) == 1.0;
    double worst = 0.0;
    for (double er : {2.2, 3.55, 4.3, 10.2}) {
      const Substrated sub{er, 0.0, 1.6e-3};
      const double zn = characteristic_impedance(sub, sub.h, MicrostripBranch::Narrow);
      const double zw = characteristic_impedance(sub, sub.h, MicrostripBranch::Wide);
      worst = std::max(worst, std::abs(zn - zw) / zw);
    }
    ok = ok && worst < 0.01;
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> eps(1.0, 12.0), h(0.1e-3, 3e-3), lw(std::log(1e-5), std::log(3e-2));
    int bad = 0;
    for (int i = 0; i < 1000; ++i) {
      const Substrated sub{eps(rng), 0.0, h(rng)};
      double a = std::exp(lw(rng)), b = std::exp(lw(rng));
      if (a > b) std::swap(a, b);
      if (a == b) continue;
      if (!(effective_permittivity(sub, a) <= effective_permittivity(sub, b) &&
            characteristic_impedance(sub, a) > characteristic_impedance(sub, b))) {
        ++bad;
      }
    }
    ok = ok && bad == 0;
    return Outcome{ok, fmt("branch mismatch %.3f %%", 100 * worst) + ", monotonicity violations " + std::to_string(bad)};
  });

  criterion(6, "Inversion round-trip", 0, [] {
    const auto& table = default_soil_table();
    const auto model = default_shift_model(table);
    const auto curve = ladder_calibration_curve(table, model);
    double worst = 0.0;
    for (const auto& row : table.rows()) {
      const double f = model.frequency(permittivity_at_vwc(table, row.vwc).real);
      worst = std::max(worst, std::abs(vwc_from_frequency(curve, f) - row.vwc));
    }
    return Outcome{worst <= 1e-9, fmt("max |error| %.3g", worst)};
  });

  criterion(7, "Repeatability", 10.0, [] {
    const NotchModel m = default_unloaded_notch();
    constexpr int kReps = 10000;
    int ok = 0;
    for (int r = 0; r < kReps; ++r) {
      if (repeatability_check(m, kDefaultFrequencyJitter, 3, 0xC0FFEEull + r) <= kRepeatabilityBound) ++ok;
    }
    const double p = static_cast<double>(ok) / kReps;
    return Outcome{p >= 0.95, fmt("P(max deviation <= 5 MHz) = %.4f", p)};
  });

  criterion(8, "Varactor fit", 0, [] {
    const auto& v = default_varactor();
    double worst = 0.0;
    for (const auto& p : kVaractorPoints) worst = std::max(worst, std::abs(v.capacitance(p.v) - p.pf) / p.pf);
    char b[160];
    std::snprintf(b, sizeof b, "cj0 %.4f pF, vj %.4f V, m %.4f; worst %.3f %%", v.cj0, v.vj, v.m, 100 * worst);
    return Outcome{worst <= 0.05, b};
  });

  criterion(9, "Pattern state machine", 0, [] {
    bool rows_ok = true;
    for (const auto& s : pattern_table()) rows_ok = rows_ok && pattern_from_bias(bias_for(s.pattern)).pattern == s.pattern;

    bool sym_ok = true;
    auto classify = [](double a, double b) -> std::optional<Pattern> {
      try {
        return pattern_from_bias({a, b}).pattern;
      } catch (const NoDefinedPattern&) {
        return std::nullopt;
      }
    };
    for (double a = 0.0; a <= kMaxBias; a += 0.125) {
      for (double b = 0.0; b <= kMaxBias; b += 0.125) {
        const auto p = classify(a, b), q = classify(b, a);
        if (p.has_value() != q.has_value() || (p && *q != mirror(*p))) sym_ok = false;
      }
    }

    const auto beams = default_beams();
    std::string sel;
    bool sel_ok = true;
    for (const auto& s : pattern_table()) {
      const auto got = select_pattern(beams, s.theta_m).pattern;
      if (got != s.pattern) {
        sel_ok = false;
        sel += std::string(" ") + std::string(pattern_name(s.pattern)) + "@" + fmt("%.0f", s.theta_m) + "->" +
               std::string(pattern_name(got));
      }
    }
    std::string detail = std::string("bias rows ") + (rows_ok ? "ok" : "bad") + ", swap symmetry " +
                         (sym_ok ? "ok" : "bad") + ", selection at measured lobes " + (sel_ok ? "ok" : "mismatch:" + sel);
    return Outcome{rows_ok && sym_ok && sel_ok, detail};
  });

  criterion(10, "Link budget", 0, [] {
    const double pr = friis_received_power(20, 5.63, 12, 1000, 2.45e9);
    double worst = 0.0;
    for (double d = 1.0; d < 1e5; d *= 1.37) {
      const double drop = friis_received_power(20, 5.63, 12, d, 2.45e9) - friis_received_power(20, 5.63, 12, 2 * d, 2.45e9);
      worst = std::max(worst, std::abs(drop - 6.02));
    }
    return Outcome{std::abs(pr + 62.60) <= 0.05 && worst < 0.01,
                   fmt("Pr(1 km) = %.3f dBm", pr) + fmt(", max doubling deviation %.4f dB", worst)};
  });

  criterion(11, "Simulator determinism and conservation", 30.0, [] {
    const bool same = run_demo(100) == run_demo(100);

    FarmScenario sc = io::parse_scenario(io::read_file(std::string(SOILRF_DATA_DIR) + "/demo_scenario.json"));
    sc.seed = 99;
    sc.sensing.noise_std_db = 0.5;
    FarmSimulator sim(std::move(sc));
    long violations = 0, rows = 0;
    sim.run(1000, [&](const EpochReport& rep) {
      for (const auto& r : rep) {
        ++rows;
        if (r.battery_after < 0.0 || r.battery_before < 0.0 ||
            r.battery_after != r.battery_before + r.harvested - r.spent) {
          ++violations;
        }
      }
    });
    return Outcome{same && violations == 0, std::string("byte-identical ") + (same ? "yes" : "no") + ", " +
                                                std::to_string(rows) + " rows, ledger violations " +
                                                std::to_string(violations)};
  });

  std::printf("%zu of 11 criteria failed", failed.size());
  if (!known.empty()) {
    std::printf(" (known failures:");
    for (int k : known) std::printf(" %d", k);
    std::printf(")");
  }
  std::printf("\n");
  std::sort(known.begin(), known.end());
  return failed == known ? 0 : 1;
}
