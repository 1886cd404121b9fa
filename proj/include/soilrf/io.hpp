#pragma once

// File formats: JSON for tables, curves, beams and scenarios; CSV for traces,
// comparison rows, gain sweeps and per-epoch simulator output.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "soilrf/farm_sim.hpp"
#include "soilrf/pra.hpp"
#include "soilrf/sensing.hpp"
#include "soilrf/trace.hpp"

namespace soilrf::io {

/// Whole file as a string; InputError if it cannot be opened.
std::string read_file(const std::filesystem::path& path);

// JSON syntax errors raise InputError with "line L, column C"; missing or
// mistyped fields raise InputError naming the field.
SoilCalibrationTable parse_soil_table(const std::string& json_text);
std::vector<CalibrationAnchor> parse_anchors(const std::string& json_text);
std::string curve_to_json(const CalibrationCurve& curve);

std::vector<BeamModel> parse_beams(const std::string& json_text);
std::string beams_to_json(const std::vector<BeamModel>& beams);

FarmScenario parse_scenario(const std::string& json_text);

std::vector<ComparisonRow> parse_comparison_csv(const std::string& csv_text);
void write_comparison_csv(std::ostream& out, const std::vector<ComparisonEntry>& entries);

S11Trace parse_trace_csv(const std::string& csv_text);
void write_trace_csv(std::ostream& out, const S11Trace& trace);

void write_gain_sweep_csv(std::ostream& out, const BeamModel& beam, double step_deg);

void write_epoch_header(std::ostream& out);
void write_epoch_rows(std::ostream& out, const EpochReport& report);
std::string summary_to_json(const RunSummary& summary);

}  // namespace soilrf::io
