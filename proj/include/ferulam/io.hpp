#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ferulam/census.hpp"
#include "ferulam/forcing.hpp"
#include "ferulam/invariants.hpp"
#include "ferulam/pingpong.hpp"
#include "ferulam/torus_flow.hpp"

namespace ferulam {

/// Round-trip-safe decimal formatting (17 significant digits, '.' separator).
std::string format_double(double x);

// --- JSON ------------------------------------------------------------------

nlohmann::json forcing_to_json(const ForcingSpec& spec);

/// Builds a ForcingSpec from {"nu": [...], "c0": x, "modes": [{"k": [...],
/// "a": x, "b": x}, ...]} and verifies the nonresonance certificate.
ForcingSpec forcing_from_json(const nlohmann::json& j, int Q = 20, double resonance_tol = 1e-9);

struct SimulateConfig {
    std::vector<double> omega;   // empty: Haar-sample one point from the seed
    double t0 = 0.0;
    double E0 = 100.0;
    std::size_t n_max = 1000;
    double E_floor = 0.0;        // <= 0: derive 1.01 * v*^2/2
};

struct DriftConfig {
    std::size_t n_per_decade = 1000;
    double E_lo = 1e2;
    double E_hi = 1e6;
    double C = 1.0;
    std::size_t n_chat = 10000;   // samples for the drift-constant estimate
};

struct DecomposeConfig {
    std::size_t n = 100000;
    std::size_t n_rectangles = 20;          // used when rectangles is empty
    std::vector<Rectangle> rectangles;
};

struct RunConfig {
    ForcingSpec forcing;
    std::uint64_t seed = 1;
    int nonresonance_Q = 20;
    double resonance_tol = 1e-9;
    SimulateConfig simulate;
    CensusConfig census;
    DriftConfig drift;
    DecomposeConfig decompose;
};

/// Parses a full run configuration. relative forcing_file paths resolve
/// against base_dir. Throws ConfigError with line/column info on bad JSON.
RunConfig parse_run_config(const nlohmann::json& j, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

/// Canonical JSON of the resolved configuration (key-sorted by construction).
nlohmann::json run_config_to_json(const RunConfig& cfg);

/// FNV-1a 64 over a canonical JSON dump, as fixed-width hex.
std::string config_hash(const nlohmann::json& canonical);

nlohmann::json census_report_to_json(const CensusReport& report);
nlohmann::json recurrence_to_json(const RecurrenceProfile& prof);
nlohmann::json drift_scaling_to_json(const DriftScalingReport& report, double c_hat_estimate);
nlohmann::json haar_check_to_json(const HaarCheckReport& report);
nlohmann::json noninjectivity_to_json(const NonInjectivityExample& ex);

// --- CSV ---------------------------------------------------------------------

void write_orbit_csv(const std::filesystem::path& path, const OrbitTrace& trace);
void write_drift_csv(const std::filesystem::path& path, const std::vector<DriftRecord>& records);
void write_haar_csv(const std::filesystem::path& path, const HaarCheckReport& report);
void write_census_fractions_csv(const std::filesystem::path& path, const CensusReport& report);
void write_census_counts_csv(const std::filesystem::path& path, const CensusReport& report);
void write_recurrence_csv(const std::filesystem::path& path, const RecurrenceProfile& prof);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Reader for the artifact's own CSV output (comma-separated, one header row).
CsvTable read_csv(const std::filesystem::path& path);
OrbitTrace read_orbit_csv(const std::filesystem::path& path);

// --- SVG ---------------------------------------------------------------------

struct SvgSeries {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

/// Self-contained SVG line chart (no external renderer or fonts required).
void write_line_chart_svg(const std::filesystem::path& path, const std::string& title,
                          const std::string& x_label, const std::string& y_label,
                          const std::vector<SvgSeries>& series);

void write_orbit_svg(const std::filesystem::path& path, const OrbitTrace& trace);
void write_census_svg(const std::filesystem::path& path, const CensusReport& report);

/// Writes text to path, creating parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

} // namespace ferulam
