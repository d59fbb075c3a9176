#pragma once

// Config parsing, validation and report generation for the CLI commands.
//
// A run is described by one JSON document; CLI flags override config fields
// (flag > config field > default). Reports embed the resolved config they
// were produced from, and all floats are written with 17 significant digits,
// so the same config and seed produce byte-identical files.

#include <qsorter/devices.hpp>
#include <qsorter/json_io.hpp>
#include <qsorter/sorter.hpp>

#include <optional>
#include <string>
#include <vector>

namespace qsorter {

/// Config/usage problem; the CLI maps this to exit code 2.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class ObservableKind { Pbs, Oam, Wavelength, Custom };
enum class OutputFormat { Json, Csv };

struct SweepConfig {
  std::vector<double> sigmas;
  int trials = 0;
  std::uint64_t seed = 0;
};

struct RunConfig {
  Index d = 0;
  ObservableKind observable = ObservableKind::Pbs;
  std::vector<long long> oam_levels;    // empty means 0..d-1
  std::vector<double> wavelengths;      // wavelength observable, grid form
  int search_bound = 64;                // wavelength observable, grid form
  std::optional<AwgDesign> design;      // wavelength observable, design form
  Eigen::MatrixXd custom_phases;        // custom observable, (arm, sigma)
  Architecture architecture = Architecture::MachZehnder;
  Reflector reflector = Reflector::Retroreflector;
  OutputGate output_gate = OutputGate::FDagger;
  std::vector<double> perturbations;
  std::optional<SweepConfig> sweep;
  std::optional<Eigen::VectorXcd> input_sigma;  // emit the output state
  OutputFormat format = OutputFormat::Json;
  std::string out;
  bool include_timing = false;
};

/// Parses and validates; throws ConfigError naming the offending field.
RunConfig parse_run_config(const nlohmann::json& j);

/// Canonical resolved form of the config, embedded in every report.
ordered_json config_to_json(const RunConfig& config);

/// The phase module described by the config, plus the AWG design used when
/// the observable is a wavelength grid.
struct ResolvedModule {
  PhaseModule module;
  std::optional<AwgDesign> design;
};
ResolvedModule resolve_module(const RunConfig& config);

SorterSpec make_spec(const RunConfig& config, PhaseModule module);

struct SimulateOutcome {
  SortingMatrix sorting;
  Efficiency eff;
  std::optional<Eigen::VectorXcd> state;  // d^2 output amplitudes
  std::optional<AwgDesign> design;
  double timing_ms = 0.0;
};

SimulateOutcome run_simulate(const RunConfig& config);
ordered_json simulate_report(const RunConfig& config, const SimulateOutcome& outcome);
/// One row per (j, s) pair: columns j, s, probability.
std::string simulate_csv(const RunConfig& config, const SimulateOutcome& outcome);

struct SweepOutcome {
  std::vector<SweepResult> points;
  double timing_ms = 0.0;
};

SweepOutcome run_sweep(const RunConfig& config);
ordered_json sweep_report(const RunConfig& config, const SweepOutcome& outcome);
/// One row per (sigma, trial): columns sigma, trial, worst, mean.
std::string sweep_csv(const RunConfig& config, const SweepOutcome& outcome);

}  // namespace qsorter
