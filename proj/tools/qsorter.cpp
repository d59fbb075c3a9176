// qsorter: build qudit sorters from config files, simulate sorting and
// crosstalk, design AWG length programs and compile mode unitaries into
// beamsplitter meshes.
//
// Exit codes: 0 success, 1 numerical failure, 2 usage/validation error.

#include <qsorter/cascade.hpp>
#include <qsorter/json_io.hpp>
#include <qsorter/run_config.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace qsorter;

nlohmann::json load_json(const std::string& path) {
  try {
    return nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config error: " + path + " is not valid JSON: " + e.what());
  }
}

struct CommonArgs {
  std::string config_path;
  std::string out;
  std::string format;
  std::optional<long long> d;
  bool timing = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required) {
  auto* opt = cmd->add_option("--config", args.config_path, "JSON config file");
  if (config_required) opt->required();
  cmd->add_option("--out", args.out, "output file (overrides config \"out\")");
  cmd->add_option("--d", args.d, "dimension override");
  cmd->add_flag("--timing", args.timing, "include timing_ms in the report");
  cmd->add_option("--format", args.format, "report format: json or csv");
}

// Flag overrides are applied to the raw JSON document so one validation
// path covers both sources (flag > config field > default).
RunConfig resolved_config(const CommonArgs& args) {
  nlohmann::json doc = args.config_path.empty() ? nlohmann::json::object()
                                                : load_json(args.config_path);
  if (args.d) doc["d"] = *args.d;
  if (!args.format.empty()) doc["format"] = args.format;
  RunConfig config = parse_run_config(doc);
  if (!args.out.empty()) config.out = args.out;
  config.include_timing = args.timing;
  if (config.out.empty())
    throw ConfigError("config error: field \"out\": no output path (use --out or config \"out\")");
  return config;
}

void write_report(const RunConfig& config, const ordered_json& json_report,
                  const std::string& csv_report) {
  if (config.format == OutputFormat::Json)
    write_text_file(config.out, dump_deterministic(json_report) + "\n");
  else
    write_text_file(config.out, csv_report);
  std::printf("report written to %s\n", config.out.c_str());
}

int cmd_simulate(const CommonArgs& args) {
  const RunConfig config = resolved_config(args);
  const SimulateOutcome outcome = run_simulate(config);
  std::printf("efficiency: worst = %.6g, mean = %.6g\n", outcome.eff.worst, outcome.eff.mean);
  write_report(config, simulate_report(config, outcome), simulate_csv(config, outcome));
  return 0;
}

struct SweepArgs {
  CommonArgs common;
  std::vector<double> sigmas;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
};

int cmd_sweep(const SweepArgs& args) {
  nlohmann::json doc = load_json(args.common.config_path);
  if (!args.sigmas.empty()) doc["sweep"]["sigmas"] = args.sigmas;
  if (args.trials) doc["sweep"]["trials"] = *args.trials;
  if (args.seed) doc["sweep"]["seed"] = *args.seed;
  if (args.common.d) doc["d"] = *args.common.d;
  if (!args.common.format.empty()) doc["format"] = args.common.format;

  RunConfig config = parse_run_config(doc);
  if (!args.common.out.empty()) config.out = args.common.out;
  config.include_timing = args.common.timing;
  if (config.out.empty())
    throw ConfigError("config error: field \"out\": no output path (use --out or config \"out\")");

  const SweepOutcome outcome = run_sweep(config);
  for (const auto& point : outcome.points)
    std::printf("sigma = %.6g: mean efficiency = %.6g, min worst = %.6g\n", point.sigma,
                point.mean_mean, point.min_worst);
  write_report(config, sweep_report(config, outcome), sweep_csv(config, outcome));
  return 0;
}

struct AwgArgs {
  std::string config_path;
  std::string out;
  std::optional<long long> d;
  std::vector<double> wavelengths;
  std::optional<int> bound;
};

int cmd_awg_design(const AwgArgs& args) {
  nlohmann::json doc =
      args.config_path.empty() ? nlohmann::json::object() : load_json(args.config_path);
  const long long d = args.d ? *args.d : doc.value("d", 0ll);
  std::vector<double> wavelengths = args.wavelengths;
  if (wavelengths.empty() && doc.contains("wavelengths"))
    wavelengths = doc.at("wavelengths").get<std::vector<double>>();
  const int bound = args.bound ? *args.bound : doc.value("search_bound", 64);
  std::string out = args.out.empty() ? doc.value("out", "") : args.out;
  if (d < 1) throw ConfigError("config error: field \"d\": must be >= 1");
  if (out.empty())
    throw ConfigError("config error: field \"out\": no output path (use --out or config \"out\")");

  const AwgDesign design = awg_design(d, wavelengths, bound);
  std::printf("residual = %.6g\n", design.residual);
  write_text_file(out, dump_deterministic(awg_to_json(design)) + "\n");
  std::printf("design written to %s\n", out.c_str());
  return 0;
}

struct DecomposeArgs {
  std::string config_path;
  std::string out;
  std::string gate;
  std::string matrix_path;
};

UnitaryXcd decompose_input(const DecomposeArgs& args, const nlohmann::json& doc) {
  std::string gate = args.gate.empty() ? doc.value("gate", "") : args.gate;
  std::string matrix_path = args.matrix_path.empty() ? doc.value("matrix", "") : args.matrix_path;
  if (!gate.empty() && !matrix_path.empty())
    throw ConfigError("config error: field \"gate\": mutually exclusive with \"matrix\"");
  if (!gate.empty()) {
    const auto colon = gate.find(':');
    if (gate.substr(0, colon) != "fourier" || colon == std::string::npos)
      throw ConfigError("config error: field \"gate\": expected \"fourier:<d>\"");
    const long long d = std::atoll(gate.c_str() + colon + 1);
    if (d < 1) throw ConfigError("config error: field \"gate\": dimension must be >= 1");
    return fourier(d);
  }
  if (!matrix_path.empty()) return unitary_from_json(load_json(matrix_path), 1e-10);
  if (doc.contains("unitary")) return unitary_from_json(doc, 1e-10);
  throw ConfigError("config error: field \"gate\": provide --gate, --matrix or a config \"unitary\"");
}

int cmd_decompose(const DecomposeArgs& args) {
  nlohmann::json doc =
      args.config_path.empty() ? nlohmann::json::object() : load_json(args.config_path);
  std::string out = args.out.empty() ? doc.value("out", "") : args.out;
  if (out.empty())
    throw ConfigError("config error: field \"out\": no output path (use --out or config \"out\")");

  const UnitaryXcd u = decompose_input(args, doc);
  const BeamsplitterMesh mesh = decompose(u);
  const double error = max_abs_diff(reconstruct(mesh).matrix(), u.matrix());
  std::printf("beamsplitters = %lld\n", static_cast<long long>(mesh.beamsplitter_count()));
  std::printf("reconstruction error = %.6g\n", error);
  write_text_file(out, dump_deterministic(mesh_to_json(mesh)) + "\n");
  std::printf("mesh written to %s\n", out.c_str());
  return 0;
}

struct CascadeArgs {
  std::string config_path;
  std::string out;
  std::optional<long long> d;
};

int cmd_compare_cascade(const CascadeArgs& args) {
  nlohmann::json doc =
      args.config_path.empty() ? nlohmann::json::object() : load_json(args.config_path);
  const long long d = args.d ? *args.d : doc.value("d", 0ll);
  std::string out = args.out.empty() ? doc.value("out", "") : args.out;

  const CascadeComparison c = cascade_comparison(d);
  std::printf("d = %lld\n", static_cast<long long>(c.d));
  std::printf("this scheme: %lld interferometer, %lld Dove prisms, %lld Fourier gates (each <= %lld beamsplitters)\n",
              static_cast<long long>(c.sorter_interferometers),
              static_cast<long long>(c.sorter_dove_prisms),
              static_cast<long long>(c.sorter_fourier_gates),
              static_cast<long long>(c.sorter_max_beamsplitters_per_fourier));
  if (c.cascade_applicable)
    std::printf("cascade:     %lld MZIs, %lld Dove prisms, %lld holograms\n",
                static_cast<long long>(c.cascade_mzis),
                static_cast<long long>(c.cascade_dove_prisms),
                static_cast<long long>(c.cascade_holograms));
  else
    std::printf("cascade:     not applicable (d is not a power of 2)\n");

  if (!out.empty()) {
    ordered_json j;
    j["d"] = c.d;
    ordered_json sorter;
    sorter["interferometers"] = c.sorter_interferometers;
    sorter["dove_prisms"] = c.sorter_dove_prisms;
    sorter["fourier_gates"] = c.sorter_fourier_gates;
    sorter["max_beamsplitters_per_fourier"] = c.sorter_max_beamsplitters_per_fourier;
    j["sorter"] = std::move(sorter);
    ordered_json cascade;
    cascade["applicable"] = c.cascade_applicable;
    if (c.cascade_applicable) {
      cascade["mzis"] = c.cascade_mzis;
      cascade["dove_prisms"] = c.cascade_dove_prisms;
      cascade["holograms"] = c.cascade_holograms;
    } else {
      cascade["reason"] = "d is not a power of 2";
    }
    j["cascade"] = std::move(cascade);
    write_text_file(out, dump_deterministic(j) + "\n");
    std::printf("report written to %s\n", out.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"universal qudit sorter: simulator, AWG designer and mesh compiler"};
  app.require_subcommand(1);

  CommonArgs simulate_args;
  auto* simulate_cmd = app.add_subcommand("simulate", "build a sorter and report its sorting matrix");
  add_common(simulate_cmd, simulate_args, true);

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "Monte-Carlo phase-noise sweep");
  add_common(sweep_cmd, sweep_args.common, true);
  sweep_cmd->add_option("--sigmas", sweep_args.sigmas, "noise levels override");
  sweep_cmd->add_option("--trials", sweep_args.trials, "trials override");
  sweep_cmd->add_option("--seed", sweep_args.seed, "seed override");

  AwgArgs awg_args;
  auto* awg_cmd = app.add_subcommand("awg-design", "solve waveguide lengths for a wavelength grid");
  awg_cmd->add_option("--config", awg_args.config_path, "JSON config file");
  awg_cmd->add_option("--out", awg_args.out, "output file");
  awg_cmd->add_option("--d", awg_args.d, "number of wavelength bins");
  awg_cmd->add_option("--wavelengths", awg_args.wavelengths, "wavelength grid");
  awg_cmd->add_option("--bound", awg_args.bound, "integer search bound");

  DecomposeArgs decompose_args;
  auto* decompose_cmd = app.add_subcommand("decompose", "compile a unitary into a beamsplitter mesh");
  decompose_cmd->add_option("--config", decompose_args.config_path, "JSON config file");
  decompose_cmd->add_option("--out", decompose_args.out, "output file");
  decompose_cmd->add_option("--gate", decompose_args.gate, "named gate, e.g. fourier:8");
  decompose_cmd->add_option("--matrix", decompose_args.matrix_path, "JSON matrix file");

  CascadeArgs cascade_args;
  auto* cascade_cmd = app.add_subcommand("compare-cascade", "component counts vs cascaded MZI sorters");
  cascade_cmd->add_option("--config", cascade_args.config_path, "JSON config file");
  cascade_cmd->add_option("--out", cascade_args.out, "optional JSON report");
  cascade_cmd->add_option("--d", cascade_args.d, "dimension");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (simulate_cmd->parsed()) return cmd_simulate(simulate_args);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_args);
    if (awg_cmd->parsed()) return cmd_awg_design(awg_args);
    if (decompose_cmd->parsed()) return cmd_decompose(decompose_args);
    if (cascade_cmd->parsed()) return cmd_compare_cascade(cascade_args);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
