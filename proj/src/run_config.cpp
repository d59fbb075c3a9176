#include <qsorter/run_config.hpp>

#include <chrono>
#include <cmath>

namespace qsorter {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError("config error: field \"" + field + "\": " + what);
}

template <class T>
T get_field(const nlohmann::json& j, const std::string& field, const char* type_name) {
  try {
    return j.at(field).get<T>();
  } catch (const nlohmann::json::exception&) {
    fail(field, std::string("expected ") + type_name);
  }
}

ObservableKind parse_observable_kind(const std::string& s) {
  if (s == "pbs") return ObservableKind::Pbs;
  if (s == "oam") return ObservableKind::Oam;
  if (s == "wavelength") return ObservableKind::Wavelength;
  if (s == "custom") return ObservableKind::Custom;
  fail("observable.type", "must be one of pbs, oam, wavelength, custom (got \"" + s + "\")");
}

Eigen::VectorXcd parse_input(const nlohmann::json& j, Index d) {
  if (!j.is_array() || static_cast<Index>(j.size()) != d)
    fail("input", "expected an array of d [re, im] amplitudes");
  Eigen::VectorXcd v(d);
  for (Index s = 0; s < d; ++s) {
    const auto& entry = j[s];
    if (entry.is_array() && entry.size() == 2)
      v(s) = std::complex<double>(entry[0].get<double>(), entry[1].get<double>());
    else if (entry.is_number())
      v(s) = std::complex<double>(entry.get<double>(), 0.0);
    else
      fail("input", "amplitudes must be numbers or [re, im] pairs");
  }
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) fail("input", "amplitudes must have nonzero norm");
  return v / norm;
}

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

ordered_json efficiency_to_json(const Efficiency& e) {
  ordered_json j;
  j["worst"] = e.worst;
  j["mean"] = e.mean;
  return j;
}

ordered_json matrix_to_json(const Eigen::MatrixXd& m) {
  ordered_json rows = ordered_json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string csv_config_line(const RunConfig& config) {
  return "# config " + dump_deterministic(config_to_json(config)) + "\n";
}

}  // namespace

RunConfig parse_run_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config error: top-level document must be an object");
  RunConfig config;

  if (!j.contains("d")) fail("d", "missing");
  if (!j.at("d").is_number_integer()) fail("d", "expected a positive integer");
  config.d = get_field<Index>(j, "d", "a positive integer");
  if (config.d < 1) fail("d", "must be >= 1 (got " + std::to_string(config.d) + ")");

  if (!j.contains("observable")) fail("observable", "missing");
  const auto& obs = j.at("observable");
  if (!obs.is_object() || !obs.contains("type"))
    fail("observable", "expected an object with a \"type\" field");
  config.observable = parse_observable_kind(obs.at("type").get<std::string>());

  switch (config.observable) {
    case ObservableKind::Pbs:
      if (config.d != 2) fail("d", "the pbs observable requires d = 2");
      break;
    case ObservableKind::Oam:
      if (obs.contains("levels")) {
        try {
          config.oam_levels = obs.at("levels").get<std::vector<long long>>();
        } catch (const nlohmann::json::exception&) {
          fail("observable.levels", "expected an array of integers");
        }
        if (static_cast<Index>(config.oam_levels.size()) != config.d)
          fail("observable.levels", "expected exactly d entries");
      }
      break;
    case ObservableKind::Wavelength:
      if (obs.contains("design")) {
        try {
          config.design = awg_from_json(obs.at("design"));
        } catch (const std::invalid_argument& e) {
          fail("observable.design", e.what());
        }
        if (config.design->d != config.d) fail("observable.design", "design dimension != d");
      } else if (obs.contains("wavelengths")) {
        try {
          config.wavelengths = obs.at("wavelengths").get<std::vector<double>>();
        } catch (const nlohmann::json::exception&) {
          fail("observable.wavelengths", "expected an array of numbers");
        }
        if (static_cast<Index>(config.wavelengths.size()) != config.d)
          fail("observable.wavelengths", "expected exactly d entries");
        if (obs.contains("search_bound")) {
          config.search_bound = get_field<int>(obs, "search_bound", "a positive integer");
          if (config.search_bound < 1) fail("observable.search_bound", "must be >= 1");
        }
      } else {
        fail("observable", "wavelength observable needs \"wavelengths\" or \"design\"");
      }
      break;
    case ObservableKind::Custom: {
      if (!obs.contains("phases")) fail("observable.phases", "missing");
      const auto& rows = obs.at("phases");
      if (!rows.is_array() || static_cast<Index>(rows.size()) != config.d)
        fail("observable.phases", "expected a d x d array (rows indexed by arm)");
      config.custom_phases.resize(config.d, config.d);
      for (Index k = 0; k < config.d; ++k) {
        if (!rows[k].is_array() || static_cast<Index>(rows[k].size()) != config.d)
          fail("observable.phases", "expected a d x d array (rows indexed by arm)");
        for (Index s = 0; s < config.d; ++s) {
          if (!rows[k][s].is_number()) fail("observable.phases", "entries must be numbers");
          config.custom_phases(k, s) = rows[k][s].get<double>();
        }
      }
      break;
    }
  }

  if (j.contains("architecture")) {
    const auto s = get_field<std::string>(j, "architecture", "a string");
    if (s == "mzi")
      config.architecture = Architecture::MachZehnder;
    else if (s == "michelson")
      config.architecture = Architecture::Michelson;
    else
      fail("architecture", "must be \"mzi\" or \"michelson\" (got \"" + s + "\")");
  }

  if (j.contains("reflector")) {
    if (config.architecture != Architecture::Michelson)
      fail("reflector", "only valid with the michelson architecture");
    const auto s = get_field<std::string>(j, "reflector", "a string");
    if (s == "retroreflector")
      config.reflector = Reflector::Retroreflector;
    else if (s == "mirror")
      config.reflector = Reflector::Mirror;
    else
      fail("reflector", "must be \"retroreflector\" or \"mirror\" (got \"" + s + "\")");
  }

  if (j.contains("output_gate")) {
    if (config.architecture != Architecture::MachZehnder)
      fail("output_gate", "only valid with the mzi architecture");
    const auto s = get_field<std::string>(j, "output_gate", "a string");
    if (s == "fdagger")
      config.output_gate = OutputGate::FDagger;
    else if (s == "f")
      config.output_gate = OutputGate::F;
    else
      fail("output_gate", "must be \"fdagger\" or \"f\" (got \"" + s + "\")");
  }

  if (j.contains("perturbations")) {
    try {
      config.perturbations = j.at("perturbations").get<std::vector<double>>();
    } catch (const nlohmann::json::exception&) {
      fail("perturbations", "expected an array of numbers");
    }
    if (static_cast<Index>(config.perturbations.size()) != config.d)
      fail("perturbations", "expected exactly d entries");
  }

  if (j.contains("sweep")) {
    if (!config.perturbations.empty())
      fail("sweep", "mutually exclusive with fixed perturbations");
    const auto& sw = j.at("sweep");
    if (!sw.is_object() || !sw.contains("sigmas") || !sw.contains("trials"))
      fail("sweep", "expected an object with \"sigmas\" and \"trials\"");
    SweepConfig sweep;
    try {
      sweep.sigmas = sw.at("sigmas").get<std::vector<double>>();
    } catch (const nlohmann::json::exception&) {
      fail("sweep.sigmas", "expected an array of numbers");
    }
    if (sweep.sigmas.empty()) fail("sweep.sigmas", "must not be empty");
    for (double s : sweep.sigmas)
      if (!(s >= 0.0)) fail("sweep.sigmas", "sigmas must be >= 0");
    sweep.trials = get_field<int>(sw, "trials", "a positive integer");
    if (sweep.trials < 1) fail("sweep.trials", "must be >= 1");
    if (sw.contains("seed")) sweep.seed = get_field<std::uint64_t>(sw, "seed", "an integer");
    config.sweep = std::move(sweep);
  }

  if (j.contains("input")) config.input_sigma = parse_input(j.at("input"), config.d);

  if (j.contains("format")) {
    const auto s = get_field<std::string>(j, "format", "a string");
    if (s == "json")
      config.format = OutputFormat::Json;
    else if (s == "csv")
      config.format = OutputFormat::Csv;
    else
      fail("format", "must be \"json\" or \"csv\" (got \"" + s + "\")");
  }

  if (j.contains("out")) config.out = get_field<std::string>(j, "out", "a string");

  return config;
}

ordered_json config_to_json(const RunConfig& config) {
  ordered_json j;
  j["d"] = config.d;

  ordered_json obs;
  switch (config.observable) {
    case ObservableKind::Pbs:
      obs["type"] = "pbs";
      break;
    case ObservableKind::Oam: {
      obs["type"] = "oam";
      std::vector<long long> levels = config.oam_levels;
      if (levels.empty())
        for (Index s = 0; s < config.d; ++s) levels.push_back(s);
      obs["levels"] = levels;
      break;
    }
    case ObservableKind::Wavelength:
      obs["type"] = "wavelength";
      if (config.design) {
        obs["design"] = awg_to_json(*config.design);
      } else {
        obs["wavelengths"] = config.wavelengths;
        obs["search_bound"] = config.search_bound;
      }
      break;
    case ObservableKind::Custom: {
      obs["type"] = "custom";
      obs["phases"] = matrix_to_json(config.custom_phases);
      break;
    }
  }
  j["observable"] = std::move(obs);

  j["architecture"] = config.architecture == Architecture::MachZehnder ? "mzi" : "michelson";
  if (config.architecture == Architecture::Michelson)
    j["reflector"] =
        config.reflector == Reflector::Retroreflector ? "retroreflector" : "mirror";
  else
    j["output_gate"] = config.output_gate == OutputGate::FDagger ? "fdagger" : "f";

  std::vector<double> perturbations = config.perturbations;
  if (perturbations.empty() && !config.sweep) perturbations.assign(config.d, 0.0);
  if (!config.sweep) j["perturbations"] = perturbations;

  if (config.sweep) {
    ordered_json sw;
    sw["sigmas"] = config.sweep->sigmas;
    sw["trials"] = config.sweep->trials;
    sw["seed"] = config.sweep->seed;
    j["sweep"] = std::move(sw);
  }

  if (config.input_sigma) {
    ordered_json input = ordered_json::array();
    for (Index s = 0; s < config.input_sigma->size(); ++s)
      input.push_back(complex_to_json((*config.input_sigma)(s)));
    j["input"] = std::move(input);
  }

  j["format"] = config.format == OutputFormat::Json ? "json" : "csv";
  return j;
}

ResolvedModule resolve_module(const RunConfig& config) {
  switch (config.observable) {
    case ObservableKind::Pbs:
      return {pbs_module(), std::nullopt};
    case ObservableKind::Oam: {
      OamBasisMap map = config.oam_levels.empty() ? OamBasisMap::sequential(config.d)
                                                  : OamBasisMap{config.d, config.oam_levels};
      return {oam_module(map), std::nullopt};
    }
    case ObservableKind::Wavelength: {
      AwgDesign design = config.design ? *config.design
                                       : awg_design(config.d, config.wavelengths,
                                                    config.search_bound);
      return {awg_module(design), design};
    }
    case ObservableKind::Custom: {
      Eigen::MatrixXd phases = config.custom_phases;
      return {PhaseModule{config.d,
                          [phases](Index k, Index s) { return phases(k, s); }, false},
              std::nullopt};
    }
  }
  throw ConfigError("config error: field \"observable\": unknown kind");
}

SorterSpec make_spec(const RunConfig& config, PhaseModule module) {
  SorterSpec spec;
  spec.d = config.d;
  spec.architecture = config.architecture;
  spec.module = std::move(module);
  spec.reflector = config.reflector;
  spec.output_gate = config.output_gate;
  spec.perturbations = config.perturbations;
  return spec;
}

SimulateOutcome run_simulate(const RunConfig& config) {
  if (config.sweep)
    throw ConfigError("config error: field \"sweep\": not valid for simulate (use the sweep command)");
  Stopwatch timer;
  ResolvedModule resolved = resolve_module(config);
  SorterSpec spec = make_spec(config, std::move(resolved.module));
  validate_spec(spec);

  const UnitaryXcd u = spec.architecture == Architecture::MachZehnder ? build_mzi(spec)
                                                                      : build_michelson(spec);
  SimulateOutcome outcome;
  outcome.sorting = sorting_matrix(u);
  outcome.eff = efficiency(outcome.sorting);
  outcome.design = std::move(resolved.design);
  if (config.input_sigma) {
    const auto state = simulate(u, CompositeStateXcd::from_sigma(config.d, *config.input_sigma));
    outcome.state = state.amplitudes();
  }
  outcome.timing_ms = timer.ms();
  return outcome;
}

ordered_json simulate_report(const RunConfig& config, const SimulateOutcome& outcome) {
  ordered_json report;
  report["config"] = config_to_json(config);
  if (outcome.design) report["awg_design"] = awg_to_json(*outcome.design);
  report["sorting_matrix"] = matrix_to_json(outcome.sorting.p);
  report["efficiency"] = efficiency_to_json(outcome.eff);
  if (outcome.state) {
    ordered_json state = ordered_json::array();
    for (Index i = 0; i < outcome.state->size(); ++i)
      state.push_back(complex_to_json((*outcome.state)(i)));
    report["state"] = std::move(state);
  }
  if (config.include_timing) report["timing_ms"] = outcome.timing_ms;
  return report;
}

std::string simulate_csv(const RunConfig& config, const SimulateOutcome& outcome) {
  std::string csv = csv_config_line(config);
  csv += "j,s,probability\n";
  const auto& p = outcome.sorting.p;
  for (Index j = 0; j < p.rows(); ++j)
    for (Index s = 0; s < p.cols(); ++s)
      csv += std::to_string(j) + "," + std::to_string(s) + "," + format_double(p(j, s)) + "\n";
  return csv;
}

SweepOutcome run_sweep(const RunConfig& config) {
  if (!config.sweep)
    throw ConfigError("config error: field \"sweep\": required by the sweep command");
  Stopwatch timer;
  ResolvedModule resolved = resolve_module(config);
  SorterSpec spec = make_spec(config, std::move(resolved.module));
  validate_spec(spec);

  SweepOutcome outcome;
  for (double sigma : config.sweep->sigmas)
    outcome.points.push_back(
        sweep_perturbations(spec, sigma, config.sweep->trials, config.sweep->seed));
  outcome.timing_ms = timer.ms();
  return outcome;
}

ordered_json sweep_report(const RunConfig& config, const SweepOutcome& outcome) {
  ordered_json report;
  report["config"] = config_to_json(config);
  ordered_json points = ordered_json::array();
  for (const auto& point : outcome.points) {
    ordered_json p;
    p["sigma"] = point.sigma;
    p["trials"] = static_cast<std::int64_t>(point.per_trial.size());
    ordered_json aggregate;
    aggregate["mean_worst"] = point.mean_worst;
    aggregate["mean_mean"] = point.mean_mean;
    aggregate["min_worst"] = point.min_worst;
    p["aggregate"] = std::move(aggregate);
    ordered_json trials = ordered_json::array();
    for (const auto& t : point.per_trial) trials.push_back(efficiency_to_json(t));
    p["per_trial"] = std::move(trials);
    points.push_back(std::move(p));
  }
  report["sweep"] = std::move(points);
  if (config.include_timing) report["timing_ms"] = outcome.timing_ms;
  return report;
}

std::string sweep_csv(const RunConfig& config, const SweepOutcome& outcome) {
  std::string csv = csv_config_line(config);
  csv += "sigma,trial,worst,mean\n";
  for (const auto& point : outcome.points)
    for (std::size_t t = 0; t < point.per_trial.size(); ++t)
      csv += format_double(point.sigma) + "," + std::to_string(t) + "," +
             format_double(point.per_trial[t].worst) + "," +
             format_double(point.per_trial[t].mean) + "\n";
  return csv;
}

}  // namespace qsorter
