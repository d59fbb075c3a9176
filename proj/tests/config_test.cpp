#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <qsorter/run_config.hpp>

using namespace qsorter;

namespace {

nlohmann::json pbs_config() {
  return nlohmann::json::parse(R"({
    "d": 2,
    "observable": {"type": "pbs"},
    "architecture": "mzi",
    "out": "report.json"
  })");
}

}  // namespace

TEST_CASE("parse_run_config") {
  SUBCASE("minimal pbs config with defaults") {
    const auto config = parse_run_config(pbs_config());
    CHECK(config.d == 2);
    CHECK(config.observable == ObservableKind::Pbs);
    CHECK(config.architecture == Architecture::MachZehnder);
    CHECK(config.output_gate == OutputGate::FDagger);
    CHECK(config.format == OutputFormat::Json);
    CHECK(config.out == "report.json");
    CHECK_FALSE(config.sweep.has_value());
  }

  SUBCASE("validation errors name the offending field") {
    auto check_names = [](nlohmann::json j, const std::string& field) {
      try {
        parse_run_config(j);
        FAIL("expected ConfigError for field " << field);
      } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("\"" + field + "\"") != std::string::npos);
      }
    };

    auto no_d = pbs_config();
    no_d.erase("d");
    check_names(no_d, "d");

    auto zero_d = pbs_config();
    zero_d["d"] = 0;
    check_names(zero_d, "d");

    auto pbs_d3 = pbs_config();
    pbs_d3["d"] = 3;
    check_names(pbs_d3, "d");

    auto no_observable = pbs_config();
    no_observable.erase("observable");
    check_names(no_observable, "observable");

    auto bad_arch = pbs_config();
    bad_arch["architecture"] = "ring";
    check_names(bad_arch, "architecture");

    auto reflector_on_mzi = pbs_config();
    reflector_on_mzi["reflector"] = "mirror";
    check_names(reflector_on_mzi, "reflector");

    auto gate_on_michelson = pbs_config();
    gate_on_michelson["architecture"] = "michelson";
    gate_on_michelson["output_gate"] = "f";
    check_names(gate_on_michelson, "output_gate");

    auto wrong_perturbations = pbs_config();
    wrong_perturbations["perturbations"] = {0.0, 0.1, 0.2};
    check_names(wrong_perturbations, "perturbations");

    auto both = pbs_config();
    both["perturbations"] = {0.0, 0.1};
    both["sweep"] = {{"sigmas", {0.1}}, {"trials", 10}};
    check_names(both, "sweep");

    auto bad_levels = nlohmann::json::parse(R"({
      "d": 3, "observable": {"type": "oam", "levels": [0, 1]}, "out": "x"
    })");
    check_names(bad_levels, "observable.levels");

    auto no_grid = nlohmann::json::parse(R"({
      "d": 2, "observable": {"type": "wavelength"}, "out": "x"
    })");
    check_names(no_grid, "observable");

    auto bad_phases = nlohmann::json::parse(R"({
      "d": 2, "observable": {"type": "custom", "phases": [[0, 0]]}, "out": "x"
    })");
    check_names(bad_phases, "observable.phases");

    auto zero_input = pbs_config();
    zero_input["input"] = {{0.0, 0.0}, {0.0, 0.0}};
    check_names(zero_input, "input");
  }

  SUBCASE("sweep block") {
    auto j = pbs_config();
    j["sweep"] = {{"sigmas", {0.0, 0.1}}, {"trials", 25}, {"seed", 7}};
    const auto config = parse_run_config(j);
    REQUIRE(config.sweep.has_value());
    CHECK(config.sweep->sigmas == std::vector<double>{0.0, 0.1});
    CHECK(config.sweep->trials == 25);
    CHECK(config.sweep->seed == 7);
  }

  SUBCASE("input amplitudes are normalized") {
    auto j = pbs_config();
    j["input"] = {{3.0, 0.0}, {0.0, 4.0}};
    const auto config = parse_run_config(j);
    REQUIRE(config.input_sigma.has_value());
    CHECK(std::abs((*config.input_sigma)(0) - std::complex<double>(0.6, 0.0)) < 1e-15);
    CHECK(std::abs((*config.input_sigma)(1) - std::complex<double>(0.0, 0.8)) < 1e-15);
  }
}

TEST_CASE("config round-trips through its canonical form") {
  auto j = pbs_config();
  j["perturbations"] = {0.0, 0.25};
  const auto config = parse_run_config(j);
  const ordered_json canonical = config_to_json(config);
  const auto reparsed = parse_run_config(nlohmann::json::parse(dump_deterministic(canonical)));
  CHECK(dump_deterministic(config_to_json(reparsed)) == dump_deterministic(canonical));
}

TEST_CASE("run_simulate") {
  SUBCASE("pbs report has the identity sorting matrix") {
    const auto config = parse_run_config(pbs_config());
    const auto outcome = run_simulate(config);
    CHECK(outcome.eff.worst == 1.0);
    CHECK(outcome.eff.mean == 1.0);
    CHECK(outcome.sorting.p(0, 0) == 1.0);
    CHECK(outcome.sorting.p(1, 0) <= 1e-12);

    const auto report = simulate_report(config, outcome);
    CHECK(report.contains("config"));
    CHECK(report["efficiency"]["worst"] == 1.0);
    CHECK_FALSE(report.contains("timing_ms"));
  }

  SUBCASE("michelson mirror with OAM parks everything on port 0") {
    const auto config = parse_run_config(nlohmann::json::parse(R"({
      "d": 4,
      "observable": {"type": "oam"},
      "architecture": "michelson",
      "reflector": "mirror",
      "out": "x"
    })"));
    const auto outcome = run_simulate(config);
    for (Index s = 0; s < 4; ++s)
      CHECK(outcome.sorting.p(0, s) == doctest::Approx(1.0).epsilon(1e-10));
  }

  SUBCASE("wavelength grids embed the design that was solved") {
    const auto config = parse_run_config(nlohmann::json::parse(R"({
      "d": 2,
      "observable": {"type": "wavelength", "wavelengths": [3.0, 2.0], "search_bound": 8},
      "out": "x"
    })"));
    const auto outcome = run_simulate(config);
    REQUIRE(outcome.design.has_value());
    CHECK(outcome.design->lengths[0] == doctest::Approx(6.0));
    CHECK(outcome.design->residual == 0.0);
    CHECK(simulate_report(config, outcome).contains("awg_design"));
  }

  SUBCASE("requested state is emitted") {
    auto j = pbs_config();
    j["input"] = {{1.0, 0.0}, {0.0, 0.0}};
    const auto config = parse_run_config(j);
    const auto outcome = run_simulate(config);
    REQUIRE(outcome.state.has_value());
    CHECK(outcome.state->size() == 4);
    CHECK(std::abs((*outcome.state)(0) - std::complex<double>(1.0, 0.0)) < 1e-12);
  }

  SUBCASE("sweep configs are rejected by simulate") {
    auto j = pbs_config();
    j["sweep"] = {{"sigmas", {0.1}}, {"trials", 3}};
    CHECK_THROWS_AS(run_simulate(parse_run_config(j)), ConfigError);
  }
}

TEST_CASE("run_sweep is deterministic") {
  auto j = pbs_config();
  j["sweep"] = {{"sigmas", {0.0, 0.2}}, {"trials", 16}, {"seed", 99}};
  const auto config = parse_run_config(j);

  const auto first = run_sweep(config);
  const auto second = run_sweep(config);
  CHECK(dump_deterministic(sweep_report(config, first)) ==
        dump_deterministic(sweep_report(config, second)));
  CHECK(sweep_csv(config, first) == sweep_csv(config, second));

  REQUIRE(first.points.size() == 2);
  for (const auto& trial : first.points[0].per_trial) {
    CHECK(trial.worst == 1.0);
    CHECK(trial.mean == 1.0);
  }
  CHECK(first.points[1].mean_mean < 1.0);

  SUBCASE("csv layout") {
    const auto csv = sweep_csv(config, first);
    CHECK(csv.find("# config {") == 0);
    CHECK(csv.find("sigma,trial,worst,mean\n") != std::string::npos);
  }
}

TEST_CASE("dump_deterministic writes 17-digit round-trip floats") {
  ordered_json j;
  j["value"] = 1.0 / 3.0;
  j["negative"] = -0.1;
  j["integer"] = 42;
  const std::string text = dump_deterministic(j);
  const auto parsed = nlohmann::json::parse(text);
  CHECK(parsed["value"].get<double>() == 1.0 / 3.0);
  CHECK(parsed["negative"].get<double>() == -0.1);
  CHECK(text.find("0.33333333333333331") != std::string::npos);

  SUBCASE("csv probabilities equal json probabilities") {
    const auto config = parse_run_config(nlohmann::json::parse(R"({
      "d": 2, "observable": {"type": "pbs"}, "perturbations": [0.0, 0.3], "out": "x"
    })"));
    const auto outcome = run_simulate(config);
    const auto report = simulate_report(config, outcome);
    const std::string csv = simulate_csv(config, outcome);

    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);  // config comment
    std::getline(lines, line);  // header
    while (std::getline(lines, line)) {
      const auto first_comma = line.find(',');
      const auto second_comma = line.find(',', first_comma + 1);
      const int jport = std::stoi(line.substr(0, first_comma));
      const int s = std::stoi(line.substr(first_comma + 1, second_comma - first_comma - 1));
      const double probability = std::stod(line.substr(second_comma + 1));
      CHECK(probability == report["sorting_matrix"][jport][s].get<double>());
    }
  }
}

TEST_CASE("awg design json round-trip") {
  const auto design = awg_design(2, {3.0, 2.0}, 8);
  const auto restored = awg_from_json(nlohmann::json::parse(dump_deterministic(awg_to_json(design))));
  CHECK(restored.d == design.d);
  CHECK(restored.lengths == design.lengths);
  CHECK(restored.wavelengths == design.wavelengths);
  CHECK(restored.residual == design.residual);
  CHECK(restored.integers == design.integers);
}

TEST_CASE("unitary_from_json") {
  const auto u = unitary_from_json(nlohmann::json::parse(R"({
    "unitary": [[[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]]
  })"),
                                   1e-10);
  CHECK(std::abs(u(0, 1) - std::complex<double>(1.0)) < 1e-15);

  CHECK_THROWS_AS(unitary_from_json(nlohmann::json::parse("{\"unitary\": [[1.0, 1.0], [1.0, 1.0]]}"),
                                    1e-10),
                  std::invalid_argument);
  CHECK_THROWS_AS(unitary_from_json(nlohmann::json::parse("{\"unitary\": [[1.0, 0.0]]}"), 1e-10),
                  std::invalid_argument);
}

TEST_CASE("mesh json schema") {
  BeamsplitterMesh mesh;
  mesh.dim = 2;
  mesh.elements.push_back(Beamsplitter{0, 1, 0.5, -0.25});
  mesh.elements.push_back(PhaseShifter{1, 2.5});
  const auto j = mesh_to_json(mesh);
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 2);
  CHECK(j[0]["kind"] == "bs");
  CHECK(j[0]["modes"] == ordered_json::array({0, 1}));
  CHECK(j[0]["theta"] == 0.5);
  CHECK(j[0]["phi"] == -0.25);
  CHECK(j[1]["kind"] == "ps");
  CHECK(j[1]["modes"] == ordered_json::array({1}));
  CHECK(j[1]["phi"] == 2.5);
}
