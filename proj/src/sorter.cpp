#include <qsorter/sorter.hpp>

#include <cmath>
#include <numbers>
#include <string>

namespace qsorter {

namespace {

constexpr double kColumnSumTol = 1e-10;

std::vector<double> resolved_perturbations(const SorterSpec& spec) {
  if (spec.perturbations.empty()) return std::vector<double>(spec.d, 0.0);
  return spec.perturbations;
}

// Per-trial generator: splitmix64 of (seed, trial) seeds an mt19937_64, and
// normal deviates come from an explicit Box-Muller so the stream is fully
// specified (std::normal_distribution is implementation-defined).
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : state_(splitmix64(seed)) {}

  double next(double sigma) {
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;          // [0, 1)
    return sigma * std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t next_u64() {
    state_ = splitmix64(state_);
    return state_;
  }
  std::uint64_t state_;
};

}  // namespace

PhaseModule exact_phase_module(Index d) {
  if (d < 1) throw std::invalid_argument("exact_phase_module: d must be >= 1");
  return PhaseModule{
      d,
      [d](Index k, Index s) {
        return 2.0 * static_cast<double>(s) * (static_cast<double>(k) * std::numbers::pi /
                                               static_cast<double>(d));
      },
      false};
}

SorterSpec SorterSpec::mzi(PhaseModule module, OutputGate gate) {
  SorterSpec spec;
  spec.d = module.dim;
  spec.architecture = Architecture::MachZehnder;
  spec.module = std::move(module);
  spec.output_gate = gate;
  return spec;
}

SorterSpec SorterSpec::michelson(PhaseModule module, Reflector reflector) {
  SorterSpec spec;
  spec.d = module.dim;
  spec.architecture = Architecture::Michelson;
  spec.module = std::move(module);
  spec.reflector = reflector;
  return spec;
}

void validate_spec(const SorterSpec& spec) {
  if (spec.d < 1) throw std::invalid_argument("spec.d must be >= 1");
  if (spec.module.dim != spec.d)
    throw std::invalid_argument("spec.module dimension does not match spec.d");
  if (!spec.module.phase) throw std::invalid_argument("spec.module.phase is not set");
  if (!spec.perturbations.empty() &&
      static_cast<Index>(spec.perturbations.size()) != spec.d)
    throw std::invalid_argument("spec.perturbations must have exactly d entries");
  if (spec.architecture == Architecture::Michelson) {
    if (spec.output_gate != OutputGate::FDagger)
      throw std::invalid_argument("spec.output_gate applies to the Mach-Zehnder architecture only");
    if (spec.reflector == Reflector::Mirror && !spec.module.supports_mirror)
      throw std::invalid_argument(
          "spec.reflector: a mirror is only defined for the OAM phase module");
  }
}

Eigen::MatrixXcd assemble_mzi(const Eigen::MatrixXcd& g_out, const PhaseModule& module,
                              const std::vector<double>& perturbations,
                              const Eigen::MatrixXcd& g_in) {
  const Index d = module.dim;
  if (g_out.rows() != d || g_out.cols() != d || g_in.rows() != d || g_in.cols() != d)
    throw std::invalid_argument("assemble_mzi: mode gates must be d x d");
  if (static_cast<Index>(perturbations.size()) != d)
    throw std::invalid_argument("assemble_mzi: perturbations must have exactly d entries");

  Eigen::MatrixXcd result = Eigen::MatrixXcd::Zero(d * d, d * d);
  Eigen::VectorXcd diag(d);
  for (Index s = 0; s < d; ++s) {
    for (Index k = 0; k < d; ++k)
      diag(k) = std::polar(1.0, module.phase(k, s) + perturbations[k]);
    result.block(s * d, s * d, d, d) = g_out * (diag.asDiagonal() * g_in);
  }
  return result;
}

UnitaryXcd build_mzi(const SorterSpec& spec) {
  validate_spec(spec);
  if (spec.architecture != Architecture::MachZehnder)
    throw std::invalid_argument("build_mzi: spec.architecture must be MachZehnder");

  const Eigen::MatrixXcd f = fourier(spec.d).matrix();
  const Eigen::MatrixXcd g_out =
      spec.output_gate == OutputGate::FDagger ? Eigen::MatrixXcd(f.adjoint()) : f;
  return UnitaryXcd::trusted(assemble_mzi(g_out, spec.module, resolved_perturbations(spec), f));
}

UnitaryXcd build_michelson(const SorterSpec& spec) {
  validate_spec(spec);
  if (spec.architecture != Architecture::Michelson)
    throw std::invalid_argument("build_michelson: spec.architecture must be Michelson");

  const Index d = spec.d;
  const bool mirror = spec.reflector == Reflector::Mirror;
  const std::vector<double> pert = resolved_perturbations(spec);
  const Eigen::MatrixXcd f = fourier(d).matrix();

  // Block (s_out, s) is F * diag_k(e^{i(forward + return)}) * F, with the
  // observable flipped between passes when a mirror is used.
  Eigen::MatrixXcd result = Eigen::MatrixXcd::Zero(d * d, d * d);
  Eigen::VectorXcd diag(d);
  for (Index s = 0; s < d; ++s) {
    const Index s_out = mirror ? (d - s) % d : s;
    for (Index k = 0; k < d; ++k) {
      const double forward = (spec.module.phase(k, s) + pert[k]) / 2.0;
      const double back = ((mirror ? -spec.module.phase(k, s) : spec.module.phase(k, s)) +
                           pert[k]) /
                          2.0;
      diag(k) = std::polar(1.0, forward + back);
    }
    result.block(s_out * d, s * d, d, d) = f * (diag.asDiagonal() * f);
  }
  return UnitaryXcd::trusted(result);
}

SortingMatrix sorting_matrix(const UnitaryXcd& u) {
  const Index n = u.dim();
  const Index d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(n))));
  if (d * d != n)
    throw std::invalid_argument("sorting_matrix: operator dimension is not a perfect square");

  Eigen::MatrixXd p(d, d);
  for (Index s = 0; s < d; ++s) {
    const auto column = u.matrix().col(s * d);  // input |s>|0>
    for (Index j = 0; j < d; ++j) {
      double mass = 0.0;
      for (Index sp = 0; sp < d; ++sp) mass += std::norm(column(sp * d + j));
      p(j, s) = mass;
    }
  }

  for (Index s = 0; s < d; ++s) {
    const double sum = p.col(s).sum();
    if (!(std::abs(sum - 1.0) <= kColumnSumTol))  // also catches NaN
      throw NumericalError("sorting_matrix: column " + std::to_string(s) +
                           " mass deviates from 1 by more than 1e-10 (non-unitary operator)");
    p.col(s) /= sum;
  }
  p = p.cwiseMax(0.0).cwiseMin(1.0);
  return SortingMatrix{d, std::move(p)};
}

Efficiency efficiency(const SortingMatrix& m) {
  Efficiency e;
  e.worst = m.p.diagonal().minCoeff();
  e.mean = m.p.diagonal().mean();
  return e;
}

CompositeStateXcd simulate(const UnitaryXcd& u, const CompositeStateXcd& input) {
  return apply(u, input);
}

SweepResult sweep_perturbations(const SorterSpec& spec, double sigma, int trials,
                                std::uint64_t seed) {
  validate_spec(spec);
  if (sigma < 0.0) throw std::invalid_argument("sweep: sigma must be >= 0");
  if (trials < 1) throw std::invalid_argument("sweep: trials must be >= 1");
  if (!spec.perturbations.empty())
    throw std::invalid_argument("sweep: spec must not carry fixed perturbations");

  SweepResult result;
  result.sigma = sigma;
  result.per_trial.reserve(trials);
  result.min_worst = 1.0;

  for (int t = 0; t < trials; ++t) {
    GaussianStream stream(seed ^ splitmix64(static_cast<std::uint64_t>(t) + 1));
    SorterSpec trial = spec;
    trial.perturbations.resize(spec.d);
    for (Index k = 0; k < spec.d; ++k) trial.perturbations[k] = stream.next(sigma);

    const UnitaryXcd u = trial.architecture == Architecture::MachZehnder
                             ? build_mzi(trial)
                             : build_michelson(trial);
    const Efficiency e = efficiency(sorting_matrix(u));
    result.per_trial.push_back(e);
    result.mean_worst += e.worst;
    result.mean_mean += e.mean;
    result.min_worst = std::min(result.min_worst, e.worst);
  }
  result.mean_worst /= trials;
  result.mean_mean /= trials;
  return result;
}

}  // namespace qsorter
