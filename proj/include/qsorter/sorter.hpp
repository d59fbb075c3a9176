#pragma once

// Mach-Zehnder and Michelson sorter assembly, simulation and sorting
// statistics. All interferometer unitaries live on the composite
// observable ⊗ mode space (dim d^2, index (s,k) -> s*d + k).

#include <qsorter/algebra.hpp>

#include <cstdint>
#include <functional>
#include <vector>

namespace qsorter {

/// Per-arm diagonal action on the observable: arm k multiplies |s> by
/// e^{i phase(k, s)}. phase returns the unreduced target phase in radians;
/// the Michelson builder halves it per pass, so callers must not fold it
/// mod 2*pi themselves.
struct PhaseModule {
  Index dim = 0;
  std::function<double(Index arm, Index sigma)> phase;
  // Only a module with mirror-flip semantics (the Dove-prism OAM module,
  // whose phase is odd in the physical level) may be folded against a
  // plain mirror.
  bool supports_mirror = false;
};

/// The ideal Z_d^k program: phase(k, s) = 2*pi*k*s/d.
PhaseModule exact_phase_module(Index d);

enum class Architecture { MachZehnder, Michelson };
enum class Reflector { Retroreflector, Mirror };
enum class OutputGate { FDagger, F };

struct SorterSpec {
  Index d = 0;
  Architecture architecture = Architecture::MachZehnder;
  PhaseModule module;
  Reflector reflector = Reflector::Retroreflector;  // Michelson only
  OutputGate output_gate = OutputGate::FDagger;     // MachZehnder only
  std::vector<double> perturbations;                // empty means all zero

  static SorterSpec mzi(PhaseModule module, OutputGate gate = OutputGate::FDagger);
  static SorterSpec michelson(PhaseModule module, Reflector reflector);
};

/// Throws std::invalid_argument naming the offending field.
void validate_spec(const SorterSpec& spec);

/// (1 ⊗ g_out) · diag(e^{i(phase(k,s) + pert_k)}) · (1 ⊗ g_in) assembled
/// block by block (the composite matrix is block diagonal in s). g_in and
/// g_out are arbitrary d x d mode gates.
Eigen::MatrixXcd assemble_mzi(const Eigen::MatrixXcd& g_out, const PhaseModule& module,
                              const std::vector<double>& perturbations,
                              const Eigen::MatrixXcd& g_in);

/// Mach-Zehnder sorter: (1 ⊗ F† or F) · D · (1 ⊗ F).
UnitaryXcd build_mzi(const SorterSpec& spec);

/// Folded (Michelson) sorter: (1 ⊗ F) · D_return · (R ⊗ 1) · D_half · (1 ⊗ F),
/// where each pass applies half phases e^{i(phase(k,s) + pert_k)/2}. The
/// retroreflector leaves the observable unchanged (R = 1, D_return = D_half);
/// a mirror flips it, R|s> = |(-s) mod d>, and the return pass sees the
/// flipped physical value, D_return entry e^{i(-phase(k, (-s') mod d) + pert_k)/2}
/// on the post-flip index s'.
UnitaryXcd build_michelson(const SorterSpec& spec);

/// Exit-port statistics for particles entering on mode 0:
/// p(j, s) = sum_{s'} |<s', j| u |s, 0>|^2. Columns are validated to sum to
/// 1 within 1e-10 (unitarity) and then normalized into exact conditional
/// probabilities.
struct SortingMatrix {
  Index d = 0;
  Eigen::MatrixXd p;
};

SortingMatrix sorting_matrix(const UnitaryXcd& u);

struct Efficiency {
  double worst = 0.0;  // min_s p(s, s)
  double mean = 0.0;   // (1/d) sum_s p(s, s)
};

Efficiency efficiency(const SortingMatrix& m);

/// u * input, renormalized.
CompositeStateXcd simulate(const UnitaryXcd& u, const CompositeStateXcd& input);

struct SweepResult {
  double sigma = 0.0;
  std::vector<Efficiency> per_trial;
  double mean_worst = 0.0;
  double mean_mean = 0.0;
  double min_worst = 0.0;
};

/// Redraws all d arm offsets from N(0, sigma^2) per trial and reports the
/// resulting efficiencies. Each trial derives its own generator from
/// (seed, trial index), so results are reproducible and independent of
/// evaluation order.
SweepResult sweep_perturbations(const SorterSpec& spec, double sigma, int trials,
                                std::uint64_t seed);

}  // namespace qsorter
