#pragma once

// Concrete phase-module realizations: polarizing beam-splitter, Dove-prism
// OAM modules and arrayed-waveguide designs for wavelength sorting.

#include <qsorter/sorter.hpp>

#include <cstdint>
#include <vector>

namespace qsorter {

/// d=2 polarization module: arm 1 applies Z (a pi phase on |V>).
PhaseModule pbs_module();

/// Phase imprinted on OAM state |l> by a Dove prism pair rotated by alpha.
double dove_phase(long long l, double alpha);

/// Assignment of physical OAM levels to computational indices. The sorter
/// phases only see l mod d, so every level must reduce to its own index:
/// levels[s] ≡ s (mod d).
struct OamBasisMap {
  Index d = 0;
  std::vector<long long> levels;

  /// levels = [0, 1, ..., d-1].
  static OamBasisMap sequential(Index d);
};

/// Dove prism in arm k rotated by alpha_k = k*pi/d:
/// phase(k, s) = 2*pi*k*levels[s]/d. Rejects maps violating
/// levels[s] ≡ s (mod d) or with repeated levels.
PhaseModule oam_module(const OamBasisMap& map);

/// Propagation phase of a waveguide: 2*pi*length/wavelength.
double awg_phase(double length, double wavelength);

/// Waveguide-length program for a wavelength sorter. Exact consistency means
/// lengths[k] = wavelengths[s]*(k*s/d + integers(k,s)) for every (k, s);
/// residual is the largest wrapped phase deviation |phi_sk - 2*pi*k*s/d| in
/// radians (snapped to exactly 0 when below 2*pi*1e-9).
struct AwgDesign {
  Index d = 0;
  std::vector<double> wavelengths;
  std::vector<double> lengths;
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> integers;  // (k, s)
  double residual = 0.0;
};

/// Residuals below this are reported as exactly 0 (design detected exact).
inline constexpr double kAwgExactResidual = 2.0 * 3.14159265358979323846 * 1e-9;

/// Largest wrapped phase deviation of a length program, plus the
/// nearest-integer matrix of the consistency equations.
struct AwgFit {
  double residual = 0.0;
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> integers;
};

AwgFit awg_fit(const std::vector<double>& wavelengths, const std::vector<double>& lengths);

/// Searches per-arm lengths minimizing the worst wrapped phase residual.
/// Candidate lengths are lattice points wavelengths[s]*(k*s/d + n) with
/// |n| <= search_bound, each refined by a 1-D convex minimax over the arm
/// length; arm 0 takes the smallest positive common near-multiple of all
/// wavelengths. The constraints couple (k, s) only through L_k, so arms are
/// solved independently.
AwgDesign awg_design(Index d, const std::vector<double>& wavelengths, int search_bound);

/// Phase module realized by a design: phase(k, s) = awg_phase(L_k, lambda_s).
PhaseModule awg_module(const AwgDesign& design);

}  // namespace qsorter
