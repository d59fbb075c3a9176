#include <qsorter/devices.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <string>

namespace qsorter {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Wrapped phase deviation of one consistency equation, 2*pi*|x - round(x)|
// for x = L/lambda - k*s/d.
double wrapped_residual(double length, double wavelength, double target_turns) {
  const double x = length / wavelength - target_turns;
  return kTwoPi * std::abs(x - std::round(x));
}

struct ArmProblem {
  const std::vector<double>& wavelengths;
  std::vector<double> targets;  // k*s/d per s

  double residual(double length) const {
    double worst = 0.0;
    for (std::size_t s = 0; s < wavelengths.size(); ++s)
      worst = std::max(worst, wrapped_residual(length, wavelengths[s], targets[s]));
    return worst;
  }

  // Minimax over the arm length with the integer assignment frozen at the
  // rounding taken near `start`: minimize max_s (2*pi/lambda_s)|L - p_s|.
  // The objective is convex piecewise linear, so a ternary search converges.
  double refine(double start) const {
    const std::size_t n = wavelengths.size();
    std::vector<double> points(n);
    for (std::size_t s = 0; s < n; ++s) {
      const double assignment = std::round(start / wavelengths[s] - targets[s]);
      points[s] = wavelengths[s] * (targets[s] + assignment);
    }
    const auto objective = [&](double length) {
      double worst = 0.0;
      for (std::size_t s = 0; s < n; ++s)
        worst = std::max(worst, kTwoPi / wavelengths[s] * std::abs(length - points[s]));
      return worst;
    };
    double lo = std::max(0.0, *std::min_element(points.begin(), points.end()));
    double hi = *std::max_element(points.begin(), points.end());
    for (int it = 0; it < 160 && hi - lo > 0.0; ++it) {
      const double m1 = lo + (hi - lo) / 3.0;
      const double m2 = hi - (hi - lo) / 3.0;
      if (objective(m1) <= objective(m2))
        hi = m2;
      else
        lo = m1;
    }
    return std::max(0.0, (lo + hi) / 2.0);
  }
};

void validate_wavelengths(Index d, const std::vector<double>& wavelengths) {
  if (d < 1) throw std::invalid_argument("awg: d must be >= 1");
  if (static_cast<Index>(wavelengths.size()) != d)
    throw std::invalid_argument("awg: expected exactly d wavelengths");
  for (double w : wavelengths)
    if (!(w > 0.0)) throw std::invalid_argument("awg: wavelengths must be positive");
  std::set<double> unique(wavelengths.begin(), wavelengths.end());
  if (static_cast<Index>(unique.size()) != d)
    throw std::invalid_argument("awg: wavelengths must be distinct");
}

}  // namespace

PhaseModule pbs_module() {
  return PhaseModule{2,
                     [](Index k, Index s) {
                       return std::numbers::pi * static_cast<double>(k) *
                              static_cast<double>(s);
                     },
                     false};
}

double dove_phase(long long l, double alpha) { return 2.0 * static_cast<double>(l) * alpha; }

OamBasisMap OamBasisMap::sequential(Index d) {
  OamBasisMap map;
  map.d = d;
  map.levels.resize(d);
  for (Index s = 0; s < d; ++s) map.levels[s] = s;
  return map;
}

PhaseModule oam_module(const OamBasisMap& map) {
  const Index d = map.d;
  if (d < 1) throw std::invalid_argument("oam_module: d must be >= 1");
  if (static_cast<Index>(map.levels.size()) != d)
    throw std::invalid_argument("oam_module: map must assign exactly d levels");
  std::set<long long> seen;
  for (Index s = 0; s < d; ++s) {
    const long long l = map.levels[s];
    if (!seen.insert(l).second)
      throw std::invalid_argument("oam_module: OAM levels must be pairwise distinct");
    const long long residue = ((l % d) + d) % d;
    if (residue != s)
      throw std::invalid_argument("oam_module: levels[" + std::to_string(s) +
                                  "] = " + std::to_string(l) + " is not congruent to " +
                                  std::to_string(s) + " mod d");
  }
  auto levels = map.levels;
  return PhaseModule{d,
                     [d, levels](Index k, Index s) {
                       return dove_phase(levels[s],
                                         static_cast<double>(k) * std::numbers::pi /
                                             static_cast<double>(d));
                     },
                     true};
}

double awg_phase(double length, double wavelength) {
  if (!(wavelength > 0.0)) throw std::invalid_argument("awg_phase: wavelength must be positive");
  return kTwoPi * length / wavelength;
}

AwgFit awg_fit(const std::vector<double>& wavelengths, const std::vector<double>& lengths) {
  const Index d = static_cast<Index>(wavelengths.size());
  validate_wavelengths(d, wavelengths);
  if (static_cast<Index>(lengths.size()) != d)
    throw std::invalid_argument("awg_fit: expected exactly d lengths");

  AwgFit fit;
  fit.integers.resize(d, d);
  for (Index k = 0; k < d; ++k) {
    for (Index s = 0; s < d; ++s) {
      const double target = static_cast<double>(k) * static_cast<double>(s) /
                            static_cast<double>(d);
      const double x = lengths[k] / wavelengths[s] - target;
      if (!std::isfinite(x))
        throw NumericalError("awg_fit: length/wavelength ratio overflows a double");
      fit.integers(k, s) = std::llround(x);
      fit.residual = std::max(fit.residual, wrapped_residual(lengths[k], wavelengths[s], target));
    }
  }
  return fit;
}

AwgDesign awg_design(Index d, const std::vector<double>& wavelengths, int search_bound) {
  validate_wavelengths(d, wavelengths);
  if (search_bound < 1) throw std::invalid_argument("awg_design: search_bound must be >= 1");

  AwgDesign design;
  design.d = d;
  design.wavelengths = wavelengths;
  design.lengths.assign(d, 0.0);

  if (d == 1) {
    design.integers = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>::Zero(1, 1);
    design.residual = 0.0;
    return design;
  }

  for (Index k = 0; k < d; ++k) {
    ArmProblem arm{wavelengths, {}};
    arm.targets.resize(d);
    for (Index s = 0; s < d; ++s)
      arm.targets[s] = static_cast<double>(k) * static_cast<double>(s) / static_cast<double>(d);

    double best_residual = std::numeric_limits<double>::infinity();
    double best_length = 0.0;
    const auto consider = [&](double length) {
      if (!(length >= 0.0)) return;
      const double r = arm.residual(length);
      if (r < best_residual - 1e-12 ||
          (r <= best_residual + 1e-12 && length < best_length - 1e-12)) {
        best_residual = r;
        best_length = length;
      }
    };

    // Arm 0 targets are all zero, so candidates are positive multiples of
    // each wavelength (the smallest common near-multiple wins); other arms
    // enumerate lattice points of every wavelength family.
    for (Index s = 0; s < d; ++s) {
      const int n_lo = k == 0 ? 1 : -search_bound;
      for (int n = n_lo; n <= search_bound; ++n) {
        const double candidate = wavelengths[s] * (arm.targets[s] + n);
        if (candidate < 0.0) continue;
        consider(candidate);
        const double refined = arm.refine(candidate);
        consider(refined);
        consider(arm.refine(refined));
      }
    }
    design.lengths[k] = best_length;
  }

  AwgFit fit = awg_fit(wavelengths, design.lengths);
  design.integers = std::move(fit.integers);
  design.residual = fit.residual < kAwgExactResidual ? 0.0 : fit.residual;
  return design;
}

PhaseModule awg_module(const AwgDesign& design) {
  const Index d = design.d;
  if (d < 1) throw std::invalid_argument("awg_module: design dimension must be >= 1");
  if (static_cast<Index>(design.lengths.size()) != d ||
      static_cast<Index>(design.wavelengths.size()) != d)
    throw std::invalid_argument("awg_module: design must carry exactly d lengths and wavelengths");
  for (double w : design.wavelengths)
    if (!(w > 0.0)) throw std::invalid_argument("awg_module: wavelengths must be positive");

  auto lengths = design.lengths;
  auto wavelengths = design.wavelengths;
  return PhaseModule{d,
                     [lengths, wavelengths](Index k, Index s) {
                       return awg_phase(lengths[k], wavelengths[s]);
                     },
                     false};
}

}  // namespace qsorter
