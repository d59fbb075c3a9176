#pragma once

// Component-count comparison between the single-interferometer sorter and
// cascaded d=2 interferometric OAM sorters (which require d to be a power
// of 2).

#include <qsorter/algebra.hpp>

namespace qsorter {

struct CascadeComparison {
  Index d = 0;

  // This scheme: one d-mode interferometer, one Dove prism per arm, two
  // Fourier gates compiled into at most d(d-1)/2 beamsplitters each.
  Index sorter_interferometers = 1;
  Index sorter_dove_prisms = 0;
  Index sorter_fourier_gates = 2;
  Index sorter_max_beamsplitters_per_fourier = 0;

  // Cascaded scheme, defined only when d is a power of 2.
  bool cascade_applicable = false;
  Index cascade_mzis = 0;
  Index cascade_dove_prisms = 0;
  Index cascade_holograms = 0;
};

CascadeComparison cascade_comparison(Index d);

}  // namespace qsorter
