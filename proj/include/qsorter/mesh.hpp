#pragma once

// Compilation of d x d mode unitaries into 2-mode beamsplitter /
// phase-shifter meshes by triangular Givens elimination.
//
// Conventions (fixed so meshes are reproducible bit for bit):
//   * A Beamsplitter(a, b, theta, phi) acts on modes (a, b) as the block
//       [ cos(theta)              -e^{-i phi} sin(theta) ]
//       [ e^{i phi} sin(theta)     cos(theta)            ]
//     with theta canonicalized into [0, pi/2] and phi into (-pi, pi].
//   * A PhaseShifter(m, phase) multiplies mode m by e^{i phase}.
//   * Elements apply in list order: element 0 hits the state first, so
//     reconstruct() returns E_{n-1} * ... * E_1 * E_0.
//   * Residual diagonal phases are emitted as phase shifters at the output
//     (end of the list).

#include <qsorter/algebra.hpp>

#include <variant>
#include <vector>

namespace qsorter {

struct Beamsplitter {
  Index mode_a = 0;
  Index mode_b = 0;
  double theta = 0.0;
  double phi = 0.0;
};

struct PhaseShifter {
  Index mode = 0;
  double phase = 0.0;
};

using MeshElement = std::variant<Beamsplitter, PhaseShifter>;

struct BeamsplitterMesh {
  Index dim = 0;
  std::vector<MeshElement> elements;

  Index beamsplitter_count() const;
};

/// Compiles u into a mesh with at most d(d-1)/2 beamsplitters. The input
/// must be unitary within 1e-10.
BeamsplitterMesh decompose(const UnitaryXcd& u);

/// Product of the element matrices in application order.
UnitaryXcd reconstruct(const BeamsplitterMesh& mesh);

}  // namespace qsorter
