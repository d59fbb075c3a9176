#include <qsorter/mesh.hpp>

#include <cmath>
#include <numbers>

namespace qsorter {

namespace {

constexpr double kDecomposeTol = 1e-10;
constexpr double kNegligible = 1e-14;

double wrap_pi(double angle) {
  angle = std::remainder(angle, 2.0 * std::numbers::pi);
  if (angle <= -std::numbers::pi) angle += 2.0 * std::numbers::pi;
  return angle;
}

// theta in [0, pi/2]: B(-theta, phi) = B(theta, phi + pi).
Beamsplitter canonical(Index a, Index b, double theta, double phi) {
  if (theta < 0.0) {
    theta = -theta;
    phi += std::numbers::pi;
  }
  return Beamsplitter{a, b, theta, wrap_pi(phi)};
}

void apply_in_place(const MeshElement& element, Eigen::MatrixXcd& m) {
  const Index dim = m.rows();
  if (const auto* bs = std::get_if<Beamsplitter>(&element)) {
    if (bs->mode_a < 0 || bs->mode_a >= dim || bs->mode_b < 0 || bs->mode_b >= dim ||
        bs->mode_a == bs->mode_b)
      throw std::invalid_argument("reconstruct: beamsplitter mode index out of range");
    const double c = std::cos(bs->theta);
    const std::complex<double> s = std::polar(std::sin(bs->theta), bs->phi);
    const Eigen::RowVectorXcd row_a = m.row(bs->mode_a);
    const Eigen::RowVectorXcd row_b = m.row(bs->mode_b);
    m.row(bs->mode_a) = c * row_a - std::conj(s) * row_b;
    m.row(bs->mode_b) = s * row_a + c * row_b;
  } else {
    const auto& ps = std::get<PhaseShifter>(element);
    if (ps.mode < 0 || ps.mode >= dim)
      throw std::invalid_argument("reconstruct: phase-shifter mode index out of range");
    m.row(ps.mode) *= std::polar(1.0, ps.phase);
  }
}

}  // namespace

Index BeamsplitterMesh::beamsplitter_count() const {
  Index count = 0;
  for (const auto& e : elements)
    if (std::holds_alternative<Beamsplitter>(e)) ++count;
  return count;
}

BeamsplitterMesh decompose(const UnitaryXcd& u) {
  if (!is_unitary(u.matrix(), kDecomposeTol))
    throw std::invalid_argument("decompose: input is not unitary within 1e-10");
  const Index d = u.dim();

  // Givens QR: rotations G_i on adjacent mode pairs null the strict lower
  // triangle, G_N...G_1 U = D. Each rotation zeroing A(r, c) against
  // A(r-1, c) keeps the working matrix unitary, so the triangular remainder
  // is diagonal.
  Eigen::MatrixXcd a = u.matrix();
  struct Rotation {
    Index top;
    double theta;
    double phi;
  };
  std::vector<Rotation> rotations;
  rotations.reserve(d * (d - 1) / 2);

  for (Index c = 0; c + 1 < d; ++c) {
    for (Index r = d - 1; r > c; --r) {
      const std::complex<double> x = a(r - 1, c);
      const std::complex<double> y = a(r, c);
      if (std::abs(y) <= kNegligible) continue;
      const double theta = std::atan2(std::abs(y), std::abs(x));
      const double phi = std::arg(y) - std::arg(x) + std::numbers::pi;
      const double cth = std::cos(theta);
      const std::complex<double> sth = std::polar(std::sin(theta), phi);
      const Eigen::RowVectorXcd top = a.row(r - 1);
      const Eigen::RowVectorXcd bottom = a.row(r);
      a.row(r - 1) = cth * top - std::conj(sth) * bottom;
      a.row(r) = sth * top + cth * bottom;
      a(r, c) = 0.0;
      rotations.push_back({r - 1, theta, phi});
    }
  }

  // U = D * (D' G_1' D) ... (D' G_N' D): conjugating an adjoint rotation by
  // the diagonal keeps the beamsplitter form and shifts phi by the phase
  // difference of its two modes, leaving all residual phases at the output.
  std::vector<double> phases(d);
  for (Index m = 0; m < d; ++m) phases[m] = std::arg(a(m, m));

  BeamsplitterMesh mesh;
  mesh.dim = d;
  mesh.elements.reserve(rotations.size() + d);
  for (auto it = rotations.rbegin(); it != rotations.rend(); ++it)
    mesh.elements.push_back(
        canonical(it->top, it->top + 1, -it->theta, it->phi + phases[it->top] - phases[it->top + 1]));
  for (Index m = 0; m < d; ++m)
    if (std::abs(wrap_pi(phases[m])) > kNegligible)
      mesh.elements.push_back(PhaseShifter{m, phases[m]});
  return mesh;
}

UnitaryXcd reconstruct(const BeamsplitterMesh& mesh) {
  if (mesh.dim < 1) throw std::invalid_argument("reconstruct: mesh dimension must be >= 1");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(mesh.dim, mesh.dim);
  for (const auto& element : mesh.elements) apply_in_place(element, m);
  return UnitaryXcd::trusted(m);
}

}  // namespace qsorter
