#pragma once

// Dense qudit gate algebra on top of Eigen.
//
// Two-qudit composite states follow the index convention (s, k) -> s*d + k:
// the observable qudit s is the most significant factor and the spatial mode
// qudit k the least significant one. kron() uses the same ordering, so
// kron(A, B) acts as A on s and B on k.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace qsorter {

using Eigen::Index;

template <class Real = double>
using MatrixXc = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real = double>
using VectorXc = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

inline constexpr double kUnitaryTol = 1e-12;
inline constexpr double kStateNormTol = 1e-12;

/// Raised when a construction is numerically broken (as opposed to misused).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// omega(d, m) = exp(2*pi*i*m/d). The exponent is reduced mod d before calling
// polar so large powers do not accumulate phase drift.
template <class Real = double>
std::complex<Real> omega(Index d, long long power = 1) {
  if (d < 1) throw std::invalid_argument("omega: dimension must be >= 1");
  const long long dd = static_cast<long long>(d);
  const long long m = ((power % dd) + dd) % dd;
  const Real angle =
      Real(2) * std::numbers::pi_v<Real> * static_cast<Real>(m) / static_cast<Real>(dd);
  return std::polar(Real(1), angle);
}

/// Largest entrywise |a - b|; the comparison metric used throughout.
template <class DA, class DB>
auto max_abs_diff(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  if (a.size() == 0) return typename DA::RealScalar(0);
  return (a.derived() - b.derived()).cwiseAbs().maxCoeff();
}

template <class Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& m,
                typename Derived::RealScalar tol = kUnitaryTol) {
  using Real = typename Derived::RealScalar;
  if (m.rows() != m.cols()) return false;
  MatrixXc<Real> gram = m.adjoint() * m.derived();
  gram.diagonal().array() -= std::complex<Real>(1);
  return gram.cwiseAbs().maxCoeff() <= tol;
}

// Divides out the phase of the largest-modulus entry (first such entry in
// column-major order), for comparisons that hold only up to global phase.
template <class Derived>
MatrixXc<typename Derived::RealScalar> phase_normalized(const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Derived::RealScalar;
  Index row = 0, col = 0;
  m.cwiseAbs().maxCoeff(&row, &col);
  const std::complex<Real> pivot = m(row, col);
  if (std::abs(pivot) == Real(0)) return m.derived();
  return m.derived() * (std::abs(pivot) / pivot);
}

/// A square matrix guaranteed unitary. checked() verifies U†U = I at
/// construction; trusted() skips the check for matrices exact by formula.
template <class Real = double>
class Unitary {
 public:
  using Scalar = std::complex<Real>;
  using MatrixType = MatrixXc<Real>;

  template <class Derived>
  static Unitary checked(const Eigen::MatrixBase<Derived>& m, Real tol = Real(kUnitaryTol)) {
    if (m.rows() != m.cols() || m.rows() < 1)
      throw std::invalid_argument("Unitary: matrix must be square with dim >= 1");
    if (!is_unitary(m, tol)) throw std::invalid_argument("Unitary: matrix is not unitary");
    return Unitary(MatrixType(m));
  }

  template <class Derived>
  static Unitary trusted(const Eigen::MatrixBase<Derived>& m) {
    if (m.rows() != m.cols() || m.rows() < 1)
      throw std::invalid_argument("Unitary: matrix must be square with dim >= 1");
    return Unitary(MatrixType(m));
  }

  static Unitary identity(Index dim) {
    if (dim < 1) throw std::invalid_argument("Unitary: dim must be >= 1");
    return Unitary(MatrixType::Identity(dim, dim));
  }

  Index dim() const { return m_.rows(); }
  const MatrixType& matrix() const { return m_; }
  Scalar operator()(Index r, Index c) const { return m_(r, c); }

  Unitary adjoint() const { return Unitary(MatrixType(m_.adjoint())); }

  Unitary operator*(const Unitary& rhs) const {
    if (dim() != rhs.dim()) throw std::invalid_argument("Unitary: dimension mismatch in product");
    return Unitary(MatrixType(m_ * rhs.m_));
  }

  /// n-fold product by repeated multiplication, n >= 0.
  Unitary pow(Index n) const {
    MatrixType acc = MatrixType::Identity(dim(), dim());
    for (Index i = 0; i < n; ++i) acc = m_ * acc;
    return Unitary(std::move(acc));
  }

 private:
  explicit Unitary(MatrixType m) : m_(std::move(m)) {}
  MatrixType m_;
};

using UnitaryXcd = Unitary<double>;

/// Generalized Pauli X: U|k> = |k+1 mod d>.
template <class Real = double>
Unitary<Real> pauli_x(Index d) {
  if (d < 1) throw std::invalid_argument("pauli_x: d must be >= 1");
  MatrixXc<Real> m = MatrixXc<Real>::Zero(d, d);
  for (Index k = 0; k < d; ++k) m((k + 1) % d, k) = std::complex<Real>(1);
  return Unitary<Real>::trusted(m);
}

/// Generalized Pauli Z: diag(1, w, ..., w^(d-1)) with w = exp(2*pi*i/d).
template <class Real = double>
Unitary<Real> pauli_z(Index d) {
  if (d < 1) throw std::invalid_argument("pauli_z: d must be >= 1");
  MatrixXc<Real> m = MatrixXc<Real>::Zero(d, d);
  for (Index k = 0; k < d; ++k) m(k, k) = omega<Real>(d, k);
  return Unitary<Real>::trusted(m);
}

/// Discrete Fourier gate, F(j,k) = w^(jk)/sqrt(d). Symmetric; F maps the
/// computational basis to the shift-operator eigenbasis.
template <class Real = double>
Unitary<Real> fourier(Index d) {
  if (d < 1) throw std::invalid_argument("fourier: d must be >= 1");
  const Real scale = Real(1) / std::sqrt(static_cast<Real>(d));
  MatrixXc<Real> m(d, d);
  for (Index j = 0; j < d; ++j)
    for (Index k = 0; k < d; ++k)
      m(j, k) = scale * omega<Real>(d, static_cast<long long>(j) * static_cast<long long>(k));
  return Unitary<Real>::trusted(m);
}

/// Controlled gate C(U)|s,k> = |s> U^s |k> under the (s,k) -> s*d + k
/// convention; block s of the d^2 x d^2 result is U^s.
template <class Real = double>
Unitary<Real> controlled(const Unitary<Real>& u) {
  const Index d = u.dim();
  MatrixXc<Real> m = MatrixXc<Real>::Zero(d * d, d * d);
  MatrixXc<Real> power = MatrixXc<Real>::Identity(d, d);
  for (Index s = 0; s < d; ++s) {
    m.block(s * d, s * d, d, d) = power;
    if (s + 1 < d) power = u.matrix() * power;
  }
  return Unitary<Real>::trusted(m);
}

/// Kronecker product, (a ⊗ b)(i*p + r, j*q + c) = a(i,j) * b(r,c) for b of
/// shape p x q.
template <class DA, class DB>
MatrixXc<typename DA::RealScalar> kron(const Eigen::MatrixBase<DA>& a,
                                       const Eigen::MatrixBase<DB>& b) {
  using Real = typename DA::RealScalar;
  MatrixXc<Real> bm = b.derived();
  MatrixXc<Real> out(a.rows() * bm.rows(), a.cols() * bm.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * bm.rows(), j * bm.cols(), bm.rows(), bm.cols()) =
          std::complex<Real>(a(i, j)) * bm;
  return out;
}

template <class Real>
Unitary<Real> kron(const Unitary<Real>& a, const Unitary<Real>& b) {
  return Unitary<Real>::trusted(kron(a.matrix(), b.matrix()));
}

/// Normalized amplitude vector on the composite observable ⊗ mode space,
/// amplitude(s, k) stored at index s*d + k.
template <class Real = double>
class CompositeState {
 public:
  using Scalar = std::complex<Real>;
  using VectorType = VectorXc<Real>;

  CompositeState(Index d, VectorType amplitudes) : d_(d), amps_(std::move(amplitudes)) {
    if (d < 1) throw std::invalid_argument("CompositeState: d must be >= 1");
    if (amps_.size() != d * d)
      throw std::invalid_argument("CompositeState: amplitude vector must have length d^2");
    const Real n = amps_.norm();
    if (std::abs(n - Real(1)) > Real(kStateNormTol))
      throw std::invalid_argument("CompositeState: amplitudes are not normalized");
    amps_ /= n;
  }

  /// |s>|k>.
  static CompositeState basis(Index d, Index s, Index k) {
    if (s < 0 || s >= d || k < 0 || k >= d)
      throw std::invalid_argument("CompositeState: basis labels out of range");
    VectorType v = VectorType::Zero(d * d);
    v(s * d + k) = Scalar(1);
    return CompositeState(d, std::move(v));
  }

  /// (sum_s a_s |s>) ⊗ |0>: observable amplitudes injected on mode 0.
  static CompositeState from_sigma(Index d, const VectorType& sigma_amplitudes) {
    if (sigma_amplitudes.size() != d)
      throw std::invalid_argument("CompositeState: sigma amplitude vector must have length d");
    VectorType v = VectorType::Zero(d * d);
    for (Index s = 0; s < d; ++s) v(s * d) = sigma_amplitudes(s);
    return CompositeState(d, std::move(v));
  }

  Index dim() const { return d_; }
  const VectorType& amplitudes() const { return amps_; }
  Scalar amplitude(Index s, Index k) const { return amps_(s * d_ + k); }

  Scalar inner(const CompositeState& other) const {
    if (d_ != other.d_) throw std::invalid_argument("CompositeState: dimension mismatch");
    return amps_.dot(other.amps_);  // conjugates *this
  }

 private:
  Index d_;
  VectorType amps_;
};

template <class Real>
Real fidelity(const CompositeState<Real>& a, const CompositeState<Real>& b) {
  return std::norm(a.inner(b));
}

/// u * psi for a composite-space unitary (dim d^2).
template <class Real>
CompositeState<Real> apply(const Unitary<Real>& u, const CompositeState<Real>& psi) {
  if (u.dim() != psi.amplitudes().size())
    throw std::invalid_argument("apply: operator and state dimensions do not match");
  return CompositeState<Real>(psi.dim(), VectorXc<Real>(u.matrix() * psi.amplitudes()));
}

using CompositeStateXcd = CompositeState<double>;

}  // namespace qsorter
