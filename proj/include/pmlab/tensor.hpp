#pragma once

// Dense complex linear algebra over labeled tensor-product spaces.
//
// Subsystem 0 of a layout is the most significant factor of the Kronecker
// product, so for the default layout A_I (x) A_O (x) B_I (x) B_O the basis index
// of |i j k l> is 8i + 4j + 2k + l.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <unordered_set>
#include <vector>

#include "pmlab/errors.hpp"

namespace pmlab {

template <typename Scalar>
using CMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

using Real = double;
using Complex = std::complex<Real>;
using ComplexMatrix = CMatrix<Real>;

/// Entrywise tolerance on |M - M^dagger|.
inline constexpr Real kHermitianTolerance = 1e-12;
/// Smallest eigenvalue still accepted as positive semidefinite.
inline constexpr Real kPsdTolerance = -1e-9;

namespace labels {
inline const std::string kAliceIn = "A_I";
inline const std::string kAliceOut = "A_O";
inline const std::string kBobIn = "B_I";
inline const std::string kBobOut = "B_O";
}  // namespace labels

struct Subsystem {
  std::string label;
  int dim = 2;

  bool operator==(const Subsystem&) const = default;
};

/// Ordered list of labeled tensor factors.
class SubsystemLayout {
 public:
  explicit SubsystemLayout(std::vector<Subsystem> subsystems) : subsystems_(std::move(subsystems)) {
    std::unordered_set<std::string> seen;
    for (const auto& s : subsystems_) {
      if (s.dim <= 0) throw DomainError("subsystem '" + s.label + "' has non-positive dimension");
      if (!seen.insert(s.label).second) throw LabelError("duplicate subsystem label '" + s.label + "'");
    }
  }

  /// A_I, A_O, B_I, B_O, all qubits.
  static SubsystemLayout bipartite_qubits() {
    return SubsystemLayout({{labels::kAliceIn, 2}, {labels::kAliceOut, 2}, {labels::kBobIn, 2}, {labels::kBobOut, 2}});
  }

  const std::vector<Subsystem>& subsystems() const { return subsystems_; }
  std::size_t size() const { return subsystems_.size(); }
  const Subsystem& operator[](std::size_t i) const { return subsystems_[i]; }

  int total_dimension() const {
    int d = 1;
    for (const auto& s : subsystems_) d *= s.dim;
    return d;
  }

  bool all_qubits() const {
    return std::all_of(subsystems_.begin(), subsystems_.end(), [](const Subsystem& s) { return s.dim == 2; });
  }

  std::size_t index_of(const std::string& label) const {
    for (std::size_t i = 0; i < subsystems_.size(); ++i)
      if (subsystems_[i].label == label) return i;
    throw LabelError("unknown subsystem label '" + label + "'");
  }

  /// Layout restricted to `keep`, in this layout's order.
  SubsystemLayout subset(const std::vector<std::string>& keep) const {
    std::vector<bool> mask = keep_mask(keep);
    std::vector<Subsystem> out;
    for (std::size_t i = 0; i < subsystems_.size(); ++i)
      if (mask[i]) out.push_back(subsystems_[i]);
    return SubsystemLayout(std::move(out));
  }

  std::vector<bool> keep_mask(const std::vector<std::string>& keep) const {
    std::vector<bool> mask(subsystems_.size(), false);
    for (const auto& label : keep) mask[index_of(label)] = true;
    return mask;
  }

  bool operator==(const SubsystemLayout&) const = default;

 private:
  std::vector<Subsystem> subsystems_;
};

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (m.rows() != m.cols()) throw ShapeError(std::string(what) + ": matrix is not square");
}

template <typename Derived>
void require_layout(const Eigen::MatrixBase<Derived>& m, const SubsystemLayout& layout) {
  require_square(m, "layout check");
  if (m.rows() != layout.total_dimension())
    throw ShapeError("matrix dimension " + std::to_string(m.rows()) + " does not match layout dimension " +
                     std::to_string(layout.total_dimension()));
}

template <typename DerivedA, typename DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Largest entry of |M - M^dagger|.
template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
  require_square(m, "hermiticity_defect");
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m,
                  typename Eigen::NumTraits<typename Derived::Scalar>::Real tol = kHermitianTolerance) {
  return m.rows() == m.cols() && hermiticity_defect(m) <= tol;
}

/// Traces out every subsystem not named in `keep`. The result acts on the kept
/// factors in layout order.
template <typename Derived>
auto partial_trace(const Eigen::MatrixBase<Derived>& m, const SubsystemLayout& layout,
                   const std::vector<std::string>& keep) {
  using Scalar = typename Derived::Scalar;
  require_layout(m, layout);
  const std::vector<bool> mask = layout.keep_mask(keep);
  const int dim = layout.total_dimension();

  // split every full index into (kept index, traced index)
  std::vector<int> kept_index(dim), traced_index(dim);
  int kept_dim = 1;
  for (std::size_t s = 0; s < layout.size(); ++s)
    if (mask[s]) kept_dim *= layout[s].dim;
  for (int full = 0; full < dim; ++full) {
    int rest = full, k = 0, t = 0, k_stride = 1, t_stride = 1;
    for (std::size_t s = layout.size(); s-- > 0;) {
      const int d = layout[s].dim;
      const int digit = rest % d;
      rest /= d;
      if (mask[s]) {
        k += digit * k_stride;
        k_stride *= d;
      } else {
        t += digit * t_stride;
        t_stride *= d;
      }
    }
    kept_index[full] = k;
    traced_index[full] = t;
  }

  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(kept_dim, kept_dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      if (traced_index[i] == traced_index[j]) out(kept_index[i], kept_index[j]) += m(i, j);
  return out;
}

/// Ascending eigenvalues of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Each rotation first removes the phase of the pivot A_pq with a diagonal
/// unitary, then applies the real symmetric Jacobi rotation in the (p, q)
/// plane. Throws ValidationError when M is not Hermitian within `tol`.
template <typename Derived>
std::vector<typename Eigen::NumTraits<typename Derived::Scalar>::Real> hermitian_eigenvalues(
    const Eigen::MatrixBase<Derived>& m,
    typename Eigen::NumTraits<typename Derived::Scalar>::Real tol = kHermitianTolerance) {
  using Scalar = typename Derived::Scalar;
  using R = typename Eigen::NumTraits<Scalar>::Real;
  require_square(m, "hermitian_eigenvalues");
  if (hermiticity_defect(m) > tol) throw ValidationError("hermitian_eigenvalues: matrix is not Hermitian");

  const Eigen::Index n = m.rows();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a = (m + m.adjoint()) / R(2);
  const R scale = std::max(a.norm(), std::numeric_limits<R>::min());

  // pivots below this are treated as converged
  const R negligible = std::numeric_limits<R>::epsilon() * scale;
  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        const R r = std::abs(apq);
        if (r <= negligible) continue;
        rotated = true;
        const Scalar phase = apq / r;
        a.col(q) *= std::conj(phase);
        a.row(q) *= phase;

        const R tau = (std::real(a(q, q)) - std::real(a(p, p))) / (R(2) * r);
        const R t = (tau >= 0 ? R(1) : R(-1)) / (std::abs(tau) + std::sqrt(R(1) + tau * tau));
        const R c = R(1) / std::sqrt(R(1) + t * t);
        const R s = t * c;

        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar kp = a(k, p), kq = a(k, q);
          a(k, p) = c * kp - s * kq;
          a(k, q) = s * kp + c * kq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar pk = a(p, k), qk = a(q, k);
          a(p, k) = c * pk - s * qk;
          a(q, k) = s * pk + c * qk;
        }
        a(p, q) = a(q, p) = Scalar(0);
      }
    }
    if (!rotated) break;
  }

  std::vector<R> values(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) values[static_cast<std::size_t>(i)] = std::real(a(i, i));
  std::sort(values.begin(), values.end());
  return values;
}

template <typename Derived>
auto min_eigenvalue(const Eigen::MatrixBase<Derived>& m) {
  return hermitian_eigenvalues(m).front();
}

}  // namespace pmlab
