#pragma once

// Hilbert-Schmidt expansion of multi-qubit operators in the Pauli basis.
//
// Index convention: 0 = I, 1 = X, 2 = Y, 3 = Z, with
//   X = [[0, 1], [1, 0]],  Y = [[0, -i], [i, 0]],  Z = [[1, 0], [0, -1]].
// A string "IZZI" lists one factor per subsystem in layout order. Coefficients
// satisfy M = sum_t c_t sigma(t) with c_t = Tr[M sigma(t)] / dim.

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pmlab/tensor.hpp"

namespace pmlab {

class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::vector<std::uint8_t> ops) : ops_(std::move(ops)) {
    for (auto op : ops_)
      if (op > 3) throw FormatError("Pauli index " + std::to_string(op) + " outside {0,1,2,3}");
  }
  PauliString(std::initializer_list<int> ops) {
    for (int op : ops) {
      if (op < 0 || op > 3) throw FormatError("Pauli index " + std::to_string(op) + " outside {0,1,2,3}");
      ops_.push_back(static_cast<std::uint8_t>(op));
    }
  }

  static PauliString from_label(std::string_view label) {
    std::vector<std::uint8_t> ops;
    for (char ch : label) {
      switch (ch) {
        case 'I': ops.push_back(0); break;
        case 'X': ops.push_back(1); break;
        case 'Y': ops.push_back(2); break;
        case 'Z': ops.push_back(3); break;
        default: throw FormatError(std::string("invalid Pauli character '") + ch + "' in \"" + std::string(label) + "\"");
      }
    }
    return PauliString(std::move(ops));
  }

  /// Enumerates all 4^n strings in lexicographic index order.
  static PauliString from_ordinal(std::size_t ordinal, std::size_t qubits) {
    std::vector<std::uint8_t> ops(qubits);
    for (std::size_t k = qubits; k-- > 0;) {
      ops[k] = static_cast<std::uint8_t>(ordinal & 3u);
      ordinal >>= 2;
    }
    return PauliString(std::move(ops));
  }

  std::string label() const {
    std::string out;
    for (auto op : ops_) out.push_back("IXYZ"[op]);
    return out;
  }

  std::size_t size() const { return ops_.size(); }
  std::uint8_t operator[](std::size_t i) const { return ops_[i]; }
  const std::vector<std::uint8_t>& ops() const { return ops_; }
  bool is_identity() const {
    for (auto op : ops_)
      if (op != 0) return false;
    return true;
  }

  auto operator<=>(const PauliString&) const = default;

 private:
  std::vector<std::uint8_t> ops_;
};

template <typename Scalar>
using PauliCoefficients = std::map<PauliString, Scalar>;

template <typename Scalar = Real>
CMatrix<Scalar> pauli_single(std::uint8_t op) {
  using C = std::complex<Scalar>;
  CMatrix<Scalar> m(2, 2);
  switch (op) {
    case 0: m << C(1), C(0), C(0), C(1); break;
    case 1: m << C(0), C(1), C(1), C(0); break;
    case 2: m << C(0), C(0, -1), C(0, 1), C(0); break;
    case 3: m << C(1), C(0), C(0), C(-1); break;
    default: throw FormatError("Pauli index outside {0,1,2,3}");
  }
  return m;
}

/// sigma(t) as an explicit Kronecker product.
template <typename Scalar = Real>
CMatrix<Scalar> pauli_matrix(const PauliString& t) {
  CMatrix<Scalar> m = CMatrix<Scalar>::Identity(1, 1);
  for (std::size_t k = 0; k < t.size(); ++k) m = kron(m, pauli_single<Scalar>(t[k]));
  return m;
}

namespace detail {

// sigma(t) is a signed permutation: row r has its only nonzero at column r ^ flip.
struct PauliMonomial {
  unsigned flip = 0;
  std::vector<std::complex<double>> values;  // values[r] = sigma(t)[r, r ^ flip]
};

inline PauliMonomial pauli_monomial(const PauliString& t) {
  const std::size_t n = t.size();
  PauliMonomial out;
  for (std::size_t k = 0; k < n; ++k)
    if (t[k] == 1 || t[k] == 2) out.flip |= 1u << (n - 1 - k);
  out.values.resize(std::size_t{1} << n);
  for (std::size_t r = 0; r < out.values.size(); ++r) {
    std::complex<double> v(1.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      const bool bit = (r >> (n - 1 - k)) & 1u;
      switch (t[k]) {
        case 2: v *= bit ? std::complex<double>(0, 1) : std::complex<double>(0, -1); break;
        case 3: v *= bit ? -1.0 : 1.0; break;
        default: break;
      }
    }
    out.values[r] = v;
  }
  return out;
}

inline void require_qubits(const SubsystemLayout& layout) {
  if (!layout.all_qubits()) throw UnsupportedDimensionError("Pauli basis requires every subsystem to be a qubit");
}

}  // namespace detail

/// Real Pauli coefficients of a Hermitian operator. Terms with |c| <= drop_below
/// are omitted. Throws ValidationError when some coefficient has an imaginary
/// part above kHermitianTolerance.
template <typename Derived>
PauliCoefficients<typename Eigen::NumTraits<typename Derived::Scalar>::Real> pauli_decompose(
    const Eigen::MatrixBase<Derived>& m, const SubsystemLayout& layout,
    typename Eigen::NumTraits<typename Derived::Scalar>::Real drop_below = 1e-14) {
  using R = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  detail::require_qubits(layout);
  require_layout(m, layout);
  const std::size_t n = layout.size();
  const std::size_t dim = std::size_t{1} << n;
  PauliCoefficients<R> out;
  for (std::size_t ordinal = 0; ordinal < (std::size_t{1} << (2 * n)); ++ordinal) {
    const PauliString t = PauliString::from_ordinal(ordinal, n);
    const auto mono = detail::pauli_monomial(t);
    // Tr[M sigma] = sum_r sigma[r, r^f] M[r^f, r]
    std::complex<R> acc(0, 0);
    for (std::size_t r = 0; r < dim; ++r) {
      const auto v = mono.values[r];
      acc += std::complex<R>(static_cast<R>(v.real()), static_cast<R>(v.imag())) *
             std::complex<R>(m(static_cast<Eigen::Index>(r ^ mono.flip), static_cast<Eigen::Index>(r)));
    }
    acc /= static_cast<R>(dim);
    if (std::abs(acc.imag()) > kHermitianTolerance)
      throw ValidationError("pauli_decompose: coefficient of " + t.label() + " is not real (operator not Hermitian)");
    if (std::abs(acc.real()) > drop_below) out.emplace(t, acc.real());
  }
  return out;
}

template <typename Scalar>
CMatrix<Scalar> pauli_compose(const PauliCoefficients<Scalar>& coeffs, const SubsystemLayout& layout) {
  detail::require_qubits(layout);
  const std::size_t n = layout.size();
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  CMatrix<Scalar> m = CMatrix<Scalar>::Zero(dim, dim);
  for (const auto& [t, c] : coeffs) {
    if (t.size() != n)
      throw FormatError("Pauli string " + t.label() + " has length " + std::to_string(t.size()) + ", expected " +
                        std::to_string(n));
    const auto mono = detail::pauli_monomial(t);
    for (Eigen::Index r = 0; r < dim; ++r) {
      const auto v = mono.values[static_cast<std::size_t>(r)];
      m(r, r ^ static_cast<Eigen::Index>(mono.flip)) +=
          c * std::complex<Scalar>(static_cast<Scalar>(v.real()), static_cast<Scalar>(v.imag()));
    }
  }
  return m;
}

}  // namespace pmlab
