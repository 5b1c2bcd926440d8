#pragma once

#include <random>

#include "pmlab/tensor.hpp"

namespace pmlab::testing {

inline ComplexMatrix random_matrix(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<Real> g;
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, Eigen::Index n) {
  const ComplexMatrix m = random_matrix(rng, n);
  return (m + m.adjoint()) / 2.0;
}

inline Real max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace pmlab::testing
