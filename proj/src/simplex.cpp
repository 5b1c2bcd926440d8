#include "pmlab/simplex.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace pmlab {

namespace {

struct Tableau {
  Eigen::MatrixXd full;  // [A | I]
  Eigen::VectorXd rhs;
  std::vector<Eigen::Index> basis;
  Eigen::Index original_cols = 0;
};

Eigen::MatrixXd basis_matrix(const Tableau& t) {
  const Eigen::Index m = t.full.rows();
  Eigen::MatrixXd bm(m, m);
  for (Eigen::Index i = 0; i < m; ++i) bm.col(i) = t.full.col(t.basis[static_cast<std::size_t>(i)]);
  return bm;
}

// Runs simplex pivots on `t` for the given costs. Columns at or past
// `enter_limit` never enter.
LpStatus iterate(Tableau& t, const Eigen::VectorXd& cost, Eigen::Index enter_limit, const SimplexOptions& opt,
                 int& iterations) {
  const Eigen::Index m = t.full.rows();
  int degenerate_run = 0;
  bool bland = false;
  std::vector<char> in_basis(static_cast<std::size_t>(t.full.cols()), 0);
  for (auto j : t.basis) in_basis[static_cast<std::size_t>(j)] = 1;

  while (true) {
    if (iterations >= opt.max_iterations) return LpStatus::IterationLimit;
    const Eigen::MatrixXd bm = basis_matrix(t);
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(bm);
    const Eigen::PartialPivLU<Eigen::MatrixXd> lut(bm.transpose());
    const Eigen::VectorXd xb = lu.solve(t.rhs);
    Eigen::VectorXd cb(m);
    for (Eigen::Index i = 0; i < m; ++i) cb(i) = cost(t.basis[static_cast<std::size_t>(i)]);
    const Eigen::VectorXd y = lut.solve(cb);
    const Eigen::VectorXd reduced =
        cost.head(enter_limit) - t.full.leftCols(enter_limit).transpose() * y;

    Eigen::Index entering = -1;
    Real best = -opt.tolerance;
    for (Eigen::Index j = 0; j < enter_limit; ++j) {
      if (in_basis[static_cast<std::size_t>(j)]) continue;
      if (reduced(j) < best) {
        entering = j;
        if (bland) break;
        best = reduced(j);
      }
    }
    if (entering < 0) return LpStatus::Optimal;

    const Eigen::VectorXd u = lu.solve(t.full.col(entering));
    Eigen::Index leaving = -1;
    Real ratio = std::numeric_limits<Real>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      if (u(i) <= opt.tolerance) continue;
      const Real r = std::max(xb(i), 0.0) / u(i);
      bool take = r < ratio - 1e-12;
      if (!take && leaving >= 0 && r <= ratio + 1e-12) {
        take = bland ? t.basis[static_cast<std::size_t>(i)] < t.basis[static_cast<std::size_t>(leaving)]
                     : u(i) > u(leaving);
      }
      if (take) {
        leaving = i;
        ratio = std::min(ratio, r);
      }
    }
    if (leaving < 0) return LpStatus::Unbounded;

    if (ratio <= opt.tolerance) {
      if (++degenerate_run >= opt.degenerate_switch) bland = true;
    } else {
      degenerate_run = 0;
      bland = false;
    }
    in_basis[static_cast<std::size_t>(t.basis[static_cast<std::size_t>(leaving)])] = 0;
    in_basis[static_cast<std::size_t>(entering)] = 1;
    t.basis[static_cast<std::size_t>(leaving)] = entering;
    ++iterations;
  }
}

// Pivots artificial columns out of the basis where a structural column can
// replace them.
void expel_artificials(Tableau& t) {
  const Eigen::Index m = t.full.rows(), n = t.original_cols;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (t.basis[static_cast<std::size_t>(i)] < n) continue;
    const Eigen::MatrixXd bm = basis_matrix(t);
    const Eigen::PartialPivLU<Eigen::MatrixXd> lut(bm.transpose());
    const Eigen::VectorXd row = lut.solve(Eigen::VectorXd::Unit(m, i));
    const Eigen::VectorXd coeffs = t.full.leftCols(n).transpose() * row;
    Eigen::Index pick = -1;
    Real biggest = 1e-9;
    for (Eigen::Index j = 0; j < n; ++j) {
      bool basic = false;
      for (auto bj : t.basis) basic = basic || bj == j;
      if (!basic && std::abs(coeffs(j)) > biggest) {
        biggest = std::abs(coeffs(j));
        pick = j;
      }
    }
    if (pick >= 0) t.basis[static_cast<std::size_t>(i)] = pick;
  }
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options) {
  const Eigen::Index m = lp.a.rows(), n = lp.a.cols();
  if (lp.b.size() != m || lp.c.size() != n) throw ShapeError("solve_lp: A, b and c dimensions disagree");

  Eigen::VectorXd sign = Eigen::VectorXd::Ones(m);
  for (Eigen::Index i = 0; i < m; ++i)
    if (lp.b(i) < 0) sign(i) = -1;

  Tableau t;
  t.original_cols = n;
  t.full.resize(m, n + m);
  t.full.leftCols(n) = sign.asDiagonal() * lp.a;
  t.full.rightCols(m).setIdentity();
  t.rhs = sign.cwiseProduct(lp.b);
  t.basis.resize(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) t.basis[static_cast<std::size_t>(i)] = n + i;

  LpSolution out;
  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n + m);
  phase1.tail(m).setOnes();
  LpStatus status = iterate(t, phase1, n, options, out.iterations);
  if (status == LpStatus::IterationLimit) {
    out.status = status;
    return out;
  }
  {
    const Eigen::VectorXd xb = basis_matrix(t).partialPivLu().solve(t.rhs);
    Real infeasibility = 0;
    for (Eigen::Index i = 0; i < m; ++i)
      if (t.basis[static_cast<std::size_t>(i)] >= n) infeasibility += std::abs(xb(i));
    if (infeasibility > 1e-9 * (1.0 + t.rhs.cwiseAbs().maxCoeff())) {
      out.status = LpStatus::Infeasible;
      return out;
    }
  }
  expel_artificials(t);

  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(n + m);
  phase2.head(n) = lp.c;
  status = iterate(t, phase2, n, options, out.iterations);
  out.status = status;
  if (status != LpStatus::Optimal) return out;

  const Eigen::MatrixXd bm = basis_matrix(t);
  const Eigen::VectorXd xb = bm.partialPivLu().solve(t.rhs);
  Eigen::VectorXd cb(m);
  for (Eigen::Index i = 0; i < m; ++i) cb(i) = phase2(t.basis[static_cast<std::size_t>(i)]);
  const Eigen::VectorXd y = bm.transpose().partialPivLu().solve(cb);

  out.x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index j = t.basis[static_cast<std::size_t>(i)];
    if (j < n) out.x(j) = std::max(xb(i), 0.0);
  }
  out.dual = sign.cwiseProduct(y);
  out.objective = lp.c.dot(out.x);
  return out;
}

}  // namespace pmlab
