#pragma once

// Dense two-phase revised simplex for   min c'x  s.t.  A x = b,  x >= 0.

#include <Eigen/Dense>

#include "pmlab/tensor.hpp"

namespace pmlab {

struct LinearProgram {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpSolution {
  LpStatus status = LpStatus::IterationLimit;
  Eigen::VectorXd x;
  Eigen::VectorXd dual;  // y with A'y <= c at optimality, b'y = c'x
  Real objective = 0;
  int iterations = 0;
};

struct SimplexOptions {
  int max_iterations = 50000;
  Real tolerance = 1e-10;
  int degenerate_switch = 50;  // degenerate pivots in a row before Bland's rule
};

/// Throws ShapeError when the dimensions of A, b, c disagree.
LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options = {});

}  // namespace pmlab
