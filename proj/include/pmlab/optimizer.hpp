#pragma once

// Random-restart projected finite-difference ascent over the instrument
// family and over the reprepare process family.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "pmlab/game.hpp"
#include "pmlab/instruments.hpp"
#include "pmlab/process.hpp"

namespace pmlab {

struct OptimizerConfig {
  int restarts = 64;
  int max_iterations = 2000;
  Real initial_step = 0.1;
  Real step_decay = 0.97;
  Real tolerance = 1e-9;
  Real difference_step = 1e-6;
  std::uint64_t seed = 20150904;
  /// Free correlation tensors on the unit Frobenius sphere instead of m n^T.
  bool general_correlations = false;
  /// Restart r uses encodings F = from_ordinal(r % 16), G = from_ordinal(r / 16 % 16).
  bool cycle_encodings = false;
  /// Worker threads for restarts; 0 picks the hardware concurrency.
  int threads = 0;

  /// Throws DomainError for non-positive counts, steps or tolerance.
  void check() const;
};

/// Parameter vector split into consecutive blocks, each kept on its unit sphere.
using SphereBlocks = std::vector<int>;

/// Objective on normalized parameters; nullopt marks an infeasible point.
using Objective = std::function<std::optional<Real>(const Eigen::VectorXd&)>;

Eigen::VectorXd normalize_blocks(const Eigen::VectorXd& params, const SphereBlocks& blocks);

/// params + step * gradient, then every block renormalized. A zero gradient
/// returns params untouched.
Eigen::VectorXd projected_step(const Eigen::VectorXd& params, const Eigen::VectorXd& gradient, Real step,
                               const SphereBlocks& blocks);

/// Central differences of `f` composed with normalize_blocks; falls back to a
/// one-sided difference next to an infeasible point. A coordinate where both
/// neighbours are lower (a kink ridge) gets a zero component.
Eigen::VectorXd difference_gradient(const Objective& f, const Eigen::VectorXd& params, const SphereBlocks& blocks,
                                    Real h);

struct AscentRun {
  Eigen::VectorXd params;
  Real value = 0;
  std::vector<Real> trace;  // objective after every accepted step, start included
};

/// Single ascent from a feasible `start`: move along the normalized gradient
/// by the current step, halve until the objective does not decrease, and decay
/// the step geometrically. A step gaining less than the tolerance resets the
/// schedule to the initial step; the run ends when a whole schedule gains less
/// than the tolerance or the iteration limit is hit. Throws DomainError when
/// `start` is infeasible.
AscentRun ascend(const Objective& f, const Eigen::VectorXd& start, const SphereBlocks& blocks,
                 const OptimizerConfig& config);

struct OptimizationResult {
  Real value = 0;
  Real alpha = 0.5;
  Real beta = 0.5;
  // instrument search
  std::optional<ObservableSpec> alice;
  std::optional<BobSpec> bob;
  // reprepare-family search
  std::optional<ReprepareCoefficients> coefficients;
  std::optional<Vector3> decoding_axis;

  std::vector<std::vector<Real>> traces;  // per restart
  std::size_t best_restart = 0;
  bool feasible = false;        // best parameters pass the positivity checks
  Real reevaluation_gap = 0;    // |value - full-pipeline re-evaluation|
};

/// Maximizes the success probability at alpha = 1/2 over Alice's observable
/// spec and Bob's spec with Bob's output state fixed to 1/2. Throws
/// ValidationError when `w` is not a valid process (it is re-validated).
OptimizationResult maximize_instruments(const ProcessMatrix& w, Real beta, const OptimizerConfig& config = {});

/// Maximizes 1/4 [2 + a_to_b + t.(b_to_a) + (2 alpha - 1)(alice_bias + bob_bias)]
/// over the reprepare family at its positivity boundary and unit t, beta = 1/2.
OptimizationResult maximize_reprepare_family(Real alpha, const OptimizerConfig& config = {});

/// Closed-form objective of maximize_reprepare_family.
Real reprepare_family_objective(const ReprepareCoefficients& c, const Vector3& t, Real alpha);

/// Success probability of the reprepare process with z-basis Alice and Bob's
/// branch instrument along t, through the Born pipeline.
Real reprepare_family_success(const ReprepareCoefficients& c, const Vector3& t, Real alpha);

/// Success probability of the instrument specs on `w` through the validated pipeline.
Real instrument_success(const ProcessMatrix& w, const ObservableSpec& alice, const BobSpec& bob, const GameSpec& game);

struct ThresholdResult {
  Real alpha = 0;
  Real value_at_crossing = 0;  // maximize_reprepare_family at alpha
  int bisections = 0;
};

/// Restart count etc. used by threshold_alpha when none is given.
OptimizerConfig threshold_config();

/// Bisects maximize_reprepare_family(alpha) - (1 + alpha)/2 on [1/2, 0.999]
/// until the bracket is narrower than 1e-7.
ThresholdResult threshold_alpha(const OptimizerConfig& config = threshold_config());

}  // namespace pmlab
