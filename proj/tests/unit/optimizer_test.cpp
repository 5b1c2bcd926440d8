#include <gtest/gtest.h>

#include <random>

#include "pmlab/optimizer.hpp"

namespace pmlab {
namespace {

OptimizerConfig small_config(int restarts) {
  OptimizerConfig c;
  c.restarts = restarts;
  c.max_iterations = 400;
  c.threads = 1;
  return c;
}

TEST(Blocks, NormalizeAndStep) {
  Eigen::VectorXd p(5);
  p << 3, 4, 0, 0, 2;
  const auto n = normalize_blocks(p, {2, 3});
  EXPECT_NEAR(n.head(2).norm(), 1.0, 1e-15);
  EXPECT_NEAR(n.tail(3).norm(), 1.0, 1e-15);
  Eigen::VectorXd g(5);
  g << 0, 1, 1, 0, 0;
  const auto s = projected_step(n, g, 0.5, {2, 3});
  EXPECT_NEAR(s.head(2).norm(), 1.0, 1e-15);
  EXPECT_NEAR(s.tail(3).norm(), 1.0, 1e-15);
  EXPECT_EQ(projected_step(n, Eigen::VectorXd::Zero(5), 0.5, {2, 3}), n);
}

TEST(Gradient, LinearObjectiveOnSphere) {
  const Eigen::Vector3d u = Eigen::Vector3d(1, -2, 2).normalized();
  const Objective f = [u](const Eigen::VectorXd& v) -> std::optional<Real> { return u.dot(v); };
  const Eigen::VectorXd p = Eigen::Vector3d::UnitX();
  const auto g = difference_gradient(f, p, {3}, 1e-6);
  // the radial component vanishes after normalization
  EXPECT_NEAR(g(0), 0.0, 1e-8);
  EXPECT_NEAR(g(1), u(1), 1e-8);
  EXPECT_NEAR(g(2), u(2), 1e-8);
}

TEST(Gradient, OneSidedNextToInfeasible) {
  const Objective f = [](const Eigen::VectorXd& v) -> std::optional<Real> {
    if (v(1) > 0) return std::nullopt;
    return v(1);
  };
  const Eigen::VectorXd p = Eigen::Vector2d(1, 0);
  const auto g = difference_gradient(f, p, {2}, 1e-6);
  EXPECT_TRUE(std::isfinite(g(1)));
  EXPECT_NEAR(g(1), 1.0, 1e-6);
}

TEST(Ascend, FindsArgmaxOnSphere) {
  const Eigen::Vector3d u = Eigen::Vector3d(0.2, -0.5, 0.3).normalized();
  const Objective f = [u](const Eigen::VectorXd& v) -> std::optional<Real> { return -(v - u).squaredNorm(); };
  OptimizerConfig config;
  const auto run = ascend(f, Eigen::Vector3d(0.3, 0.9, -0.3), {3}, config);
  EXPECT_LE((run.params - u).norm(), 1e-5);
  EXPECT_NEAR(run.value, 0.0, 1e-9);
  for (std::size_t i = 1; i < run.trace.size(); ++i) EXPECT_GE(run.trace[i], run.trace[i - 1]);
}

TEST(Ascend, InfeasibleStartThrows) {
  const Objective f = [](const Eigen::VectorXd&) -> std::optional<Real> { return std::nullopt; };
  EXPECT_THROW(ascend(f, Eigen::Vector2d(1, 0), {2}, OptimizerConfig{}), DomainError);
}

TEST(Config, Check) {
  OptimizerConfig c;
  EXPECT_NO_THROW(c.check());
  c.restarts = 0;
  EXPECT_THROW(c.check(), DomainError);
  c = OptimizerConfig{};
  c.difference_step = 0;
  EXPECT_THROW(c.check(), DomainError);
}

TEST(Instruments, IdentityProcessGivesHalf) {
  const auto r = maximize_instruments(identity_process(), 0.5, small_config(2));
  EXPECT_NEAR(r.value, 0.5, 1e-12);
  EXPECT_TRUE(r.feasible);
}

TEST(Instruments, OcbSmallRun) {
  const auto r = maximize_instruments(w_ocb(), 0.5, small_config(3));
  EXPECT_TRUE(r.feasible);
  EXPECT_LE(r.value, analytic_max_dbit(0.5) + 1e-9);
  EXPECT_GT(r.value, causal_bound({0.5, 0.5}));
  EXPECT_LE(r.reevaluation_gap, 1e-10);
  EXPECT_EQ(r.traces.size(), 3u);
  for (const auto& trace : r.traces)
    for (std::size_t i = 1; i < trace.size(); ++i) EXPECT_GE(trace[i], trace[i - 1]);
  ASSERT_TRUE(r.alice && r.bob);
  EXPECT_NEAR(instrument_success(w_ocb(), *r.alice, *r.bob, {0.5, 0.5}), r.value, 1e-10);
}

TEST(Instruments, DeterministicForSeed) {
  const auto a = maximize_instruments(w_beta(0.75), 0.75, small_config(2));
  auto threaded = small_config(2);
  threaded.threads = 2;
  const auto b = maximize_instruments(w_beta(0.75), 0.75, threaded);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.traces, b.traces);
  auto other = small_config(2);
  other.seed = 7;
  EXPECT_NE(maximize_instruments(w_beta(0.75), 0.75, other).traces, a.traces);
}

TEST(Instruments, RejectsInvalidBeta) {
  EXPECT_THROW(maximize_instruments(w_ocb(), 1.0, small_config(1)), DomainError);
}

TEST(Reprepare, ObjectiveMatchesBornPipeline) {
  std::mt19937_64 rng(53);
  std::normal_distribution<Real> g;
  for (int trial = 0; trial < 20; ++trial) {
    ReprepareCoefficients c{g(rng), g(rng), g(rng), g(rng), g(rng), g(rng)};
    const Real scale = 1 - 4 * reprepare_family_min_eigenvalue(c);
    c = {c.a_to_b / scale, c.b_to_a_x / scale, c.b_to_a_y / scale, c.b_to_a_z / scale, c.alice_bias / scale,
         c.bob_bias / scale};
    const Vector3 t = Vector3(g(rng), g(rng), g(rng)).normalized();
    const Real alpha = 0.5 + 0.45 * trial / 19;
    EXPECT_NEAR(reprepare_family_objective(c, t, alpha), reprepare_family_success(c, t, alpha), 1e-12);
  }
}

TEST(Reprepare, HalfAlphaReachesOcbValue) {
  const auto r = maximize_reprepare_family(0.5, small_config(4));
  EXPECT_TRUE(r.feasible);
  EXPECT_NEAR(r.value, analytic_max_dbit(0.5), 1e-6);
  EXPECT_LE(r.value, analytic_max_dbit(0.5) + 1e-9);
  EXPECT_LE(r.reevaluation_gap, 1e-10);
  ASSERT_TRUE(r.coefficients && r.decoding_axis);
  EXPECT_NEAR(r.decoding_axis->norm(), 1.0, 1e-12);
}

TEST(Reprepare, LargeAlphaStaysBelowCausalBound) {
  const auto r = maximize_reprepare_family(0.9, small_config(4));
  EXPECT_TRUE(r.feasible);
  EXPECT_LE(r.value, 0.95 + 1e-9);
}

}  // namespace
}  // namespace pmlab
