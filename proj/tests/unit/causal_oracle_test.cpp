#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <tuple>

#include "pmlab/causal_oracle.hpp"

namespace pmlab {
namespace {

JointDistribution dbit_distribution(const ProcessMatrix& w) {
  return joint_distribution(w, alice_z_instruments(), bob_branch_instruments());
}

TEST(Strategies, CountAndUniqueness) {
  const auto& all = enumerate_strategies();
  ASSERT_EQ(all.size(), 5120u);
  std::set<std::tuple<int, std::uint32_t, std::uint32_t>> keys;
  for (const auto& s : all) keys.emplace(static_cast<int>(s.order), s.first, s.second);
  EXPECT_EQ(keys.size(), 5120u);
  EXPECT_EQ(std::count_if(all.begin(), all.end(), [](const auto& s) { return s.order == CausalOrder::AliceFirst; }),
            1024);
}

TEST(Strategies, DistinctTables) {
  std::set<std::array<Real, JointDistribution::kEntries>> tables;
  for (const auto& s : enumerate_strategies()) tables.insert(strategy_table(s).values());
  // both orders agree on the strategies where neither guess reads the other's bit
  EXPECT_EQ(tables.size(), 5056u);
}

TEST(Strategies, OrderingConstraints) {
  for (const auto& s : enumerate_strategies()) {
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int bp = 0; bp < 2; ++bp) {
          if (s.order == CausalOrder::AliceFirst)
            EXPECT_EQ(s.x(a, b, bp), s.x(a, 1 - b, 1 - bp));
          else
            EXPECT_EQ(s.y(a, b, bp), s.y(1 - a, b, bp));
        }
  }
}

TEST(Strategies, ContainsConstantGuessAndRelay) {
  const auto& all = enumerate_strategies();
  const bool found = std::any_of(all.begin(), all.end(), [](const DeterministicStrategy& s) {
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int bp = 0; bp < 2; ++bp)
          if (s.x(a, b, bp) != 0 || s.y(a, b, bp) != a) return false;
    return s.order == CausalOrder::AliceFirst;
  });
  EXPECT_TRUE(found);
}

TEST(Strategies, TablesAreDeterministic) {
  for (const auto& s : enumerate_strategies()) {
    const auto t = strategy_table(s);
    EXPECT_LE(t.normalization_defect(), 0.0);
    for (Real p : t.values()) EXPECT_TRUE(p == 0.0 || p == 1.0);
  }
}

TEST(OracleBound, KnownValues) {
  EXPECT_NEAR(oracle_bound({0.5, 0.5}), 0.75, 1e-15);
  EXPECT_NEAR(oracle_bound({0.6, 0.7}), 0.88, 1e-15);
  for (Real alpha : {0.5, 0.55, 0.7, 0.9, 0.99}) EXPECT_NEAR(oracle_bound({alpha, 0.5}), (1 + alpha) / 2, 1e-15);
}

TEST(OracleBound, MatchesClosedFormOnGrid) {
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      const GameSpec spec{0.5 + 0.049 * i, 0.5 + 0.049 * j};
      EXPECT_NEAR(oracle_bound(spec), causal_bound(spec), 1e-12);
      const auto best = oracle_best_strategy(spec);
      EXPECT_NEAR(success_probability(strategy_table(best), spec), oracle_bound(spec), 1e-15);
    }
}

TEST(Functional, GameFunctionalMatchesSuccess) {
  const GameSpec spec{0.6, 0.7};
  const auto f = game_functional(spec);
  EXPECT_NEAR(f.bound, 0.88, 1e-15);
  const auto dist = dbit_distribution(w_ocb());
  EXPECT_NEAR(f.evaluate(dist), success_probability(dist, spec), 1e-15);
  const auto g = f.shifted_to(0.5);
  EXPECT_NEAR(g.bound, 0.5, 1e-15);
  EXPECT_NEAR(vertex_maximum(g.coefficients), 0.5, 1e-15);
}

TEST(IsCausal, SingleVertex) {
  const auto& s = enumerate_strategies()[777];
  const auto v = is_causal(strategy_table(s));
  EXPECT_TRUE(v.causal);
  EXPECT_LE(v.distance, 1e-10);
  Real total = 0;
  for (Real w : v.weights) {
    EXPECT_GE(w, -1e-12);
    total += w;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(IsCausal, UniformTable) {
  JointDistribution uniform;
  uniform.values().fill(0.25);
  EXPECT_TRUE(is_causal(uniform).causal);
}

TEST(IsCausal, RandomConvexMixtures) {
  std::mt19937_64 rng(47);
  std::uniform_int_distribution<std::size_t> pick(0, 5119);
  std::uniform_real_distribution<Real> u(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    JointDistribution mix;
    Real total = 0;
    std::vector<std::pair<std::size_t, Real>> parts;
    for (int k = 0; k < 6; ++k) {
      parts.emplace_back(pick(rng), u(rng));
      total += parts.back().second;
    }
    for (const auto& [idx, w] : parts) {
      const auto t = strategy_table(enumerate_strategies()[idx]);
      for (std::size_t e = 0; e < JointDistribution::kEntries; ++e) mix.values()[e] += w / total * t.values()[e];
    }
    const auto v = is_causal(mix);
    EXPECT_TRUE(v.causal);
    JointDistribution rebuilt;
    for (std::size_t i = 0; i < v.weights.size(); ++i) {
      if (v.weights[i] == 0.0) continue;
      const auto t = strategy_table(enumerate_strategies()[i]);
      for (std::size_t e = 0; e < JointDistribution::kEntries; ++e) rebuilt.values()[e] += v.weights[i] * t.values()[e];
    }
    for (std::size_t e = 0; e < JointDistribution::kEntries; ++e)
      EXPECT_NEAR(rebuilt.values()[e], mix.values()[e], 1e-8);
  }
}

TEST(IsCausal, OcbIsNotCausal) {
  const auto dist = dbit_distribution(w_ocb());
  const auto v = is_causal(dist);
  EXPECT_FALSE(v.causal);
  EXPECT_GT(v.distance, 1e-3);
  EXPECT_GT(v.functional_value, v.functional.bound + 1e-6);
  const auto shifted = v.functional.shifted_to(0.75);
  EXPECT_GT(shifted.evaluate(dist), 0.75);
  for (const auto& s : enumerate_strategies()) EXPECT_LE(shifted.evaluate(strategy_table(s)), 0.75 + 1e-9);
}

TEST(IsCausal, OrderedProcessesAndMixturesAreCausal) {
  const auto ab = ordered_identity_channel_process(Direction::AToB);
  const auto ba = ordered_identity_channel_process(Direction::BToA);
  for (Real q : {0.0, 0.3, 1.0}) EXPECT_TRUE(is_causal(dbit_distribution(causal_mixture(ab, ba, q))).causal) << q;
}

}  // namespace
}  // namespace pmlab
