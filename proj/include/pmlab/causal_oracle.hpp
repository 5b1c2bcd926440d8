#pragma once

// Deterministic one-way-signaling strategies and membership in their convex hull.

#include <array>
#include <cstdint>
#include <vector>

#include "pmlab/game.hpp"

namespace pmlab {

enum class CausalOrder { AliceFirst, BobFirst };

/// The earlier party's guess reads only its own bits; the later party may
/// read everything. Tables are bit masks over the guess function's inputs.
///
///   AliceFirst: x = first(a) [2 bits],        y = second(a, b, b') [8 bits]
///   BobFirst:   y = first(b, b') [4 bits],    x = second(a, b, b') [8 bits]
struct DeterministicStrategy {
  CausalOrder order = CausalOrder::AliceFirst;
  std::uint32_t first = 0;
  std::uint32_t second = 0;

  int x(int a, int b, int bprime) const;
  int y(int a, int b, int bprime) const;

  bool operator==(const DeterministicStrategy&) const = default;
};

/// 4 * 256 strategies with Alice first followed by 16 * 256 with Bob first.
const std::vector<DeterministicStrategy>& enumerate_strategies();

/// The 0/1 table p(x, y | a, b, b') induced by a strategy.
CorrelationTable strategy_table(const DeterministicStrategy& s);

/// Maximum success probability over every deterministic strategy.
Real oracle_bound(const GameSpec& spec);
/// A strategy attaining oracle_bound (first in enumeration order).
DeterministicStrategy oracle_best_strategy(const GameSpec& spec);

/// Linear functional on correlation tables, sum_k coefficients[k] p[k],
/// together with its maximum over all deterministic vertices.
struct TableFunctional {
  std::array<Real, JointDistribution::kEntries> coefficients{};
  Real bound = 0;

  Real evaluate(const CorrelationTable& table) const;
  /// Same inequality with the constant table 1 added so that the vertex
  /// maximum becomes `target` (every normalized table sums to 8).
  TableFunctional shifted_to(Real target) const;
};

/// Recomputes the vertex maximum of `coefficients` over all strategies.
Real vertex_maximum(const std::array<Real, JointDistribution::kEntries>& coefficients);

/// The success probability of `spec` written as a table functional.
TableFunctional game_functional(const GameSpec& spec);

struct CausalVerdict {
  bool causal = false;
  Real distance = 0;            // L1 distance from the table to the hull
  std::vector<Real> weights;    // convex weights per strategy (when causal)
  TableFunctional functional;   // separating functional (when not causal)
  Real functional_value = 0;    // functional evaluated on the table
};

/// Decides whether `table` lies within L1 distance `tol` of the convex hull of
/// the deterministic strategy tables.
CausalVerdict is_causal(const CorrelationTable& table, Real tol = 1e-8);

}  // namespace pmlab
