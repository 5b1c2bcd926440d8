#include "pmlab/causal_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pmlab/simplex.hpp"

namespace pmlab {

namespace {

int bit(std::uint32_t mask, int index) { return static_cast<int>((mask >> index) & 1u); }

const std::vector<CorrelationTable>& vertex_tables() {
  static const std::vector<CorrelationTable> tables = [] {
    std::vector<CorrelationTable> out;
    for (const auto& s : enumerate_strategies()) out.push_back(strategy_table(s));
    return out;
  }();
  return tables;
}

Real dot(const std::array<Real, JointDistribution::kEntries>& c, const CorrelationTable& t) {
  Real s = 0;
  for (std::size_t k = 0; k < JointDistribution::kEntries; ++k) s += c[k] * t.values()[k];
  return s;
}

}  // namespace

int DeterministicStrategy::x(int a, int b, int bprime) const {
  if (order == CausalOrder::AliceFirst) return bit(first, a);
  return bit(second, (a << 2) | (b << 1) | bprime);
}

int DeterministicStrategy::y(int a, int b, int bprime) const {
  if (order == CausalOrder::AliceFirst) return bit(second, (a << 2) | (b << 1) | bprime);
  return bit(first, (b << 1) | bprime);
}

const std::vector<DeterministicStrategy>& enumerate_strategies() {
  static const std::vector<DeterministicStrategy> all = [] {
    std::vector<DeterministicStrategy> out;
    out.reserve(4 * 256 + 16 * 256);
    for (std::uint32_t f = 0; f < 4; ++f)
      for (std::uint32_t g = 0; g < 256; ++g) out.push_back({CausalOrder::AliceFirst, f, g});
    for (std::uint32_t g = 0; g < 16; ++g)
      for (std::uint32_t f = 0; f < 256; ++f) out.push_back({CausalOrder::BobFirst, g, f});
    return out;
  }();
  return all;
}

CorrelationTable strategy_table(const DeterministicStrategy& s) {
  CorrelationTable t;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int bp = 0; bp < 2; ++bp) t(s.x(a, b, bp), s.y(a, b, bp), a, b, bp) = 1.0;
  return t;
}

Real oracle_bound(const GameSpec& spec) {
  spec.check();
  Real best = -1;
  for (const auto& t : vertex_tables()) best = std::max(best, success_probability(t, spec));
  return best;
}

DeterministicStrategy oracle_best_strategy(const GameSpec& spec) {
  spec.check();
  const auto& all = enumerate_strategies();
  const auto& tables = vertex_tables();
  std::size_t arg = 0;
  Real best = -1;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    const Real v = success_probability(tables[i], spec);
    if (v > best) {
      best = v;
      arg = i;
    }
  }
  return all[arg];
}

Real TableFunctional::evaluate(const CorrelationTable& table) const { return dot(coefficients, table); }

TableFunctional TableFunctional::shifted_to(Real target) const {
  TableFunctional out = *this;
  const Real shift = (target - bound) / 8.0;
  for (auto& c : out.coefficients) c += shift;
  out.bound = target;
  return out;
}

Real vertex_maximum(const std::array<Real, JointDistribution::kEntries>& coefficients) {
  Real best = -std::numeric_limits<Real>::infinity();
  for (const auto& t : vertex_tables()) best = std::max(best, dot(coefficients, t));
  return best;
}

TableFunctional game_functional(const GameSpec& spec) {
  spec.check();
  TableFunctional f;
  const auto pr = [&](int v) { return v == 0 ? spec.alpha : 1.0 - spec.alpha; };
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const Real w = pr(a) * pr(b);
          if (x == b) f.coefficients[JointDistribution::index(x, y, a, b, 0)] += spec.beta * w;
          if (y == a) f.coefficients[JointDistribution::index(x, y, a, b, 1)] += (1.0 - spec.beta) * w;
        }
  f.bound = vertex_maximum(f.coefficients);
  return f;
}

CausalVerdict is_causal(const CorrelationTable& table, Real tol) {
  constexpr Eigen::Index kRows = JointDistribution::kEntries;
  const auto& tables = vertex_tables();
  const Eigen::Index nv = static_cast<Eigen::Index>(tables.size());

  // sum_v w_v V_v + s+ - s- = p, sum_v w_v = 1, minimize sum (s+ + s-)
  LinearProgram lp;
  lp.a = Eigen::MatrixXd::Zero(kRows + 1, nv + 2 * kRows);
  lp.b = Eigen::VectorXd::Zero(kRows + 1);
  lp.c = Eigen::VectorXd::Zero(nv + 2 * kRows);
  for (Eigen::Index v = 0; v < nv; ++v) {
    const auto& vals = tables[static_cast<std::size_t>(v)].values();
    for (Eigen::Index k = 0; k < kRows; ++k) lp.a(k, v) = vals[static_cast<std::size_t>(k)];
    lp.a(kRows, v) = 1.0;
  }
  for (Eigen::Index k = 0; k < kRows; ++k) {
    lp.a(k, nv + k) = 1.0;
    lp.a(k, nv + kRows + k) = -1.0;
    lp.b(k) = table.values()[static_cast<std::size_t>(k)];
  }
  lp.b(kRows) = 1.0;
  lp.c.tail(2 * kRows).setOnes();

  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal)
    throw NumericalIntegrityError("is_causal: membership program did not reach an optimum");

  CausalVerdict out;
  out.distance = sol.objective;
  out.causal = out.distance <= tol;
  if (out.causal) {
    out.weights.assign(sol.x.data(), sol.x.data() + nv);
    Real total = 0;
    for (Real w : out.weights) total += w;
    for (Real& w : out.weights) w /= total;
    return out;
  }
  for (Eigen::Index k = 0; k < kRows; ++k) out.functional.coefficients[static_cast<std::size_t>(k)] = sol.dual(k);
  out.functional.bound = vertex_maximum(out.functional.coefficients);
  out.functional_value = out.functional.evaluate(table);
  return out;
}

}  // namespace pmlab
