#include "pmlab/optimizer.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

namespace pmlab {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 restart_stream(std::uint64_t seed, int restart) {
  return std::mt19937_64(splitmix(seed ^ splitmix(static_cast<std::uint64_t>(restart))));
}

Eigen::VectorXd gaussian(std::mt19937_64& rng, int n) {
  std::normal_distribution<Real> normal;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

Vector3 block3(const Eigen::VectorXd& p, int offset) { return p.segment<3>(offset); }

Matrix3 block9(const Eigen::VectorXd& p, int offset) {
  Matrix3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = p(offset + 3 * i + j);
  return m;
}

int worker_count(const OptimizerConfig& config) {
  int n = config.threads;
  if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
  return std::max(1, std::min(n, config.restarts));
}

// Runs `body(r)` for r in [0, count) on the configured worker threads.
void for_each_restart(const OptimizerConfig& config, const std::function<void(int)>& body) {
  const int workers = worker_count(config);
  if (workers == 1) {
    for (int r = 0; r < config.restarts; ++r) body(r);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int r = next++; r < config.restarts; r = next++) {
        try {
          body(r);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::size_t best_index(const std::vector<AscentRun>& runs) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < runs.size(); ++i)
    if (runs[i].value > runs[best].value) best = i;
  return best;
}

// Instrument search layout: m n | r t o [| T S]
struct InstrumentLayout {
  bool general = false;
  SphereBlocks blocks() const { return general ? SphereBlocks{3, 3, 3, 3, 3, 9, 9} : SphereBlocks{3, 3, 3, 3, 3}; }
};

std::pair<ObservableSpec, BobSpec> decode_instruments(const Eigen::VectorXd& p, bool general, EncodingTable f,
                                                      EncodingTable g) {
  ObservableSpec alice;
  alice.input = block3(p, 0);
  alice.output = block3(p, 3);
  alice.encoding = f;
  BobSpec bob;
  bob.guess_axis = block3(p, 6);
  bob.relay.input = block3(p, 9);
  bob.relay.output = block3(p, 12);
  bob.relay.encoding = g;
  if (general) {
    alice.correlation = block9(p, 15);
    bob.relay.correlation = block9(p, 24);
  } else {
    alice.correlation = alice.input * alice.output.transpose();
    bob.relay.correlation = bob.relay.input * bob.relay.output.transpose();
  }
  return {alice, bob};
}

}  // namespace

void OptimizerConfig::check() const {
  if (restarts <= 0) throw DomainError("restart count must be positive");
  if (max_iterations <= 0) throw DomainError("iteration limit must be positive");
  if (!(initial_step > 0)) throw DomainError("initial step must be positive");
  if (!(step_decay > 0 && step_decay <= 1)) throw DomainError("step decay must lie in (0, 1]");
  if (!(tolerance > 0)) throw DomainError("tolerance must be positive");
  if (!(difference_step > 0)) throw DomainError("finite-difference step must be positive");
}

Eigen::VectorXd normalize_blocks(const Eigen::VectorXd& params, const SphereBlocks& blocks) {
  Eigen::VectorXd out = params;
  Eigen::Index offset = 0;
  for (int size : blocks) {
    const Real n = out.segment(offset, size).norm();
    if (n > 0) out.segment(offset, size) /= n;
    offset += size;
  }
  if (offset != params.size()) throw ShapeError("sphere blocks do not cover the parameter vector");
  return out;
}

Eigen::VectorXd projected_step(const Eigen::VectorXd& params, const Eigen::VectorXd& gradient, Real step,
                               const SphereBlocks& blocks) {
  if (gradient.size() != params.size()) throw ShapeError("gradient and parameters differ in size");
  if (gradient.isZero(0.0)) return params;
  return normalize_blocks(params + step * gradient, blocks);
}

Eigen::VectorXd difference_gradient(const Objective& f, const Eigen::VectorXd& params, const SphereBlocks& blocks,
                                    Real h) {
  const auto center = f(normalize_blocks(params, blocks));
  Eigen::VectorXd g = Eigen::VectorXd::Zero(params.size());
  for (Eigen::Index i = 0; i < params.size(); ++i) {
    Eigen::VectorXd up = params, down = params;
    up(i) += h;
    down(i) -= h;
    const auto fu = f(normalize_blocks(up, blocks));
    const auto fd = f(normalize_blocks(down, blocks));
    if (fu && fd && center && *fu < *center && *fd < *center)
      g(i) = 0;  // ridge along this coordinate
    else if (fu && fd)
      g(i) = (*fu - *fd) / (2 * h);
    else if (fu && center)
      g(i) = (*fu - *center) / h;
    else if (fd && center)
      g(i) = (*center - *fd) / h;
  }
  return g;
}

AscentRun ascend(const Objective& f, const Eigen::VectorXd& start, const SphereBlocks& blocks,
                 const OptimizerConfig& config) {
  AscentRun run;
  run.params = normalize_blocks(start, blocks);
  const auto v0 = f(run.params);
  if (!v0) throw DomainError("ascent needs a feasible starting point");
  run.value = *v0;
  run.trace.push_back(run.value);

  // The step schedule restarts from the initial step whenever a cycle
  // stalls; the run ends when a fresh cycle cannot gain the tolerance.
  Real step = config.initial_step;
  Real cycle_gain = 0;
  for (int it = 0; it < config.max_iterations; ++it) {
    const Eigen::VectorXd g = difference_gradient(f, run.params, blocks, config.difference_step);
    const Real gn = g.norm();
    if (!(gn > 0)) break;
    const Eigen::VectorXd dir = g / gn;

    bool accepted = false;
    Eigen::VectorXd cand;
    Real cv = 0;
    Real s = step;
    for (int halving = 0; halving < 40; ++halving, s *= 0.5) {
      cand = projected_step(run.params, dir, s, blocks);
      const auto v = f(cand);
      if (v && *v >= run.value) {
        cv = *v;
        accepted = true;
        break;
      }
    }
    const Real gain = accepted ? cv - run.value : 0.0;
    if (accepted) {
      run.params = cand;
      run.value = cv;
      run.trace.push_back(cv);
      cycle_gain += gain;
    }
    if (gain < config.tolerance) {
      if (cycle_gain < config.tolerance) break;
      step = config.initial_step;
      cycle_gain = 0;
      continue;
    }
    step *= config.step_decay;
  }
  return run;
}

Real instrument_success(const ProcessMatrix& w, const ObservableSpec& alice, const BobSpec& bob, const GameSpec& game) {
  const auto a = alice_instruments(alice);
  const auto b = bob_instruments(bob);
  if (!a || !b) throw DomainError("instrument spec fails the positivity guard");
  return success_probability(joint_distribution(w, *a, *b), game);
}

OptimizationResult maximize_instruments(const ProcessMatrix& w, Real beta, const OptimizerConfig& config) {
  config.check();
  const GameSpec game{0.5, beta};
  game.check();
  const ProcessMatrix checked = ProcessMatrix::from_matrix(w.matrix(), w.layout(), w.provenance());
  const ComplexMatrix& wm = checked.matrix();
  const bool general = config.general_correlations;
  const SphereBlocks blocks = InstrumentLayout{general}.blocks();

  const auto encodings = [&](int r) {
    if (!config.cycle_encodings) return std::pair{EncodingTable::copy_input(), EncodingTable::xor_input()};
    return std::pair{EncodingTable::from_ordinal(r % 16), EncodingTable::from_ordinal(r / 16 % 16)};
  };

  std::vector<AscentRun> runs(static_cast<std::size_t>(config.restarts));
  for_each_restart(config, [&](int r) {
    const auto [fa, gb] = encodings(r);
    const Objective f = [&, fa = fa, gb = gb](const Eigen::VectorXd& p) -> std::optional<Real> {
      const auto [alice, bob] = decode_instruments(p, general, fa, gb);
      const auto a = alice_instruments(alice);
      if (!a) return std::nullopt;
      const auto b = bob_instruments(bob);
      if (!b) return std::nullopt;
      return success_probability(joint_distribution_unchecked(wm, *a, *b), game);
    };
    auto rng = restart_stream(config.seed, r);
    Eigen::VectorXd start = gaussian(rng, 15);
    if (general) {
      start = normalize_blocks(start, {3, 3, 3, 3, 3});
      Eigen::VectorXd full(33);
      full.head(15) = start;
      const Matrix3 ta = block3(start, 0) * block3(start, 3).transpose();
      const Matrix3 sb = block3(start, 9) * block3(start, 12).transpose();
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          full(15 + 3 * i + j) = ta(i, j);
          full(24 + 3 * i + j) = sb(i, j);
        }
      start = full;
    }
    runs[static_cast<std::size_t>(r)] = ascend(f, start, blocks, config);
  });

  OptimizationResult out;
  out.alpha = 0.5;
  out.beta = beta;
  out.best_restart = best_index(runs);
  for (auto& run : runs) out.traces.push_back(std::move(run.trace));
  const AscentRun& best = runs[out.best_restart];
  out.value = best.value;
  const auto [fa, gb] = encodings(static_cast<int>(out.best_restart));
  auto [alice, bob] = decode_instruments(best.params, general, fa, gb);
  out.alice = alice;
  out.bob = bob;
  const auto a = alice_instruments(alice);
  const auto b = bob_instruments(bob);
  out.feasible = a.has_value() && b.has_value();
  if (out.feasible) out.reevaluation_gap = std::abs(instrument_success(checked, alice, bob, game) - out.value);
  return out;
}

Real reprepare_family_objective(const ReprepareCoefficients& c, const Vector3& t, Real alpha) {
  return 0.25 * (2.0 + c.a_to_b + t.x() * c.b_to_a_x + t.y() * c.b_to_a_y + t.z() * c.b_to_a_z +
                 (2.0 * alpha - 1.0) * (c.alice_bias + c.bob_bias));
}

Real reprepare_family_success(const ReprepareCoefficients& c, const Vector3& t, Real alpha) {
  const auto candidate = reprepare_family_process(c);
  const auto w = candidate.process();
  if (!w) throw ValidationError("reprepare coefficients give an invalid process");
  return success_probability(joint_distribution(*w, alice_z_instruments(), bob_branch_instruments(t)),
                             GameSpec{alpha, 0.5});
}

namespace {

ReprepareCoefficients coefficients_from(const Eigen::VectorXd& theta) {
  return {theta(0), theta(1), theta(2), theta(3), theta(4), theta(5)};
}

// Scales a direction onto the positivity boundary of the family.
ReprepareCoefficients boundary_point(const Eigen::VectorXd& direction) {
  const ReprepareCoefficients raw = coefficients_from(direction);
  const Real spread = 1.0 - 4.0 * reprepare_family_min_eigenvalue(raw);
  const Eigen::VectorXd c = direction / spread;
  return coefficients_from(c);
}

}  // namespace

OptimizationResult maximize_reprepare_family(Real alpha, const OptimizerConfig& config) {
  config.check();
  GameSpec{alpha, 0.5}.check();
  const SphereBlocks blocks{6, 3};
  const Objective f = [alpha](const Eigen::VectorXd& p) -> std::optional<Real> {
    return reprepare_family_objective(boundary_point(p.head(6)), p.tail<3>(), alpha);
  };

  std::vector<AscentRun> runs(static_cast<std::size_t>(config.restarts));
  for_each_restart(config, [&](int r) {
    auto rng = restart_stream(config.seed, r);
    runs[static_cast<std::size_t>(r)] = ascend(f, gaussian(rng, 9), blocks, config);
  });

  OptimizationResult out;
  out.alpha = alpha;
  out.beta = 0.5;
  out.best_restart = best_index(runs);
  for (auto& run : runs) out.traces.push_back(std::move(run.trace));
  const AscentRun& best = runs[out.best_restart];
  out.value = best.value;
  out.coefficients = boundary_point(best.params.head(6));
  out.decoding_axis = Vector3(best.params.tail<3>());
  out.feasible = reprepare_family_process(*out.coefficients).report.is_valid;
  if (out.feasible)
    out.reevaluation_gap = std::abs(reprepare_family_success(*out.coefficients, *out.decoding_axis, alpha) - out.value);
  return out;
}

OptimizerConfig threshold_config() {
  OptimizerConfig c;
  c.restarts = 8;
  return c;
}

ThresholdResult threshold_alpha(const OptimizerConfig& config) {
  const auto gap = [&](Real alpha) { return maximize_reprepare_family(alpha, config).value - 0.5 * (1.0 + alpha); };
  Real lo = 0.5, hi = 0.999;
  if (!(gap(lo) > 0 && gap(hi) < 0)) throw NumericalIntegrityError("threshold bracket does not change sign");
  ThresholdResult out;
  while (hi - lo > 1e-7) {
    const Real mid = 0.5 * (lo + hi);
    (gap(mid) > 0 ? lo : hi) = mid;
    ++out.bisections;
  }
  out.alpha = 0.5 * (lo + hi);
  out.value_at_crossing = maximize_reprepare_family(out.alpha, config).value;
  return out;
}

}  // namespace pmlab
