#include "pmlab/game.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace pmlab {

namespace {

constexpr Real kImaginaryResidue = 1e-10;

Real input_probability(int bit, Real alpha) { return bit == 0 ? alpha : 1.0 - alpha; }

}  // namespace

void GameSpec::check() const {
  if (!(alpha >= 0.5 && alpha < 1.0)) throw DomainError("alpha must lie in [1/2, 1)");
  if (!(beta >= 0.5 && beta < 1.0)) throw DomainError("beta must lie in [1/2, 1)");
}

Real JointDistribution::normalization_defect() const {
  Real worst = 0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int bp = 0; bp < 2; ++bp) {
        Real s = 0;
        for (int x = 0; x < 2; ++x)
          for (int y = 0; y < 2; ++y) s += (*this)(x, y, a, b, bp);
        worst = std::max(worst, std::abs(s - 1.0));
      }
  return worst;
}

bool JointDistribution::is_normalized() const {
  for (Real v : p_)
    if (!(v >= -1e-12 && v <= 1.0 + 1e-12)) return false;
  return normalization_defect() <= 1e-9;
}

Real JointDistribution::alice_marginal(int x, int a, int b, int bprime) const {
  return (*this)(x, 0, a, b, bprime) + (*this)(x, 1, a, b, bprime);
}

Real JointDistribution::bob_marginal(int y, int a, int b, int bprime) const {
  return (*this)(0, y, a, b, bprime) + (*this)(1, y, a, b, bprime);
}

Real born(const ComplexMatrix& w, const CJOperator& alice, const CJOperator& bob) {
  const ComplexMatrix& ma = alice.matrix;
  const ComplexMatrix& mb = bob.matrix;
  if (ma.rows() != ma.cols() || mb.rows() != mb.cols() || w.rows() != w.cols() ||
      ma.rows() * mb.rows() != w.rows())
    throw ShapeError("born: operator dimensions do not match the process");
  // Tr[W (A (x) B)] = sum W[(i,k),(j,l)] A[j,i] B[l,k]
  const Eigen::Index da = ma.rows(), db = mb.rows();
  Complex acc(0, 0);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < da; ++j) {
      const Complex aji = ma(j, i);
      if (aji == Complex(0, 0)) continue;
      Complex inner(0, 0);
      for (Eigen::Index k = 0; k < db; ++k)
        for (Eigen::Index l = 0; l < db; ++l) inner += w(i * db + k, j * db + l) * mb(l, k);
      acc += aji * inner;
    }
  if (std::abs(acc.imag()) > kImaginaryResidue)
    throw NumericalIntegrityError("born: probability has imaginary part " + std::to_string(acc.imag()));
  return acc.real();
}

Real born(const ProcessMatrix& w, const CJOperator& alice, const CJOperator& bob) {
  return born(w.matrix(), alice, bob);
}

JointDistribution joint_distribution_unchecked(const ComplexMatrix& w, const AliceInstruments& alice,
                                               const BobInstruments& bob) {
  const CJOperator& probe_a = alice.ops[0][0];
  const CJOperator& probe_b = bob.ops[0][0][0];
  if (probe_a.matrix.rows() * probe_b.matrix.rows() != w.rows() || w.rows() != w.cols())
    throw ShapeError("joint_distribution: operator dimensions do not match the process");
  // Tr[W (A (x) B)] = sum over nonzero W[r, c] of A[c_a, r_a] B[c_b, r_b]
  struct Entry {
    Eigen::Index ra, rb, ca, cb;
    Complex value;
  };
  const Eigen::Index db = probe_b.matrix.rows();
  std::vector<Entry> entries;
  for (Eigen::Index r = 0; r < w.rows(); ++r)
    for (Eigen::Index c = 0; c < w.cols(); ++c)
      if (w(r, c) != Complex(0, 0)) entries.push_back({r / db, r % db, c / db, c % db, w(r, c)});

  JointDistribution dist;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (int bp = 0; bp < 2; ++bp) {
            const ComplexMatrix& ma = alice.ops[static_cast<std::size_t>(a)][static_cast<std::size_t>(x)].matrix;
            const ComplexMatrix& mb = bob.ops[static_cast<std::size_t>(b)][static_cast<std::size_t>(bp)]
                                             [static_cast<std::size_t>(y)].matrix;
            if (ma.rows() * mb.rows() != w.rows())
              throw ShapeError("joint_distribution: operator dimensions do not match the process");
            Complex acc(0, 0);
            for (const auto& e : entries) acc += e.value * ma(e.ca, e.ra) * mb(e.cb, e.rb);
            if (std::abs(acc.imag()) > kImaginaryResidue)
              throw NumericalIntegrityError("born: probability has imaginary part " + std::to_string(acc.imag()));
            dist(x, y, a, b, bp) = acc.real();
          }
  return dist;
}

JointDistribution joint_distribution(const ProcessMatrix& w, const AliceInstruments& alice, const BobInstruments& bob) {
  for (int a = 0; a < 2; ++a) {
    const auto report = instrument_validate(alice.instrument(a));
    if (!report.is_valid) throw ValidationError("Alice's instrument for a=" + std::to_string(a) + " is not CPTP");
  }
  for (int b = 0; b < 2; ++b)
    for (int bp = 0; bp < 2; ++bp) {
      const auto report = instrument_validate(bob.instrument(b, bp));
      if (!report.is_valid)
        throw ValidationError("Bob's instrument for b=" + std::to_string(b) + ", b'=" + std::to_string(bp) +
                              " is not CPTP");
    }
  return joint_distribution_unchecked(w.matrix(), alice, bob);
}

ComplexMatrix reduced_process(const ProcessMatrix& w, Party keep, const ComplexMatrix& other) {
  const SubsystemLayout& layout = w.layout();
  if (layout != SubsystemLayout::bipartite_qubits())
    throw UnsupportedDimensionError("reduced_process needs the qubit layout A_I, A_O, B_I, B_O");
  if (other.rows() != 4 || other.cols() != 4) throw ShapeError("reduced_process: operator must be 4x4");
  const ComplexMatrix id = ComplexMatrix::Identity(4, 4);
  if (keep == Party::Alice)
    return partial_trace(ComplexMatrix(w.matrix() * kron(id, other)), layout, {labels::kAliceIn, labels::kAliceOut});
  return partial_trace(ComplexMatrix(w.matrix() * kron(other, id)), layout, {labels::kBobIn, labels::kBobOut});
}

Real alice_guess_probability(const JointDistribution& dist, Real alpha) {
  Real s = 0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      s += input_probability(a, alpha) * input_probability(b, alpha) * dist.alice_marginal(b, a, b, 0);
  return s;
}

Real bob_guess_probability(const JointDistribution& dist, Real alpha) {
  Real s = 0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      s += input_probability(a, alpha) * input_probability(b, alpha) * dist.bob_marginal(a, a, b, 1);
  return s;
}

Real success_probability(const JointDistribution& dist, const GameSpec& spec) {
  return spec.beta * alice_guess_probability(dist, spec.alpha) +
         (1.0 - spec.beta) * bob_guess_probability(dist, spec.alpha);
}

Real causal_bound(const GameSpec& spec) {
  spec.check();
  return spec.beta + spec.alpha * (1.0 - spec.beta);
}

Real analytic_max_dbit(Real beta) {
  if (!(beta >= 0.5 && beta < 1.0)) throw DomainError("beta must lie in [1/2, 1)");
  return 0.5 * (1.0 + std::sqrt(1.0 - 2.0 * beta + 2.0 * beta * beta));
}

SignalingProfile signaling_profile(const JointDistribution& dist) {
  SignalingProfile out;
  for (int a = 0; a < 2; ++a)
    for (int x = 0; x < 2; ++x) {
      Real lo = 2, hi = -1;
      for (int b = 0; b < 2; ++b)
        for (int bp = 0; bp < 2; ++bp) {
          const Real v = dist.alice_marginal(x, a, b, bp);
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      out.bob_to_alice = std::max(out.bob_to_alice, hi - lo);
    }
  for (int b = 0; b < 2; ++b)
    for (int bp = 0; bp < 2; ++bp)
      for (int y = 0; y < 2; ++y) {
        const Real d = std::abs(dist.bob_marginal(y, 0, b, bp) - dist.bob_marginal(y, 1, b, bp));
        out.alice_to_bob = std::max(out.alice_to_bob, d);
      }
  return out;
}

std::string format_csv_number(Real v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v == 0.0 ? 0.0 : v);
  return buf;
}

void write_csv(std::ostream& os, const JointDistribution& dist) {
  os << "x,y,a,b,bprime,p\n";
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (int bp = 0; bp < 2; ++bp)
            os << x << ',' << y << ',' << a << ',' << b << ',' << bp << ',' << format_csv_number(dist(x, y, a, b, bp))
               << '\n';
}

JointDistribution read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw FormatError("distribution CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,y,a,b,bprime,p") throw FormatError("distribution CSV header must be x,y,a,b,bprime,p");
  JointDistribution dist;
  std::array<bool, JointDistribution::kEntries> seen{};
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 6) throw FormatError("distribution CSV row needs 6 columns: " + line);
    int bits[5];
    for (int k = 0; k < 5; ++k) {
      if (cells[static_cast<std::size_t>(k)] != "0" && cells[static_cast<std::size_t>(k)] != "1")
        throw FormatError("distribution CSV bit columns must be 0 or 1: " + line);
      bits[k] = cells[static_cast<std::size_t>(k)] == "1";
    }
    Real p;
    try {
      std::size_t used = 0;
      p = std::stod(cells[5], &used);
      if (used != cells[5].size()) throw FormatError("bad probability: " + line);
    } catch (const std::logic_error&) {
      throw FormatError("bad probability: " + line);
    }
    const auto idx = JointDistribution::index(bits[0], bits[1], bits[2], bits[3], bits[4]);
    if (seen[idx]) throw FormatError("duplicate distribution row: " + line);
    seen[idx] = true;
    dist.values()[idx] = p;
  }
  for (bool s : seen)
    if (!s) throw FormatError("distribution CSV must list all 32 rows");
  return dist;
}

}  // namespace pmlab
