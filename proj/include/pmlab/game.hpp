#pragma once

#include <array>
#include <iosfwd>
#include <string>

#include "pmlab/instruments.hpp"
#include "pmlab/process.hpp"

namespace pmlab {

/// Biased game: p(a=0) = p(b=0) = alpha, p(b'=0) = beta.
struct GameSpec {
  Real alpha = 0.5;
  Real beta = 0.5;

  /// Throws DomainError unless 1/2 <= alpha, beta < 1.
  void check() const;
};

/// p(x, y | a, b, b') for all 32 bit assignments.
class JointDistribution {
 public:
  static constexpr std::size_t kEntries = 32;

  static constexpr std::size_t index(int x, int y, int a, int b, int bprime) {
    return static_cast<std::size_t>((((x * 2 + y) * 2 + a) * 2 + b) * 2 + bprime);
  }

  Real operator()(int x, int y, int a, int b, int bprime) const { return p_[index(x, y, a, b, bprime)]; }
  Real& operator()(int x, int y, int a, int b, int bprime) { return p_[index(x, y, a, b, bprime)]; }

  const std::array<Real, kEntries>& values() const { return p_; }
  std::array<Real, kEntries>& values() { return p_; }

  /// Max over settings of |sum_{x,y} p - 1|.
  Real normalization_defect() const;
  /// Entries in [-1e-12, 1 + 1e-12] and every setting sums to 1 within 1e-9.
  bool is_normalized() const;

  /// Alice's marginal p(x | a, b, b').
  Real alice_marginal(int x, int a, int b, int bprime) const;
  /// Bob's marginal p(y | a, b, b').
  Real bob_marginal(int y, int a, int b, int bprime) const;

 private:
  std::array<Real, kEntries> p_{};
};

using CorrelationTable = JointDistribution;

/// Generalized Born rule Tr[W (M_A (x) M_B)]. Throws ShapeError on mismatched
/// dimensions and NumericalIntegrityError when the trace has an imaginary part
/// above 1e-10.
Real born(const ComplexMatrix& w, const CJOperator& alice, const CJOperator& bob);
Real born(const ProcessMatrix& w, const CJOperator& alice, const CJOperator& bob);

/// Validates every conditioning instrument, then evaluates all 32 entries.
JointDistribution joint_distribution(const ProcessMatrix& w, const AliceInstruments& alice, const BobInstruments& bob);
/// Same without the instrument checks, for callers that already guarantee them.
JointDistribution joint_distribution_unchecked(const ComplexMatrix& w, const AliceInstruments& alice,
                                               const BobInstruments& bob);

/// The process seen by one party once the other's operation `other` is fixed:
/// Tr_B[W (1 (x) other)] for keep = Alice, Tr_A[W (other (x) 1)] for Bob.
ComplexMatrix reduced_process(const ProcessMatrix& w, Party keep, const ComplexMatrix& other);

/// p(x = b | b' = 0) averaged over the alpha-biased inputs.
Real alice_guess_probability(const JointDistribution& dist, Real alpha);
/// p(y = a | b' = 1) averaged over the alpha-biased inputs.
Real bob_guess_probability(const JointDistribution& dist, Real alpha);

/// beta p(x=b | b'=0) + (1 - beta) p(y=a | b'=1).
Real success_probability(const JointDistribution& dist, const GameSpec& spec);

/// beta + alpha (1 - beta).
Real causal_bound(const GameSpec& spec);

/// 1/2 (1 + sqrt(1 - 2 beta + 2 beta^2)).
Real analytic_max_dbit(Real beta);

struct SignalingProfile {
  Real bob_to_alice = 0;  // largest change of p(x|a,...) across Bob's settings
  Real alice_to_bob = 0;  // largest change of p(y|...,b,b') across Alice's input
};

SignalingProfile signaling_profile(const JointDistribution& dist);

/// CSV with header x,y,a,b,bprime,p and 9 significant digits.
void write_csv(std::ostream& os, const JointDistribution& dist);
JointDistribution read_csv(std::istream& is);

/// printf("%.9g") formatting shared by every CSV writer.
std::string format_csv_number(Real v);

}  // namespace pmlab
