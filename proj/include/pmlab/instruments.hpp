#pragma once

// Choi-Jamiolkowski operators for the parties' local operations.
//
// Alice acts on A_I (x) A_O, Bob on B_I (x) B_O. An element M of an instrument is
// completely positive iff M >= 0; the outcome sum is trace preserving iff
// Tr_out sum M = 1_in.

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "pmlab/tensor.hpp"

namespace pmlab {

using Vector3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;

inline constexpr Real kUnitTolerance = 1e-10;
inline constexpr Real kTracePreservingTolerance = 1e-10;

enum class Party { Alice, Bob };

struct CJOperator {
  ComplexMatrix matrix;
  Party party = Party::Alice;
  std::string label;
};

/// One CP element per outcome; input/output are the local dimensions.
struct Instrument {
  std::vector<CJOperator> elements;
  int input_dim = 2;
  int output_dim = 2;
};

struct InstrumentReport {
  bool is_valid = false;
  std::vector<Real> element_min_eigenvalues;
  Real tp_residual = 0;  // max entry of |Tr_out sum_i M_i - 1|
};

InstrumentReport instrument_validate(const Instrument& instrument);

/// Binary table over (outcome or message bit, input bit): value(first, second).
class EncodingTable {
 public:
  constexpr EncodingTable() = default;
  constexpr explicit EncodingTable(std::array<int, 4> bits) : bits_(bits) {}

  /// F(x, a) = a.
  static constexpr EncodingTable copy_input() { return EncodingTable({0, 1, 0, 1}); }
  /// G(y, b) = b xor y.
  static constexpr EncodingTable xor_input() { return EncodingTable({0, 1, 1, 0}); }
  static EncodingTable from_ordinal(int ordinal);

  int operator()(int outcome, int input) const { return bits_[static_cast<std::size_t>(2 * outcome + input)] & 1; }
  const std::array<int, 4>& bits() const { return bits_; }
  bool depends_only_on_input() const { return bits_[0] == bits_[2] && bits_[1] == bits_[3]; }

  bool operator==(const EncodingTable&) const = default;

 private:
  std::array<int, 4> bits_{0, 1, 0, 1};
};

/// Traceless binary observables of one measure-and-encode operation:
///   1/(2 d_out) [1 + (-1)^o (input|sigma) + (-1)^F (output|sigma)
///                 + (-1)^{o xor F} (correlation|sigma (x) sigma)].
struct ObservableSpec {
  Vector3 input = Vector3::UnitZ();
  Vector3 output = Vector3::UnitZ();
  Matrix3 correlation = Vector3::UnitZ() * Vector3::UnitZ().transpose();
  EncodingTable encoding = EncodingTable::copy_input();

  /// Unit Bloch vectors and, unless zero, a unit-Frobenius correlation tensor.
  bool well_formed() const;
};

/// Bob's parameters: `guess_axis` is measured when he has to guess Alice's bit
/// (b' = 1); `relay` is the operation used when Alice guesses (b' = 0).
struct BobSpec {
  Vector3 guess_axis = Vector3::UnitZ();
  ObservableSpec relay{Vector3::UnitX(), Vector3::UnitZ(), Vector3::UnitX() * Vector3::UnitZ().transpose(),
                       EncodingTable::xor_input()};
};

std::string to_record(const ObservableSpec& spec);
std::string to_record(const BobSpec& spec);
ObservableSpec parse_observable_record(const std::string& text);
BobSpec parse_bob_record(const std::string& text);

/// A CJ matrix produced behind the positivity guard.
struct GuardedCJ {
  std::optional<CJOperator> op;  // empty when rejected
  Real min_eigenvalue = 0;
};

/// 1/4 [1 + (-1)^x sz]^{A_I} (x) [1 + (-1)^a sz]^{A_O}.
CJOperator alice_z(int x, int a);

/// b' = 1: 1/2 [1 + (-1)^y sz]^{B_I} (x) rho;
/// b' = 0: 1/4 [1 + (-1)^y t.sigma]^{B_I} (x) [1 + (-1)^{b xor y} sz]^{B_O}.
/// Throws DomainError for non-unit t or a rho that is not a density matrix.
CJOperator bob_branch(int y, int b, int bprime, const Vector3& t, const ComplexMatrix& rho);

GuardedCJ alice_general(int x, int a, const ObservableSpec& spec);
GuardedCJ bob_general(int y, int b, int bprime, const BobSpec& spec, const ComplexMatrix& rho);

/// 1/2 on a qubit.
ComplexMatrix maximally_mixed_qubit();

/// Alice's operations indexed [a][x].
struct AliceInstruments {
  std::array<std::array<CJOperator, 2>, 2> ops;

  Instrument instrument(int a) const;
};

/// Bob's operations indexed [b][b'][y].
struct BobInstruments {
  std::array<std::array<std::array<CJOperator, 2>, 2>, 2> ops;

  Instrument instrument(int b, int bprime) const;
};

/// z-basis measure-and-reprepare for Alice.
AliceInstruments alice_z_instruments();
/// Bob's branch instrument with decoding axis t.
BobInstruments bob_branch_instruments(const Vector3& t = Vector3::UnitX(), const ComplexMatrix& rho = maximally_mixed_qubit());

/// nullopt when any element fails the positivity guard.
std::optional<AliceInstruments> alice_instruments(const ObservableSpec& spec);
std::optional<BobInstruments> bob_instruments(const BobSpec& spec, const ComplexMatrix& rho = maximally_mixed_qubit());

}  // namespace pmlab
