#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pmlab/pauli.hpp"
#include "pmlab/tensor.hpp"

namespace pmlab {

/// Largest |Pauli coefficient| tolerated on a term outside the allowed set.
inline constexpr Real kForbiddenTermTolerance = 1e-10;
inline constexpr Real kTraceTolerance = 1e-9;

struct ValidityReport {
  bool is_valid = false;
  bool hermitian = false;
  Real hermiticity_defect = 0;
  Real min_eigenvalue = 0;
  Real trace = 0;
  std::vector<std::pair<PauliString, Real>> forbidden_terms;
  std::vector<std::string> reasons;
};

/// True when a Pauli string on (A_I, A_O, B_I, B_O) may appear in a valid
/// bipartite process: identity, A_I, B_I, A_I B_I, A_O B_I, A_I A_O B_I,
/// A_I B_O, A_I B_I B_O.
bool is_allowed_process_term(const PauliString& t);

/// Checks Hermiticity, positivity, trace d_AO * d_BO and the allowed Pauli
/// support. Never throws for a bad W; every failed condition lands in
/// `reasons`. Throws ShapeError / UnsupportedDimensionError for a wrong layout.
ValidityReport validate(const ComplexMatrix& w, const SubsystemLayout& layout = SubsystemLayout::bipartite_qubits());

/// A validated process matrix with a provenance tag such as "w_beta@0.75".
class ProcessMatrix {
 public:
  /// Throws ValidationError listing the report reasons when `w` is invalid.
  static ProcessMatrix from_matrix(ComplexMatrix w, SubsystemLayout layout = SubsystemLayout::bipartite_qubits(),
                                   std::string provenance = "custom");

  const ComplexMatrix& matrix() const { return matrix_; }
  const SubsystemLayout& layout() const { return layout_; }
  const std::string& provenance() const { return provenance_; }

 private:
  ProcessMatrix(ComplexMatrix w, SubsystemLayout layout, std::string provenance)
      : matrix_(std::move(w)), layout_(std::move(layout)), provenance_(std::move(provenance)) {}

  ComplexMatrix matrix_;
  SubsystemLayout layout_;
  std::string provenance_;
};

/// Weights of the two signaling terms of the W_beta family; they satisfy
/// a_to_b^2 + b_to_a^2 = 1.
struct SignalingWeights {
  Real a_to_b = 0;  // on sz^{A_O} sz^{B_I}
  Real b_to_a = 0;  // on sz^{A_I} sx^{B_I} sz^{B_O}
};

SignalingWeights w_beta_weights(Real beta);

/// 1/4 [1 + a_to_b sz^{A_O} sz^{B_I} + b_to_a sz^{A_I} sx^{B_I} sz^{B_O}],
/// defined for 1/2 <= beta < 1.
ProcessMatrix w_beta(Real beta);

/// The inseparable process with both signaling weights 1/sqrt(2).
ProcessMatrix w_ocb();

/// Coefficients of the qubit processes that a z-basis measure-and-reprepare
/// strategy is sensitive to.
struct ReprepareCoefficients {
  Real a_to_b = 0;     // sz^{A_O} sz^{B_I}
  Real b_to_a_x = 0;   // sz^{A_I} sx^{B_I} sz^{B_O}
  Real b_to_a_y = 0;   // sz^{A_I} sy^{B_I} sz^{B_O}
  Real b_to_a_z = 0;   // sz^{A_I} sz^{B_I} sz^{B_O}
  Real alice_bias = 0; // sz^{A_I}
  Real bob_bias = 0;   // sz^{B_I}

  bool operator==(const ReprepareCoefficients&) const = default;
};

struct ProcessCandidate {
  ComplexMatrix matrix;
  ValidityReport report;

  /// The validated process, or nullopt when the report failed.
  std::optional<ProcessMatrix> process(std::string provenance = "reprepare-family") const;
};

/// Builds 1/4 [1 + sum of the six coefficient terms]. Invalid coefficient
/// choices come back with a failing report rather than an exception.
ProcessCandidate reprepare_family_process(const ReprepareCoefficients& c);

/// Smallest eigenvalue of the reprepare-family matrix. All six terms are
/// diagonal on A_I, A_O and B_O, so the matrix splits into eight 2x2 blocks.
Real reprepare_family_min_eigenvalue(const ReprepareCoefficients& c);

/// The six traceless Pauli operators of the reprepare family, in field order.
const std::vector<PauliString>& reprepare_family_terms();

/// q * first + (1 - q) * second.
ProcessMatrix causal_mixture(const ProcessMatrix& first, const ProcessMatrix& second, Real q);

enum class Direction { AToB, BToA };

/// Memoryless ordered process: maximally mixed input for the earlier party and
/// an identity channel from its output to the later party's input.
ProcessMatrix ordered_identity_channel_process(Direction direction);

/// 1/4 [1 - sz^{A_O} sz^{B_I} - sz^{A_I} sx^{B_I} sz^{B_O}].
ComplexMatrix witness_s();

/// Tr[S W]. Throws ShapeError on mismatched dimensions.
Real witness_value(const ComplexMatrix& s, const ProcessMatrix& w);

/// The identity process 1/4 on the default layout.
ProcessMatrix identity_process();

}  // namespace pmlab
