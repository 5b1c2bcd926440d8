#include "pmlab/process.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace pmlab {

namespace {

constexpr std::size_t kAliceIn = 0, kAliceOut = 1, kBobIn = 2, kBobOut = 3;

void require_bipartite(const SubsystemLayout& layout) {
  if (layout != SubsystemLayout::bipartite_qubits())
    throw UnsupportedDimensionError("process validation needs the qubit layout A_I, A_O, B_I, B_O");
}

ComplexMatrix pauli_term(const std::string& label, Real weight) {
  return weight * pauli_matrix(PauliString::from_label(label));
}

ComplexMatrix identity16() { return ComplexMatrix::Identity(16, 16); }

}  // namespace

bool is_allowed_process_term(const PauliString& t) {
  if (t.size() != 4) return false;
  const bool ai = t[kAliceIn] != 0, ao = t[kAliceOut] != 0, bi = t[kBobIn] != 0, bo = t[kBobOut] != 0;
  if (ao && bo) return false;
  if (ao) return bi;   // A_O B_I, A_I A_O B_I
  if (bo) return ai;   // A_I B_O, A_I B_I B_O
  return true;         // identity, A_I, B_I, A_I B_I
}

ValidityReport validate(const ComplexMatrix& w, const SubsystemLayout& layout) {
  require_bipartite(layout);
  require_layout(w, layout);

  ValidityReport report;
  report.hermiticity_defect = hermiticity_defect(w);
  report.hermitian = report.hermiticity_defect <= kHermitianTolerance;
  report.trace = w.trace().real();
  if (!report.hermitian) {
    std::ostringstream os;
    os << "not Hermitian (max |W - W^dagger| = " << report.hermiticity_defect << ")";
    report.reasons.push_back(os.str());
    report.min_eigenvalue = std::nan("");
    return report;
  }

  report.min_eigenvalue = min_eigenvalue(w);
  if (report.min_eigenvalue < kPsdTolerance) {
    std::ostringstream os;
    os << "not positive semidefinite (min eigenvalue " << report.min_eigenvalue << ")";
    report.reasons.push_back(os.str());
  }

  const Real expected_trace = static_cast<Real>(layout[kAliceOut].dim * layout[kBobOut].dim);
  if (std::abs(report.trace - expected_trace) > kTraceTolerance) {
    std::ostringstream os;
    os << "trace " << report.trace << " differs from " << expected_trace;
    report.reasons.push_back(os.str());
  }

  for (const auto& [term, c] : pauli_decompose(w, layout, 0.0)) {
    if (!is_allowed_process_term(term) && std::abs(c) > kForbiddenTermTolerance)
      report.forbidden_terms.emplace_back(term, c);
  }
  if (!report.forbidden_terms.empty()) {
    std::ostringstream os;
    os << "forbidden Pauli terms:";
    for (const auto& [term, c] : report.forbidden_terms) os << ' ' << term.label() << '=' << c;
    report.reasons.push_back(os.str());
  }

  report.is_valid = report.reasons.empty();
  return report;
}

ProcessMatrix ProcessMatrix::from_matrix(ComplexMatrix w, SubsystemLayout layout, std::string provenance) {
  const ValidityReport report = validate(w, layout);
  if (!report.is_valid) {
    std::string msg = "invalid process matrix (" + provenance + "):";
    for (const auto& r : report.reasons) msg += " " + r + ";";
    throw ValidationError(msg);
  }
  return ProcessMatrix(std::move(w), std::move(layout), std::move(provenance));
}

SignalingWeights w_beta_weights(Real beta) {
  if (!(beta >= 0.5 && beta < 1.0)) throw DomainError("beta must lie in [1/2, 1)");
  const Real norm = std::sqrt(1.0 - 2.0 * beta + 2.0 * beta * beta);
  return {(1.0 - beta) / norm, beta / norm};
}

ProcessMatrix w_beta(Real beta) {
  const SignalingWeights f = w_beta_weights(beta);
  ComplexMatrix w = 0.25 * (identity16() + pauli_term("IZZI", f.a_to_b) + pauli_term("ZIXZ", f.b_to_a));
  char buf[32];
  const auto end = std::to_chars(buf, buf + sizeof buf, beta).ptr;
  return ProcessMatrix::from_matrix(std::move(w), SubsystemLayout::bipartite_qubits(),
                                    "w_beta@" + std::string(buf, end));
}

ProcessMatrix w_ocb() {
  const Real h = 1.0 / std::sqrt(2.0);
  ComplexMatrix w = 0.25 * (identity16() + pauli_term("IZZI", h) + pauli_term("ZIXZ", h));
  return ProcessMatrix::from_matrix(std::move(w), SubsystemLayout::bipartite_qubits(), "w_ocb");
}

const std::vector<PauliString>& reprepare_family_terms() {
  static const std::vector<PauliString> terms = {
      PauliString::from_label("IZZI"), PauliString::from_label("ZIXZ"), PauliString::from_label("ZIYZ"),
      PauliString::from_label("ZIZZ"), PauliString::from_label("ZIII"), PauliString::from_label("IIZI"),
  };
  return terms;
}

std::optional<ProcessMatrix> ProcessCandidate::process(std::string provenance) const {
  if (!report.is_valid) return std::nullopt;
  return ProcessMatrix::from_matrix(matrix, SubsystemLayout::bipartite_qubits(), std::move(provenance));
}

ProcessCandidate reprepare_family_process(const ReprepareCoefficients& c) {
  const Real weights[] = {c.a_to_b, c.b_to_a_x, c.b_to_a_y, c.b_to_a_z, c.alice_bias, c.bob_bias};
  PauliCoefficients<Real> coeffs{{PauliString::from_label("IIII"), 1.0}};
  const auto& terms = reprepare_family_terms();
  for (std::size_t i = 0; i < terms.size(); ++i)
    if (weights[i] != 0.0) coeffs.emplace(terms[i], weights[i]);
  ProcessCandidate out;
  out.matrix = 0.25 * pauli_compose(coeffs, SubsystemLayout::bipartite_qubits());
  out.report = validate(out.matrix);
  return out;
}

Real reprepare_family_min_eigenvalue(const ReprepareCoefficients& c) {
  Real lo = std::numeric_limits<Real>::infinity();
  for (int s_ai : {1, -1})
    for (int s_ao : {1, -1})
      for (int s_bo : {1, -1}) {
        const Real sx = s_ai * s_bo * c.b_to_a_x;
        const Real sy = s_ai * s_bo * c.b_to_a_y;
        const Real sz = s_ao * c.a_to_b + s_ai * s_bo * c.b_to_a_z + c.bob_bias;
        lo = std::min(lo, s_ai * c.alice_bias - std::sqrt(sx * sx + sy * sy + sz * sz));
      }
  return 0.25 * (1.0 + lo);
}

ProcessMatrix causal_mixture(const ProcessMatrix& first, const ProcessMatrix& second, Real q) {
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("mixing weight q must lie in [0, 1]");
  if (first.layout() != second.layout()) throw ShapeError("causal_mixture: layouts differ");
  if (q == 0.0) return second;
  if (q == 1.0) return first;
  std::ostringstream tag;
  tag.precision(17);
  tag << "mix(" << q << ";" << first.provenance() << "," << second.provenance() << ")";
  return ProcessMatrix::from_matrix(q * first.matrix() + (1.0 - q) * second.matrix(), first.layout(), tag.str());
}

ProcessMatrix ordered_identity_channel_process(Direction direction) {
  // |1>><<1| on two qubits = 1/2 (II + XX - YY + ZZ)
  ComplexMatrix w;
  std::string tag;
  if (direction == Direction::AToB) {
    w = 0.25 * (identity16() + pauli_term("IXXI", 1) - pauli_term("IYYI", 1) + pauli_term("IZZI", 1));
    tag = "ordered_ab";
  } else {
    w = 0.25 * (identity16() + pauli_term("XIIX", 1) - pauli_term("YIIY", 1) + pauli_term("ZIIZ", 1));
    tag = "ordered_ba";
  }
  return ProcessMatrix::from_matrix(std::move(w), SubsystemLayout::bipartite_qubits(), tag);
}

ComplexMatrix witness_s() { return 0.25 * (identity16() - pauli_term("IZZI", 1) - pauli_term("ZIXZ", 1)); }

Real witness_value(const ComplexMatrix& s, const ProcessMatrix& w) {
  if (s.rows() != w.matrix().rows() || s.cols() != w.matrix().cols())
    throw ShapeError("witness_value: witness and process dimensions differ");
  const Complex v = (s * w.matrix()).trace();
  if (std::abs(v.imag()) > 1e-10) throw NumericalIntegrityError("witness_value: Tr[S W] is not real");
  return v.real();
}

ProcessMatrix identity_process() {
  return ProcessMatrix::from_matrix(0.25 * identity16(), SubsystemLayout::bipartite_qubits(), "identity");
}

}  // namespace pmlab
