#include "pmlab/instruments.hpp"

#include <array>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

#include "pmlab/pauli.hpp"

namespace pmlab {

namespace {

int sign(int bit) { return (bit & 1) ? -1 : 1; }

void require_bit(int v, const char* name) {
  if (v != 0 && v != 1) throw DomainError(std::string(name) + " must be 0 or 1");
}

ComplexMatrix id2() { return ComplexMatrix::Identity(2, 2); }

ComplexMatrix bloch(const Vector3& v) {
  return v.x() * pauli_single(1) + v.y() * pauli_single(2) + v.z() * pauli_single(3);
}

// sigma_i (x) sigma_j for i, j in 0..3
const std::array<ComplexMatrix, 16>& pauli_pairs() {
  static const std::array<ComplexMatrix, 16> table = [] {
    std::array<ComplexMatrix, 16> out;
    for (std::uint8_t i = 0; i < 4; ++i)
      for (std::uint8_t j = 0; j < 4; ++j) out[4u * i + j] = kron(pauli_single(i), pauli_single(j));
    return out;
  }();
  return table;
}

ComplexMatrix correlation_operator(const Matrix3& t) {
  ComplexMatrix out = ComplexMatrix::Zero(4, 4);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (t(i, j) != 0.0) out += t(i, j) * pauli_pairs()[static_cast<std::size_t>(4 * (i + 1) + j + 1)];
  return out;
}

bool is_unit(const Vector3& v) { return std::abs(v.norm() - 1.0) <= kUnitTolerance; }

void require_density(const ComplexMatrix& rho) {
  if (rho.rows() != 2 || rho.cols() != 2) throw DomainError("rho must be a 2x2 density matrix");
  if (!is_hermitian(rho)) throw DomainError("rho is not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > 1e-10 || std::abs(rho.trace().imag()) > 1e-10)
    throw DomainError("rho does not have unit trace");
  if (min_eigenvalue(rho) < kPsdTolerance) throw DomainError("rho is not positive semidefinite");
}

GuardedCJ guard(ComplexMatrix m, Party party, std::string label) {
  GuardedCJ out;
  out.min_eigenvalue = min_eigenvalue(m);
  if (out.min_eigenvalue >= kPsdTolerance) out.op = CJOperator{std::move(m), party, std::move(label)};
  return out;
}

ComplexMatrix observable_cj(int outcome, int input, const ObservableSpec& spec) {
  const int f = spec.encoding(outcome, input);
  const auto& pairs = pauli_pairs();
  ComplexMatrix m = ComplexMatrix::Identity(4, 4);
  for (int k = 0; k < 3; ++k) {
    m += (sign(outcome) * spec.input(k)) * pairs[static_cast<std::size_t>(4 * (k + 1))];
    m += (sign(f) * spec.output(k)) * pairs[static_cast<std::size_t>(k + 1)];
  }
  m += sign(outcome ^ f) * correlation_operator(spec.correlation);
  return m / 4.0;
}

std::string op_label(const char* prefix, std::initializer_list<int> bits) {
  std::string s = prefix;
  s += '(';
  bool first = true;
  for (int b : bits) {
    if (!first) s += ',';
    s += std::to_string(b);
    first = false;
  }
  return s + ')';
}

// key -> numbers
std::map<std::string, std::vector<double>> parse_fields(const std::string& text) {
  std::map<std::string, std::vector<double>> fields;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    std::vector<double> values;
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw FormatError("bad number '" + tok + "'");
      } catch (const std::logic_error&) {
        throw FormatError("bad number '" + tok + "' in field '" + key + "'");
      }
    }
    fields[key] = std::move(values);
  }
  return fields;
}

const std::vector<double>& field(const std::map<std::string, std::vector<double>>& fields, const std::string& key,
                                 std::size_t count) {
  auto it = fields.find(key);
  if (it == fields.end()) throw FormatError("missing field '" + key + "'");
  if (it->second.size() != count)
    throw FormatError("field '" + key + "' needs " + std::to_string(count) + " values");
  return it->second;
}

void write_observable(std::ostream& os, const std::string& prefix, const ObservableSpec& spec) {
  os << std::setprecision(17);
  os << prefix << "input " << spec.input.x() << ' ' << spec.input.y() << ' ' << spec.input.z() << '\n';
  os << prefix << "output " << spec.output.x() << ' ' << spec.output.y() << ' ' << spec.output.z() << '\n';
  os << prefix << "correlation";
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) os << ' ' << spec.correlation(i, j);
  os << '\n' << prefix << "encoding";
  for (int b : spec.encoding.bits()) os << ' ' << b;
  os << '\n';
}

ObservableSpec read_observable(const std::map<std::string, std::vector<double>>& fields, const std::string& prefix) {
  ObservableSpec spec;
  const auto& in = field(fields, prefix + "input", 3);
  const auto& out = field(fields, prefix + "output", 3);
  const auto& corr = field(fields, prefix + "correlation", 9);
  const auto& enc = field(fields, prefix + "encoding", 4);
  spec.input = Vector3(in[0], in[1], in[2]);
  spec.output = Vector3(out[0], out[1], out[2]);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) spec.correlation(i, j) = corr[static_cast<std::size_t>(3 * i + j)];
  std::array<int, 4> bits{};
  for (std::size_t k = 0; k < 4; ++k) {
    if (enc[k] != 0.0 && enc[k] != 1.0) throw FormatError("encoding entries must be 0 or 1");
    bits[k] = static_cast<int>(enc[k]);
  }
  spec.encoding = EncodingTable(bits);
  return spec;
}

}  // namespace

EncodingTable EncodingTable::from_ordinal(int ordinal) {
  if (ordinal < 0 || ordinal > 15) throw DomainError("encoding ordinal must lie in [0, 15]");
  return EncodingTable({(ordinal >> 3) & 1, (ordinal >> 2) & 1, (ordinal >> 1) & 1, ordinal & 1});
}

bool ObservableSpec::well_formed() const {
  const Real frob = correlation.norm();
  return is_unit(input) && is_unit(output) && (frob == 0.0 || std::abs(frob - 1.0) <= kUnitTolerance);
}

InstrumentReport instrument_validate(const Instrument& instrument) {
  InstrumentReport report;
  const int din = instrument.input_dim, dout = instrument.output_dim;
  ComplexMatrix sum = ComplexMatrix::Zero(din * dout, din * dout);
  bool positive = true;
  bool shaped = true;
  for (const auto& e : instrument.elements) {
    if (e.matrix.rows() != din * dout || e.matrix.cols() != din * dout) {
      shaped = false;
      report.element_min_eigenvalues.push_back(std::nan(""));
      continue;
    }
    Real lo = std::nan("");
    if (is_hermitian(e.matrix)) lo = min_eigenvalue(e.matrix);
    report.element_min_eigenvalues.push_back(lo);
    if (!(lo >= kPsdTolerance)) positive = false;
    sum += e.matrix;
  }
  if (!shaped) {
    report.tp_residual = std::numeric_limits<Real>::infinity();
    return report;
  }
  const SubsystemLayout layout({{"in", din}, {"out", dout}});
  const ComplexMatrix reduced = partial_trace(sum, layout, {"in"});
  report.tp_residual = (reduced - ComplexMatrix::Identity(din, din)).cwiseAbs().maxCoeff();
  report.is_valid = positive && report.tp_residual <= kTracePreservingTolerance;
  return report;
}

std::string to_record(const ObservableSpec& spec) {
  std::ostringstream os;
  write_observable(os, "", spec);
  return os.str();
}

std::string to_record(const BobSpec& spec) {
  std::ostringstream os;
  os << std::setprecision(17) << "guess_axis " << spec.guess_axis.x() << ' ' << spec.guess_axis.y() << ' '
     << spec.guess_axis.z() << '\n';
  write_observable(os, "relay_", spec.relay);
  return os.str();
}

ObservableSpec parse_observable_record(const std::string& text) { return read_observable(parse_fields(text), ""); }

BobSpec parse_bob_record(const std::string& text) {
  const auto fields = parse_fields(text);
  BobSpec spec;
  const auto& g = field(fields, "guess_axis", 3);
  spec.guess_axis = Vector3(g[0], g[1], g[2]);
  spec.relay = read_observable(fields, "relay_");
  return spec;
}

ComplexMatrix maximally_mixed_qubit() { return id2() / 2.0; }

CJOperator alice_z(int x, int a) {
  require_bit(x, "x");
  require_bit(a, "a");
  const ComplexMatrix z = pauli_single(3);
  ComplexMatrix m = kron(ComplexMatrix(id2() + sign(x) * z), ComplexMatrix(id2() + sign(a) * z)) / 4.0;
  return {std::move(m), Party::Alice, op_label("alice_z", {x, a})};
}

CJOperator bob_branch(int y, int b, int bprime, const Vector3& t, const ComplexMatrix& rho) {
  require_bit(y, "y");
  require_bit(b, "b");
  require_bit(bprime, "b'");
  if (!is_unit(t)) throw DomainError("decoding axis t must be a unit vector");
  require_density(rho);
  const ComplexMatrix z = pauli_single(3);
  ComplexMatrix m;
  if (bprime == 1) {
    m = kron(ComplexMatrix(id2() + sign(y) * z), rho) / 2.0;
  } else {
    m = kron(ComplexMatrix(id2() + sign(y) * bloch(t)), ComplexMatrix(id2() + sign(b ^ y) * z)) / 4.0;
  }
  return {std::move(m), Party::Bob, op_label("bob_branch", {y, b, bprime})};
}

GuardedCJ alice_general(int x, int a, const ObservableSpec& spec) {
  require_bit(x, "x");
  require_bit(a, "a");
  if (!spec.well_formed()) throw DomainError("observable spec needs unit vectors and a unit-norm correlation tensor");
  return guard(observable_cj(x, a, spec), Party::Alice, op_label("alice_general", {x, a}));
}

GuardedCJ bob_general(int y, int b, int bprime, const BobSpec& spec, const ComplexMatrix& rho) {
  require_bit(y, "y");
  require_bit(b, "b");
  require_bit(bprime, "b'");
  if (!is_unit(spec.guess_axis) || !spec.relay.well_formed())
    throw DomainError("Bob spec needs unit vectors and a unit-norm correlation tensor");
  require_density(rho);
  ComplexMatrix m;
  if (bprime == 1) {
    m = kron(ComplexMatrix(id2() + sign(y) * bloch(spec.guess_axis)), rho) / 2.0;
  } else {
    m = observable_cj(y, b, spec.relay);
  }
  return guard(std::move(m), Party::Bob, op_label("bob_general", {y, b, bprime}));
}

Instrument AliceInstruments::instrument(int a) const {
  require_bit(a, "a");
  return {{ops[static_cast<std::size_t>(a)][0], ops[static_cast<std::size_t>(a)][1]}, 2, 2};
}

Instrument BobInstruments::instrument(int b, int bprime) const {
  require_bit(b, "b");
  require_bit(bprime, "b'");
  const auto& pair = ops[static_cast<std::size_t>(b)][static_cast<std::size_t>(bprime)];
  return {{pair[0], pair[1]}, 2, 2};
}

AliceInstruments alice_z_instruments() {
  AliceInstruments out;
  for (int a = 0; a < 2; ++a)
    for (int x = 0; x < 2; ++x) out.ops[static_cast<std::size_t>(a)][static_cast<std::size_t>(x)] = alice_z(x, a);
  return out;
}

BobInstruments bob_branch_instruments(const Vector3& t, const ComplexMatrix& rho) {
  BobInstruments out;
  for (int b = 0; b < 2; ++b)
    for (int bp = 0; bp < 2; ++bp)
      for (int y = 0; y < 2; ++y)
        out.ops[static_cast<std::size_t>(b)][static_cast<std::size_t>(bp)][static_cast<std::size_t>(y)] =
            bob_branch(y, b, bp, t, rho);
  return out;
}

std::optional<AliceInstruments> alice_instruments(const ObservableSpec& spec) {
  AliceInstruments out;
  for (int a = 0; a < 2; ++a)
    for (int x = 0; x < 2; ++x) {
      GuardedCJ g = alice_general(x, a, spec);
      if (!g.op) return std::nullopt;
      out.ops[static_cast<std::size_t>(a)][static_cast<std::size_t>(x)] = std::move(*g.op);
    }
  return out;
}

std::optional<BobInstruments> bob_instruments(const BobSpec& spec, const ComplexMatrix& rho) {
  BobInstruments out;
  for (int b = 0; b < 2; ++b)
    for (int bp = 0; bp < 2; ++bp)
      for (int y = 0; y < 2; ++y) {
        if (b == 1 && bp == 1) {  // the guessing branch ignores b
          out.ops[1][1][static_cast<std::size_t>(y)] = out.ops[0][1][static_cast<std::size_t>(y)];
          out.ops[1][1][static_cast<std::size_t>(y)].label = op_label("bob_general", {y, 1, 1});
          continue;
        }
        GuardedCJ g = bob_general(y, b, bp, spec, rho);
        if (!g.op) return std::nullopt;
        out.ops[static_cast<std::size_t>(b)][static_cast<std::size_t>(bp)][static_cast<std::size_t>(y)] =
            std::move(*g.op);
      }
  return out;
}

}  // namespace pmlab
