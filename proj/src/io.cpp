#include "pmlab/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace pmlab {

namespace {

using nlohmann::json;

constexpr const char* kDenseTag = "pmlab-dense";
constexpr const char* kPauliHeader = "# pmlab pauli";

std::string number17(Real v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

json vec_json(const Vector3& v) { return json::array({v.x(), v.y(), v.z()}); }

json matrix3_json(const Matrix3& m) {
  json rows = json::array();
  for (int i = 0; i < 3; ++i) rows.push_back(json::array({m(i, 0), m(i, 1), m(i, 2)}));
  return rows;
}

json observable_json(const ObservableSpec& s) {
  return {{"input", vec_json(s.input)},
          {"output", vec_json(s.output)},
          {"correlation", matrix3_json(s.correlation)},
          {"encoding", s.encoding.bits()}};
}

}  // namespace

MatrixRecord to_record(const ProcessMatrix& w) { return {w.matrix(), w.layout(), w.provenance()}; }

void write_dense(std::ostream& os, const MatrixRecord& record) {
  require_layout(record.matrix, record.layout);
  json doc;
  doc["format"] = kDenseTag;
  doc["dimension"] = record.matrix.rows();
  json layout = json::array();
  for (const auto& s : record.layout.subsystems()) layout.push_back(json::array({s.label, s.dim}));
  doc["layout"] = layout;
  doc["provenance"] = record.provenance;
  json entries = json::array();
  for (Eigen::Index i = 0; i < record.matrix.rows(); ++i)
    for (Eigen::Index j = 0; j < record.matrix.cols(); ++j)
      entries.push_back(json::array({record.matrix(i, j).real(), record.matrix(i, j).imag()}));
  doc["entries"] = entries;
  os << doc.dump(1) << '\n';
}

MatrixRecord read_dense(std::istream& is) {
  json doc;
  try {
    doc = json::parse(is);
  } catch (const json::exception& e) {
    throw FormatError(std::string("dense matrix file is not valid JSON: ") + e.what());
  }
  try {
    if (doc.value("format", std::string()) != kDenseTag) throw FormatError("dense matrix file lacks format tag");
    const auto dim = doc.at("dimension").get<Eigen::Index>();
    std::vector<Subsystem> subs;
    for (const auto& s : doc.at("layout")) {
      if (!s.is_array() || s.size() != 2) throw FormatError("layout entries are [label, dim] pairs");
      subs.push_back({s[0].get<std::string>(), s[1].get<int>()});
    }
    MatrixRecord out;
    out.layout = SubsystemLayout(subs);
    if (out.layout.total_dimension() != dim) throw FormatError("layout dimensions do not multiply to the dimension");
    out.provenance = doc.value("provenance", std::string("custom"));
    const auto& entries = doc.at("entries");
    if (!entries.is_array() || static_cast<Eigen::Index>(entries.size()) != dim * dim)
      throw FormatError("dense matrix needs dimension^2 entries");
    out.matrix.resize(dim, dim);
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < dim; ++i)
      for (Eigen::Index j = 0; j < dim; ++j, ++k) {
        const auto& e = entries[k];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
          throw FormatError("matrix entries are [real, imag] pairs");
        out.matrix(i, j) = Complex(e[0].get<Real>(), e[1].get<Real>());
      }
    return out;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed dense matrix file: ") + e.what());
  } catch (const LabelError& e) {
    throw FormatError(std::string("malformed dense matrix layout: ") + e.what());
  } catch (const DomainError& e) {
    throw FormatError(std::string("malformed dense matrix layout: ") + e.what());
  }
}

void write_pauli(std::ostream& os, const MatrixRecord& record) {
  const auto coeffs = pauli_decompose(record.matrix, record.layout);
  os << kPauliHeader;
  for (const auto& s : record.layout.subsystems()) os << ' ' << s.label;
  os << "\n# provenance " << record.provenance << '\n';
  for (const auto& [term, c] : coeffs) os << term.label() << ' ' << number17(c) << '\n';
}

MatrixRecord read_pauli(std::istream& is) {
  MatrixRecord out;
  std::vector<std::string> labels;
  PauliCoefficients<Real> coeffs;
  std::string line;
  bool any = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first[0] == '#') {
      std::string word;
      ls >> word;
      if (word == "pmlab") {
        ls >> word;
        for (std::string l; ls >> l;) labels.push_back(l);
      } else if (word == "provenance") {
        std::string rest;
        std::getline(ls, rest);
        const auto start = rest.find_first_not_of(' ');
        out.provenance = start == std::string::npos ? "" : rest.substr(start);
      }
      continue;
    }
    std::string value;
    if (!(ls >> value)) throw FormatError("Pauli record needs a label and a coefficient: " + line);
    std::string extra;
    if (ls >> extra) throw FormatError("trailing data in Pauli record: " + line);
    Real c;
    try {
      std::size_t used = 0;
      c = std::stod(value, &used);
      if (used != value.size()) throw FormatError("bad coefficient in Pauli record: " + line);
    } catch (const std::logic_error&) {
      throw FormatError("bad coefficient in Pauli record: " + line);
    }
    const PauliString term = PauliString::from_label(first);
    if (!coeffs.emplace(term, c).second) throw FormatError("duplicate Pauli term " + first);
    any = true;
  }
  if (!any) throw FormatError("Pauli file has no terms");
  if (!labels.empty()) {
    std::vector<Subsystem> subs;
    for (const auto& l : labels) subs.push_back({l, 2});
    try {
      out.layout = SubsystemLayout(subs);
    } catch (const LabelError& e) {
      throw FormatError(std::string("bad Pauli header: ") + e.what());
    }
  }
  out.matrix = pauli_compose(coeffs, out.layout);
  return out;
}

void write_matrix(std::ostream& os, const MatrixRecord& record, MatrixFormat format) {
  if (format == MatrixFormat::Dense)
    write_dense(os, record);
  else
    write_pauli(os, record);
}

MatrixRecord read_matrix(std::istream& is) {
  const std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  const auto pos = text.find_first_not_of(" \t\r\n");
  if (pos == std::string::npos) throw FormatError("matrix file is empty");
  std::istringstream in(text);
  return text[pos] == '{' ? read_dense(in) : read_pauli(in);
}

MatrixRecord read_matrix_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  return read_matrix(in);
}

std::string to_json(const OptimizationResult& r) {
  json doc;
  doc["value"] = r.value;
  doc["alpha"] = r.alpha;
  doc["beta"] = r.beta;
  doc["feasible"] = r.feasible;
  doc["best_restart"] = r.best_restart;
  doc["reevaluation_gap"] = r.reevaluation_gap;
  if (r.alice) doc["alice"] = observable_json(*r.alice);
  if (r.bob) doc["bob"] = {{"guess_axis", vec_json(r.bob->guess_axis)}, {"relay", observable_json(r.bob->relay)}};
  if (r.coefficients) {
    const auto& c = *r.coefficients;
    doc["coefficients"] = {{"a_to_b", c.a_to_b},         {"b_to_a_x", c.b_to_a_x},
                           {"b_to_a_y", c.b_to_a_y},     {"b_to_a_z", c.b_to_a_z},
                           {"alice_bias", c.alice_bias}, {"bob_bias", c.bob_bias}};
  }
  if (r.decoding_axis) doc["decoding_axis"] = vec_json(*r.decoding_axis);
  doc["traces"] = r.traces;
  return doc.dump();
}

std::string to_json(const ValidityReport& report) {
  json doc;
  doc["valid"] = report.is_valid;
  doc["hermitian"] = report.hermitian;
  doc["hermiticity_defect"] = report.hermiticity_defect;
  if (std::isnan(report.min_eigenvalue))
    doc["min_eigenvalue"] = nullptr;
  else
    doc["min_eigenvalue"] = report.min_eigenvalue;
  doc["trace"] = report.trace;
  json terms = json::array();
  for (const auto& [t, c] : report.forbidden_terms) terms.push_back({{"term", t.label()}, {"coefficient", c}});
  doc["forbidden_terms"] = terms;
  doc["reasons"] = report.reasons;
  return doc.dump();
}

}  // namespace pmlab
