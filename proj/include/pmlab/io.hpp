#pragma once

// Process file formats (see docs/formats.md) and result serialization.

#include <iosfwd>
#include <string>

#include "pmlab/optimizer.hpp"
#include "pmlab/process.hpp"

namespace pmlab {

/// A matrix read from disk, not yet validated as a process.
struct MatrixRecord {
  ComplexMatrix matrix;
  SubsystemLayout layout = SubsystemLayout::bipartite_qubits();
  std::string provenance = "custom";
};

enum class MatrixFormat { Dense, Pauli };

void write_dense(std::ostream& os, const MatrixRecord& record);
void write_pauli(std::ostream& os, const MatrixRecord& record);
void write_matrix(std::ostream& os, const MatrixRecord& record, MatrixFormat format);

/// Throw FormatError on malformed input.
MatrixRecord read_dense(std::istream& is);
MatrixRecord read_pauli(std::istream& is);
/// Dense when the first non-blank character is '{', Pauli text otherwise.
MatrixRecord read_matrix(std::istream& is);
MatrixRecord read_matrix_file(const std::string& path);

MatrixRecord to_record(const ProcessMatrix& w);

std::string to_json(const OptimizationResult& result);
std::string to_json(const ValidityReport& report);

}  // namespace pmlab
