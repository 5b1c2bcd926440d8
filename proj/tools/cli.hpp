#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pmlab/process.hpp"

namespace pmlab::cli {

/// Runs one command line (without the program name). Exit codes: 0 success,
/// 1 validation failure, 2 usage error or malformed input.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// w_ocb, w_beta@<beta>, ordered_ab, ordered_ba, mix@<q>, identity.
/// Throws FormatError for an unknown name.
ProcessMatrix builtin_process(const std::string& name);
bool is_builtin_name(const std::string& name);

}  // namespace pmlab::cli
