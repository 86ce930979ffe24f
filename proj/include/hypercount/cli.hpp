#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hypercount::cli {

/// Runs one `hypercount` invocation. `args` excludes the program name.
/// Returns 0 on success, 1 on a domain error (error JSON written to `err`)
/// and 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hypercount::cli
