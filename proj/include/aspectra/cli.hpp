#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace aspectra {

/// Entry point of the `aspectra` command-line tool. `args` excludes the
/// program name. Returns 0 on success, 2 on usage errors and 1 on
/// computation errors; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace aspectra
