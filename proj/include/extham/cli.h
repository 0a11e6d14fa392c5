#pragma once
// Command-line front end. Reports go to `out` as JSON, logs to `err`.
// Exit codes: 0 pass, 1 failed verification, 2 construction or usage error.

#include <ostream>
#include <string>
#include <vector>

namespace extham::cli {

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace extham::cli
