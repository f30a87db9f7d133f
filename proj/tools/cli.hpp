#pragma once

#include <string>
#include <vector>

namespace greenpath::cli {

// Entry point of the greenpath command-line tool.
//   0  success
//   1  verification-suite failure (or a numerical failure during a run)
//   2  usage / parse error
//   3  I/O failure
int run(std::vector<std::string> args);

}  // namespace greenpath::cli
