#ifndef TREESIB_CLI_HPP
#define TREESIB_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace treesib {

// Command dispatch for the treesib tool. `args` excludes the program name.
//
//   analyze <file>                      ends, nearly-finite, rake, regularity
//   classify <file> <embedding>         validate, then the trichotomy verdict
//   search <file>                       bounded self-embedding search
//   siblings <file> --k N               emit the sibling family S_1..S_N
//   report <file>                       sibling-number certificate
//   truncate <file> --depth D [--dot]   finite ball, optionally as DOT
//   convergence <file>                  end-convergence counts for a sequence
//
// Common flags: --presentation NAME, --json; search and report also accept
// --shift-bound N and --patch-radius N.
//
// Exit codes: 0 success, 1 analysis-level failure (invalid embedding,
// unknown name, unsupported construction), 2 usage or document parse error.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace treesib

#endif  // TREESIB_CLI_HPP
