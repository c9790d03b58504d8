#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gkt {

// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitInput = 2,          // unreadable/invalid input or bad flags
  kExitCrossCheck = 3,     // gk --cross-check discrepancy above 5e-3 bits
  kExitInfeasible = 4,     // min-r found no point with x + y <= 1e-6 bits
  kExitViolation = 5,      // ineq contract violated beyond 1e-9
  kExitNoWitness = 6,      // construct: no violation quad / no negative ing(q)
};

// Runs the command line (without the program name). Reports go to `out`
// unless --out is given; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gkt
