#pragma once

// Self-test registry behind the `verify` subcommand: every check pits an
// implementation path against an independent oracle (brute-force
// contraction, random sampling, closed forms, cross-formulas) and prints one
// PASS/FAIL line.

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace rg2::verify {

struct Check {
  std::string name;
  bool quick;                         // part of the sub-second subset
  std::function<std::string()> body;  // empty string on pass, detail on fail
};

const std::vector<Check>& checks();

/// Run the registry (quick subset only when quick). Returns the number of
/// failures; prints one line per check to out.
int run(bool quick, std::ostream& out);

}  // namespace rg2::verify
