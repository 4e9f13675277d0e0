#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "annulus/inner.hpp"

namespace annulus::cli {

struct RunConfig {
  std::string command;
  double r = 0.5;
  std::optional<cplx> base;  // defaults to (1 + r) / 2
  std::optional<cplx> pole;
  std::optional<cplx> z1;
  std::vector<cplx> zeros;
  std::vector<SingularAtom> atoms;
  int N = 64;
  int m = 512;
  double tol = 1e-8;
  std::string out;  // empty: stdout
  std::string format = "json";
  std::string space = "smirnov";
  std::uint64_t seed = 0;
  bool disk = false;
  int n_rho = 64;
  int n_theta = 64;
  std::string grid;  // CSV path for a polar grid of the primary function

  cplx base_point() const { return base.value_or(cplx(0.5 * (1.0 + r), 0.0)); }
};

const std::vector<std::string>& commands();

/// "a+bi", "a-bi", "bi", "a", or polar "rho<angle>theta" with the angle sign
/// U+2220 or '@'.
cplx parse_complex(const std::string& text);
std::vector<cplx> parse_complex_list(const std::string& text);
/// "point:mass,point:mass,..."
std::vector<SingularAtom> parse_atoms(const std::string& text);

/// Throws Error(UsageError) naming the offending flag.
RunConfig parse_config(int argc, const char* const* argv);

/// Executes the command; writes the result document and returns the exit code.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// parse_config + run with exit-code mapping (0 ok, 2 usage, 3 rejected input, 4 numerical failure).
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

int exit_code(ErrorCode code);

}  // namespace annulus::cli
