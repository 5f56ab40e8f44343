#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kaft/quadrature.hpp"

namespace kaft::cli {

struct RunConfig {
  std::string command;
  std::optional<double> k, a, lambda, x, y, z, t, mu, nu;
  // "name:min:max:count[:log|lin]"
  std::vector<std::string> grid;
  quadrature::QuadratureSpec spec;
  std::string out;  // empty: stdout
  std::string format = "csv";
  unsigned long seed = 0;
  int jobs = 1;
  bool timing = false;  // real wall_ms instead of 0
  std::optional<double> max_rel;

  std::string eq = "both";        // hankel-check: 1, 2, both
  std::string kind = "both";      // legendre-check: P, Q, both
  std::string measure = "gamma";  // eval-density: gamma, sigma
  std::string f = "gaussian";     // translate: gaussian, bump, constant, samples
  double f_scale = 1.0;
  std::string samples;            // CSV x,y for f=samples
  bool lp = false;                // translate: run the L^p probe over the y axis
  std::vector<std::string> p_exps{"1", "2", "inf"};
  std::vector<int> only;  // selftest: criterion ids, empty for all
};

// Exit status: 0 pass, 2 invalid input, 3 numerical failure or missed tolerance.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int main(int argc, char** argv, std::ostream& out, std::ostream& err);
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kaft::cli
