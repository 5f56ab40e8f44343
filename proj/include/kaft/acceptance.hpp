#pragma once

#include <functional>
#include <string>
#include <vector>

namespace kaft::acceptance {

struct Options {
  unsigned long seed = 0;
  int jobs = 1;
  std::vector<int> only;  // empty: all criteria
};

struct Outcome {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// Runs criteria 1..10 in order, reporting each as it finishes.
std::vector<Outcome> run_all(const Options& opt, const std::function<void(const Outcome&)>& report = {});
Outcome run_one(int id, const Options& opt);
std::string format_line(const Outcome& o);

// Frozen maxima of the TV norm over the 9x9 log grid x, y in [0.1, 10].
struct TvGolden {
  double k, a, max_tv;
};
const std::vector<TvGolden>& tv_golden();

}  // namespace kaft::acceptance
