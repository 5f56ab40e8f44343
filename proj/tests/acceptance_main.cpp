#include <cstdlib>
#include <iostream>

#include "kaft/acceptance.hpp"

int main(int argc, char** argv) {
  kaft::acceptance::Options opt;
  for (int i = 1; i < argc; ++i) opt.only.push_back(std::atoi(argv[i]));
  int failed = 0;
  kaft::acceptance::run_all(opt, [&](const kaft::acceptance::Outcome& o) {
    std::cout << kaft::acceptance::format_line(o) << std::endl;
    failed += !o.pass;
  });
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << '\n';
  return failed ? 1 : 0;
}
