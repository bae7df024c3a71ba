#include <iostream>

#include <CLI11.hpp>

#include "acceptance.hpp"

// Standalone acceptance run: one line per criterion, exit status 1 if any non-stretch criterion fails.
int main(int argc, char** argv) {
  CLI::App app{"acceptance suite"};
  blowup::acceptance::Options opt;
  std::string cache;
  app.add_option("--only", opt.only, "criterion ids")->delimiter(',');
  app.add_option("--cache-dir", cache, "profile cache directory");
  app.add_option("--pde-shoot-iterations", opt.pde_shoot_iterations);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "print notes under each line");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  if (!cache.empty()) opt.cache_dir = cache;

  const auto results = blowup::acceptance::run_all(opt);
  for (const auto& r : results) {
    std::cout << blowup::acceptance::format_line(r) << '\n';
    if (verbose || !r.pass)
      for (const auto& n : r.notes) std::cout << "       " << n << '\n';
    std::cout.flush();
  }
  const bool ok = blowup::acceptance::suite_passed(results);
  std::cout << (ok ? "acceptance: PASS" : "acceptance: FAIL") << '\n';
  return ok ? 0 : 1;
}
