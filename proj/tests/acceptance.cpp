// Acceptance run: one pass/fail line per criterion at full size. All
// tolerances and pinned constants live in the suites and constants.hpp.

#include <chrono>
#include <cstdio>
#include <vector>

#include "rank1ks/suites.hpp"

using namespace rank1ks;

int main() {
  const SuiteConfig cfg;  // fixed default seed, full sizes
  std::vector<SuiteResult> results;
  bool all = true;
  auto report = [&](const SuiteResult& r, double seconds) {
    std::printf("criterion %2d: %s  %-22s cases=%zu measured=%.6g pinned=%.6g  (%.1f s)\n",
                r.criterion, r.pass ? "PASS" : "FAIL", r.suite.c_str(), r.cases, r.max_ratio,
                r.pinned_constant, seconds);
    for (const auto& c : r.checks) {
      std::printf("    %s %s%s%s\n", c.pass ? "ok  " : "FAIL", c.name.c_str(),
                  c.detail.empty() ? "" : ": ", c.detail.c_str());
    }
    std::fflush(stdout);
    all = all && r.pass;
  };
  auto clock = [] { return std::chrono::steady_clock::now(); };
  for (const auto& e : suite_registry()) {
    const auto t0 = clock();
    SuiteResult r = e.run(cfg);
    report(r, std::chrono::duration<double>(clock() - t0).count());
    results.push_back(std::move(r));
  }
  const auto t0 = clock();
  report(determinism_suite(cfg, results), std::chrono::duration<double>(clock() - t0).count());
  std::printf("%s\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
  return all ? 0 : 1;
}
