// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Scales match the shipped experiment defaults (quick=false).
#include <cstdio>
#include <cstdlib>

#include "nodal3d/harness.hpp"

int main() {
  int threads = 1;
  if (const char* env = std::getenv("NODAL3D_THREADS")) {
    const int t = std::atoi(env);
    if (t >= 1) threads = t;
  }
  const nodal3d::AcceptanceReport rep =
      nodal3d::run_acceptance(20260801, threads, false);
  int failed = 0;
  for (const auto& r : rep.results)
    if (!r.pass) ++failed;
  std::printf("acceptance: %zu criteria, %d failed — %s\n",
              rep.results.size(), failed, failed == 0 ? "PASS" : "FAIL");
  return failed == 0 ? 0 : 1;
}
