#include <chrono>
#include <cstdio>
#include <cstdlib>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "sbm/mapper.hpp"

using namespace sbm;

namespace {

bool same_cells(const ValidityMap& a, const ValidityMap& b) {
  if (a.cells.size() != b.cells.size()) return false;
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    const ValidityCell& x = a.cells[i];
    const ValidityCell& y = b.cells[i];
    if (x.label != y.label || x.t_f != y.t_f || x.flags != y.flags)
      return false;
    if (x.eps.markov != y.eps.markov || x.eps.st != y.eps.st ||
        x.eps.f3b != y.eps.f3b || x.eps.f3 != y.eps.f3)
      return false;
  }
  return true;
}

template <typename F>
double timed(F&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t points =
      argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 3;
  SweepGrid g;
  g.w0 = 1.0;
  g.gamma_axis = log_axis(0.3, 3.0, points);
  g.kappa_axis = g.gamma_axis;
  g.beta_axis = g.gamma_axis;

#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (no OpenMP)\n");
#endif
  std::printf("validity sweep, %zu^3 cells at w0 = %g\n\n", points, g.w0);

  ValidityMap serial, parallel;
  const double ts = timed([&] { serial = mapper::sweep_serial(g); });
  const double tp = timed([&] { parallel = mapper::sweep(g); });
  std::printf("  serial   %8.3f s\n", ts);
  std::printf("  parallel %8.3f s\n", tp);
  std::printf("  speedup  %8.2fx\n", ts / tp);
  std::printf("  identical: %s\n", same_cells(serial, parallel) ? "yes" : "NO");
  return 0;
}
