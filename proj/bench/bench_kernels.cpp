// Timing comparison between the serial reference kernels and their threaded
// counterparts. Prints one table row per kernel and size.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "subcorr/grid.hpp"
#include "subcorr/kernels.hpp"
#include "subcorr/rng.hpp"
#include "subcorr/threading.hpp"

using namespace subcorr;
using clock_type = std::chrono::steady_clock;

namespace {

volatile double sink;  // keeps results observable

template <class F>
double time_best_of(F&& f, int reps) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = clock_type::now();
    f();
    const auto t1 = clock_type::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

void report(const std::string& name, const std::string& size, double serial_s,
            double omp_s) {
  std::printf("%-18s %-12s %10.3f ms %10.3f ms %8.2fx\n", name.c_str(), size.c_str(),
              serial_s * 1e3, omp_s * 1e3, serial_s / omp_s);
}

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
  GaussianSampler rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = rng.normal();
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  int rows = 2000, cols = 2000, reps = 5;
  for (int a = 1; a + 1 < argc; a += 2) {
    const std::string key = argv[a];
    const int val = std::atoi(argv[a + 1]);
    if (key == "--rows") rows = val;
    else if (key == "--cols") cols = val;
    else if (key == "--reps") reps = val;
  }
  const std::size_t n = static_cast<std::size_t>(rows) * cols;
  const std::string size_2d = std::to_string(rows) + "x" + std::to_string(cols);

  std::printf("threads: %d\n", threading::max_threads());
  std::printf("%-18s %-12s %13s %13s %9s\n", "kernel", "size", "serial", "threaded",
              "speedup");

  const std::vector<double> u = random_vec(n, 11);
  std::vector<double> px(n), py(n), outa(n), outb(n);

  report("gradient_2d", size_2d,
         time_best_of([&] { kernels::serial::gradient_2d(u.data(), rows, cols, outa.data(), outb.data()); sink = outa[0]; }, reps),
         time_best_of([&] { kernels::omp::gradient_2d(u.data(), rows, cols, outa.data(), outb.data()); sink = outa[0]; }, reps));

  kernels::serial::gradient_2d(u.data(), rows, cols, px.data(), py.data());
  report("divergence_2d", size_2d,
         time_best_of([&] { kernels::serial::divergence_2d(px.data(), py.data(), rows, cols, outa.data()); sink = outa[0]; }, reps),
         time_best_of([&] { kernels::omp::divergence_2d(px.data(), py.data(), rows, cols, outa.data()); sink = outa[0]; }, reps));

  {
    std::vector<double> pa = px, pb = py, qa = px, qb = py;
    const std::vector<double> wx = random_vec(n, 12), wy = random_vec(n, 13);
    report("dual_update_2d", size_2d,
           time_best_of([&] { sink = kernels::serial::dual_update_2d(pa.data(), pb.data(), wx.data(), wy.data(), 0.25, n); }, reps),
           time_best_of([&] { sink = kernels::omp::dual_update_2d(qa.data(), qb.data(), wx.data(), wy.data(), 0.25, n); }, reps));
  }

  report("soft_threshold", size_2d,
         time_best_of([&] { kernels::serial::soft_threshold_vec(u.data(), 0.3, n, outa.data()); sink = outa[0]; }, reps),
         time_best_of([&] { kernels::omp::soft_threshold_vec(u.data(), 0.3, n, outa.data()); sink = outa[0]; }, reps));

  {
    const int mr = 1200, mc = 1200;
    const std::vector<double> mat = random_vec(static_cast<std::size_t>(mr) * mc, 14);
    const std::vector<double> x = random_vec(mc, 15);
    std::vector<double> y(mr);
    const std::string size_m = std::to_string(mr) + "x" + std::to_string(mc);
    report("matvec", size_m,
           time_best_of([&] { kernels::serial::matvec(mat.data(), mr, mc, x.data(), y.data()); sink = y[0]; }, reps),
           time_best_of([&] { kernels::omp::matvec(mat.data(), mr, mc, x.data(), y.data()); sink = y[0]; }, reps));
  }

  return 0;
}
