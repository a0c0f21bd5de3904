// Serial reference driver against the OpenMP frontier driver on the same
// counts. Usage: bench_enumerate [threads]

#include "manin/counting.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>

using namespace manin;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  const int threads = argc > 1 ? std::atoi(argv[1]) : omp_get_max_threads();
  struct Case {
    const char* fan;
    double B;
  };
  const Case cases[] = {{"p1", 1e6}, {"p2", 1e5}, {"p1xp1", 1e4}, {"hirzebruch-1", 1e4}};
  std::printf("%-14s %10s %12s %10s %10s %8s %s\n", "fan", "B", "N", "serial_s", "omp_s",
              "speedup", "agree");
  int bad = 0;
  for (const auto& c : cases) {
    Fan fan = builtin_fan(c.fan);
    std::vector<double> rho(fan.num_rays(), 1.0);
    ExecPolicy ser;
    ser.serial = true;
    ExecPolicy par;
    par.threads = threads;
    auto t0 = std::chrono::steady_clock::now();
    auto ns = count_points(fan, rho, {c.B}, ser);
    const double ts = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    auto np = count_points(fan, rho, {c.B}, par);
    const double tp = seconds_since(t0);
    const bool agree = ns == np;
    bad += !agree;
    std::printf("%-14s %10.0e %12llu %10.3f %10.3f %8.2f %s\n", c.fan, c.B,
                static_cast<unsigned long long>(ns[0]), ts, tp, ts / tp, agree ? "yes" : "NO");
  }
  std::printf("threads: %d\n", threads);
  return bad ? 1 : 0;
}
