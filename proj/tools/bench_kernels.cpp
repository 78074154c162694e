// Times the OpenMP kernels against their serial reference paths and checks
// that both produce identical results.
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "fivenum/order_stats.hpp"
#include "fivenum/parallel.hpp"
#include "fivenum/simulation.hpp"

namespace {

using namespace fivenum;
using clock_type = std::chrono::steady_clock;

double time_seconds(const std::function<void()>& fn) {
  const auto t0 = clock_type::now();
  fn();
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

void report(const char* name, double serial_s, double parallel_s, bool identical) {
  std::printf("%-34s %9.3fs %9.3fs %7.2fx   %s\n", name, serial_s, parallel_s,
              serial_s / parallel_s, identical ? "identical" : "MISMATCH");
}

std::string rmse_csv(const RmseReport& r) {
  std::ostringstream os;
  write_rmse_csv(r, os);
  return os.str();
}

}  // namespace

int main() {
  std::printf("threads available: %d\n\n", max_threads());
  std::printf("%-34s %10s %10s %8s\n", "kernel", "serial", "parallel", "speedup");

  {
    MonteCarloMomentOptions opt;
    opt.reps = 400000;
    opt.seed = 99;
    MonteCarloMoments serial_out, parallel_out;
    const SampleSizeQ size = SampleSizeQ::from_n(85);
    opt.exec = Execution::serial;
    const double ts = time_seconds([&] { serial_out = order_stat_moments_monte_carlo(size, opt); });
    opt.exec = Execution::parallel;
    const double tp = time_seconds([&] { parallel_out = order_stat_moments_monte_carlo(size, opt); });
    const bool same = serial_out.moments.var_range == parallel_out.moments.var_range &&
                      serial_out.moments.cov_range_iqr == parallel_out.moments.cov_range_iqr &&
                      serial_out.w_opt == parallel_out.w_opt;
    report("monte-carlo moments (n=85, 4e5)", ts, tp, same);
  }

  {
    SimulationConfig config;
    config.dist = Normal(50.0, 17.0);
    config.n_grid = {85};
    config.reps = 100000;
    config.master_seed = 7;
    RmseReport serial_out, parallel_out;
    config.exec = Execution::serial;
    const double ts = time_seconds([&] { serial_out = run_rmse(config); });
    config.exec = Execution::parallel;
    const double tp = time_seconds([&] { parallel_out = run_rmse(config); });
    report("rmse study (normal, n=85, 1e5)", ts, tp,
           rmse_csv(serial_out) == rmse_csv(parallel_out));
  }

  {
    HistogramScenario serial_out, parallel_out;
    const double ts = time_seconds(
        [&] { serial_out = histogram_scenario(1001, 10000, 3, Execution::serial); });
    const double tp = time_seconds(
        [&] { parallel_out = histogram_scenario(1001, 10000, 3, Execution::parallel); });
    report("histogram scenario (n=1001, 1e4)", ts, tp,
           serial_out.range_based == parallel_out.range_based &&
               serial_out.iqr_based == parallel_out.iqr_based);
  }

  {
    std::vector<std::pair<double, double>> serial_out, parallel_out;
    const double ts =
        time_seconds([&] { serial_out = j_grid(1, 25, {}, Execution::serial); });
    const double tp =
        time_seconds([&] { parallel_out = j_grid(1, 25, {}, Execution::parallel); });
    report("quadrature J grid (Q=1..25)", ts, tp, serial_out == parallel_out);
  }

  return 0;
}
