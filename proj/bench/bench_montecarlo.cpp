// Timing comparison of the OpenMP trajectory ensemble against the serial
// reference, plus a bit-identity check between the two.
#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "nvmag/dynamics.hpp"

using namespace nvmag;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t n_traj = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 4000;
  ProtocolParams p;
  OrnsteinUhlenbeck model = OrnsteinUhlenbeck::from_T2star(2.0, 0.2, 0.002, 2718);
  std::vector<double> taus;
  for (int i = 1; i <= 50; ++i) taus.push_back(10.0 * i / 50.0);

  std::printf("monte carlo ensemble: %zu trajectories x %zu tau points\n", n_traj,
              taus.size());

  auto t0 = clock_type::now();
  const MonteCarloResult serial =
      monte_carlo_signal_serial(p, model, n_traj, Observable::IzPostSelected, taus);
  const double t_serial = seconds_since(t0);

  t0 = clock_type::now();
  const MonteCarloResult parallel =
      monte_carlo_signal(p, model, n_traj, Observable::IzPostSelected, taus);
  const double t_parallel = seconds_since(t0);

  for (std::size_t j = 0; j < taus.size(); ++j) {
    if (serial.mean[j] != parallel.mean[j] ||
        serial.std_error[j] != parallel.std_error[j]) {
      std::printf("MISMATCH at tau = %g\n", taus[j]);
      return 1;
    }
  }
  std::printf("serial:   %8.3f s\n", t_serial);
  std::printf("parallel: %8.3f s  (speedup %.2fx)\n", t_parallel,
              t_serial / t_parallel);
  std::printf("results bit-identical\n");
  return 0;
}
