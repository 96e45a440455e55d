#pragma once

#include <cstdint>
#include <vector>

#include "nvmag/protocol.hpp"

namespace nvmag {

/// Hermiticity / unit trace / positivity checks for a density matrix.
void validate_density(const Mat& rho, double tol = 1e-8);

/// Truncated electron S_z (diag(0,-1)) extended to the requested dimension:
/// 2 -> electron only, 4 -> electron x nuclear, 6 -> full spin-1 x nuclear.
Mat dephasing_operator(int dim);

/// Pure-dephasing Lindblad right-hand side,
/// -i[H, rho] + Gamma (2 L rho L - L^2 rho - rho L^2) with L = dephasing_operator.
Mat lindblad_rhs(const Mat& rho, const Mat& H, double Gamma);

/// Fixed-step RK4 integration of the master equation, symmetrizing each step.
/// Throws numeric_error on positivity loss beyond 1e-6.
Mat integrate_master_equation(const Mat& rho0, const Mat& H, double Gamma,
                              double t_end, double dt);

/// Suggested step per the resolution rules dt = 0.01 / max(||H||, Gamma).
double suggested_dt(const Mat& H, double Gamma);

/// Diffusion parameter of the dephasing-equivalent OU process,
/// c = 4 / ((T2*)^2 tau_c), in angular phase units ((rad/us)^2 / us).
double ou_c_from_T2star(double T2_star, double tau_c);

/// Markovian dephasing rate gamma = 4 tau_c / (T2*)^2 of the OU noise in the
/// limit tau_c << T2*. In the Eq.-(13)-style dissipator used by lindblad_rhs
/// the equivalent coherence decay rate is gamma/2.
double ou_markov_gamma(double T2_star, double tau_c);

/// Ornstein-Uhlenbeck field noise. The path is carried in field units (G);
/// c here is in G^2/us so that gamma_e^2 * stationary_variance = 2/(T2*)^2
/// when constructed via from_T2star.
struct OrnsteinUhlenbeck {
  double tau_c;    // correlation time, us
  double c;        // diffusion parameter, G^2/us
  double dt;       // sampling step, us
  std::uint64_t seed = 0;

  static OrnsteinUhlenbeck from_T2star(double T2_star, double tau_c, double dt,
                                       std::uint64_t seed,
                                       double gamma_e = PhysConstants{}.gamma_e);

  double stationary_variance() const { return c * tau_c / 2.0; }
  void validate() const;
};

struct Trajectory {
  double dt;
  std::vector<double> times;   // uniform grid starting at 0
  std::vector<double> values;  // B(t), G
  std::uint64_t seed;
};

/// Exact-discretization OU recursion, B(0) drawn from the stationary distribution.
Trajectory ou_sample_path(const OrnsteinUhlenbeck& model, std::size_t n_steps);
Trajectory ou_sample_path(const OrnsteinUhlenbeck& model, std::size_t n_steps,
                          std::uint64_t seed);

/// Deterministic per-trajectory substream seed (splitmix64 of master ^ index).
std::uint64_t trajectory_seed(std::uint64_t master, std::uint64_t index);

/// Trapezoidal phase integral int_0^t B dt' along a sampled path.
double phase_integral(const Trajectory& path, double t);

/// U_noise(tau) U_s(tau) |state0>: free evolution plus the stochastic phase
/// exp(-i gamma_e Phi(tau)) on the |1> branch. Requires path coverage of tau.
Vec stochastic_evolve(const Vec& state0, const ProtocolParams& p, const Trajectory& path);

enum class Observable { IzPostSelected, SuccessProbability, ElectronCoherence };

struct MonteCarloResult {
  std::vector<double> taus;
  std::vector<double> mean;
  std::vector<double> std_error;
};

/// Ensemble average of the chosen observable over n_traj independent seeded
/// trajectories, evaluated on a tau grid. OpenMP-parallel over trajectories;
/// the reduction runs in fixed index order so the result is independent of
/// scheduling and thread count.
MonteCarloResult monte_carlo_signal(const ProtocolParams& p,
                                    const OrnsteinUhlenbeck& model,
                                    std::size_t n_traj, Observable obs,
                                    const std::vector<double>& taus);

/// Serial reference implementation; bit-identical to monte_carlo_signal.
MonteCarloResult monte_carlo_signal_serial(const ProtocolParams& p,
                                           const OrnsteinUhlenbeck& model,
                                           std::size_t n_traj, Observable obs,
                                           const std::vector<double>& taus);

}  // namespace nvmag
