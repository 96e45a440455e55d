#include "nvmag/dynamics.hpp"

#include <cmath>
#include <random>

#include <unsupported/Eigen/KroneckerProduct>

namespace nvmag {

namespace {
const cplx kI{0.0, 1.0};
}

void validate_density(const Mat& rho, double tol) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("density matrix must be square");
  if (hermiticity_defect(rho) > tol)
    throw numeric_error("density matrix is not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > tol || std::abs(rho.trace().imag()) > tol)
    throw numeric_error("density matrix trace differs from 1");
  Eigen::SelfAdjointEigenSolver<Mat> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol)
    throw numeric_error("density matrix has a negative eigenvalue");
}

Mat dephasing_operator(int dim) {
  const auto& op = SpinOperators::get();
  const Mat I2 = Mat::Identity(2, 2);
  switch (dim) {
    case 2: return op.Sz2;
    case 4: return kroneckerProduct(op.Sz2, I2);
    case 6: return kroneckerProduct(op.Sz, I2);
    default: throw std::invalid_argument("dephasing operator defined for dim 2, 4, 6");
  }
}

Mat lindblad_rhs(const Mat& rho, const Mat& H, double Gamma) {
  if (Gamma < 0.0) throw std::invalid_argument("Gamma must be >= 0");
  const Mat L = dephasing_operator(static_cast<int>(rho.rows()));
  const Mat L2 = L * L;
  Mat out = -kI * (H * rho - rho * H);
  if (Gamma > 0.0) out += Gamma * (2.0 * L * rho * L - L2 * rho - rho * L2);
  return out;
}

double suggested_dt(const Mat& H, double Gamma) {
  const double scale = std::max(H.cwiseAbs().maxCoeff(), Gamma);
  return scale > 0.0 ? 0.01 / scale : 0.01;
}

Mat integrate_master_equation(const Mat& rho0, const Mat& H, double Gamma,
                              double t_end, double dt) {
  validate_density(rho0);
  if (!(dt > 0.0) || t_end < 0.0) throw std::invalid_argument("need dt > 0 and t_end >= 0");
  const auto n = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-12));
  const double h = n > 0 ? t_end / static_cast<double>(n) : 0.0;
  Mat rho = rho0;
  for (std::size_t i = 0; i < n; ++i) {
    const Mat k1 = lindblad_rhs(rho, H, Gamma);
    const Mat k2 = lindblad_rhs(rho + 0.5 * h * k1, H, Gamma);
    const Mat k3 = lindblad_rhs(rho + 0.5 * h * k2, H, Gamma);
    const Mat k4 = lindblad_rhs(rho + h * k3, H, Gamma);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    rho = 0.5 * (rho + rho.adjoint()).eval();
  }
  if (std::abs(rho.trace().real() - 1.0) > 1e-8)
    throw numeric_error("integration unstable, reduce dt (trace drift)");
  Eigen::SelfAdjointEigenSolver<Mat> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-6)
    throw numeric_error("integration unstable, reduce dt");
  return rho;
}

double ou_c_from_T2star(double T2_star, double tau_c) {
  if (!(T2_star > 0.0) || !(tau_c > 0.0))
    throw std::invalid_argument("T2_star and tau_c must be > 0");
  return 4.0 / (T2_star * T2_star * tau_c);
}

double ou_markov_gamma(double T2_star, double tau_c) {
  return 4.0 * tau_c / (T2_star * T2_star);
}

OrnsteinUhlenbeck OrnsteinUhlenbeck::from_T2star(double T2_star, double tau_c,
                                                 double dt, std::uint64_t seed,
                                                 double gamma_e) {
  OrnsteinUhlenbeck m{tau_c, ou_c_from_T2star(T2_star, tau_c) / (gamma_e * gamma_e),
                      dt, seed};
  m.validate();
  return m;
}

void OrnsteinUhlenbeck::validate() const {
  if (!(tau_c > 0.0)) throw config_error("tau_c must be > 0");
  if (c < 0.0) throw config_error("c must be >= 0");
  if (!(dt > 0.0)) throw config_error("dt must be > 0");
  if (dt > tau_c / 10.0) throw config_error("dt must resolve tau_c (dt <= tau_c/10)");
}

Trajectory ou_sample_path(const OrnsteinUhlenbeck& model, std::size_t n_steps) {
  return ou_sample_path(model, n_steps, model.seed);
}

Trajectory ou_sample_path(const OrnsteinUhlenbeck& model, std::size_t n_steps,
                          std::uint64_t seed) {
  model.validate();
  if (n_steps < 1) throw std::invalid_argument("n_steps must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double var = model.stationary_variance();
  const double decay = std::exp(-model.dt / model.tau_c);
  const double kick = std::sqrt(var * (1.0 - decay * decay));

  Trajectory path;
  path.dt = model.dt;
  path.seed = seed;
  path.times.resize(n_steps + 1);
  path.values.resize(n_steps + 1);
  path.values[0] = var > 0.0 ? std::sqrt(var) * normal(rng) : 0.0;
  path.times[0] = 0.0;
  for (std::size_t i = 1; i <= n_steps; ++i) {
    path.times[i] = static_cast<double>(i) * model.dt;
    path.values[i] = path.values[i - 1] * decay + kick * normal(rng);
  }
  return path;
}

std::uint64_t trajectory_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double phase_integral(const Trajectory& path, double t) {
  const std::size_t n = path.values.size();
  if (n < 2 || t > path.times.back() + 1e-12 * path.dt)
    throw numeric_error("noise path shorter than requested time");
  if (t <= 0.0) return 0.0;
  double acc = 0.0;
  std::size_t i = 0;
  while (i + 1 < n && path.times[i + 1] <= t) {
    acc += 0.5 * (path.values[i] + path.values[i + 1]) * path.dt;
    ++i;
  }
  if (i + 1 < n && t > path.times[i]) {
    const double frac = (t - path.times[i]) / path.dt;
    const double bt = path.values[i] + frac * (path.values[i + 1] - path.values[i]);
    acc += 0.5 * (path.values[i] + bt) * (t - path.times[i]);
  }
  return acc;
}

Vec stochastic_evolve(const Vec& state0, const ProtocolParams& p, const Trajectory& path) {
  const double phi = p.consts.gamma_e * phase_integral(path, p.tau);
  Vec out = evolve_free(state0, p.tau, p);
  const cplx noise = std::exp(-kI * phi);  // Delta m = -1 branch
  out(2) *= noise;
  out(3) *= noise;
  return out;
}

namespace {

struct TrajectoryStats {
  // Per-trajectory, per-tau samples: a[k*n_tau + j] and, for ratio
  // observables, the matching denominator b.
  std::vector<double> a, b;
  bool ratio = false;
};

void eval_trajectory(const ProtocolParams& p, const OrnsteinUhlenbeck& model,
                     Observable obs, const std::vector<double>& taus,
                     std::size_t k, std::size_t n_steps, TrajectoryStats& st) {
  const Trajectory path =
      ou_sample_path(model, n_steps, trajectory_seed(model.seed, k));
  const Vec pre = pre_selected_state(p.alpha, p.theta_i);
  const double cf = std::cos(p.theta_f / 2.0), sf = std::sin(p.theta_f / 2.0);
  const std::size_t n_tau = taus.size();
  for (std::size_t j = 0; j < n_tau; ++j) {
    const double phi = p.consts.gamma_e * phase_integral(path, taus[j]);
    if (obs == Observable::ElectronCoherence) {
      st.a[k * n_tau + j] = std::cos(phi);
      continue;
    }
    ProtocolParams q = p;
    q.tau = taus[j];
    Vec psi = evolve_free(pre, taus[j], q);
    const cplx noise = std::exp(-kI * phi);
    psi(2) *= noise;
    psi(3) *= noise;
    const cplx up = sf * psi(0) + cf * psi(2);
    const cplx dn = sf * psi(1) + cf * psi(3);
    const double ps = std::norm(up) + std::norm(dn);
    if (obs == Observable::SuccessProbability) {
      st.a[k * n_tau + j] = ps;
    } else {
      st.a[k * n_tau + j] = 0.5 * (std::norm(up) - std::norm(dn));  // unnormalized <I_z>
      st.b[k * n_tau + j] = ps;
    }
  }
}

MonteCarloResult reduce_stats(const TrajectoryStats& st, std::size_t n_traj,
                              const std::vector<double>& taus) {
  const std::size_t n_tau = taus.size();
  MonteCarloResult res;
  res.taus = taus;
  res.mean.resize(n_tau);
  res.std_error.resize(n_tau);
  const auto N = static_cast<double>(n_traj);
  for (std::size_t j = 0; j < n_tau; ++j) {
    double sa = 0.0, sb = 0.0;
    for (std::size_t k = 0; k < n_traj; ++k) {
      sa += st.a[k * n_tau + j];
      if (st.ratio) sb += st.b[k * n_tau + j];
    }
    const double ma = sa / N;
    if (!st.ratio) {
      double ss = 0.0;
      for (std::size_t k = 0; k < n_traj; ++k) {
        const double d = st.a[k * n_tau + j] - ma;
        ss += d * d;
      }
      res.mean[j] = ma;
      res.std_error[j] = n_traj > 1 ? std::sqrt(ss / (N * (N - 1.0))) : 0.0;
    } else {
      const double mb = sb / N;
      if (std::abs(mb) < 1e-15)
        throw numeric_error("post-selection impossible (ensemble P_s ~ 0)");
      const double r = ma / mb;
      // delta-method variance of the ratio-of-means estimator
      double ss = 0.0;
      for (std::size_t k = 0; k < n_traj; ++k) {
        const double e = st.a[k * n_tau + j] - r * st.b[k * n_tau + j];
        ss += e * e;
      }
      res.mean[j] = r;
      res.std_error[j] =
          n_traj > 1 ? std::sqrt(ss / (N * (N - 1.0))) / std::abs(mb) : 0.0;
    }
  }
  return res;
}

MonteCarloResult monte_carlo_impl(const ProtocolParams& p,
                                  const OrnsteinUhlenbeck& model,
                                  std::size_t n_traj, Observable obs,
                                  const std::vector<double>& taus, bool parallel) {
  if (n_traj < 100) throw std::invalid_argument("need n_traj >= 100");
  if (taus.empty()) throw std::invalid_argument("empty tau grid");
  model.validate();
  double tau_max = 0.0;
  for (double t : taus) tau_max = std::max(tau_max, t);
  const auto n_steps =
      static_cast<std::size_t>(std::ceil(tau_max / model.dt)) + 1;

  TrajectoryStats st;
  st.ratio = obs == Observable::IzPostSelected;
  st.a.resize(n_traj * taus.size());
  if (st.ratio) st.b.resize(n_traj * taus.size());

  if (parallel) {
#pragma omp parallel for schedule(static)
    for (long long k = 0; k < static_cast<long long>(n_traj); ++k)
      eval_trajectory(p, model, obs, taus, static_cast<std::size_t>(k), n_steps, st);
  } else {
    for (std::size_t k = 0; k < n_traj; ++k)
      eval_trajectory(p, model, obs, taus, k, n_steps, st);
  }
  return reduce_stats(st, n_traj, taus);
}

}  // namespace

MonteCarloResult monte_carlo_signal(const ProtocolParams& p,
                                    const OrnsteinUhlenbeck& model,
                                    std::size_t n_traj, Observable obs,
                                    const std::vector<double>& taus) {
  return monte_carlo_impl(p, model, n_traj, obs, taus, true);
}

MonteCarloResult monte_carlo_signal_serial(const ProtocolParams& p,
                                           const OrnsteinUhlenbeck& model,
                                           std::size_t n_traj, Observable obs,
                                           const std::vector<double>& taus) {
  return monte_carlo_impl(p, model, n_traj, obs, taus, false);
}

}  // namespace nvmag
