#include "nvmag/metrology.hpp"

#include <cmath>

namespace nvmag {

namespace {

constexpr double kGaussToTesla = 1e-4;
constexpr double kMicrosecToSec = 1e-6;

bool symmetric_angles(const ProtocolParams& p) {
  const double h = std::numbers::pi / 2;
  return std::abs(p.alpha - h) < 1e-12 && std::abs(p.theta_i - h) < 1e-12 &&
         std::abs(p.theta_f - h) < 1e-12;
}

double with_B(const ProtocolParams& p, double B,
              double (*fn)(const ProtocolParams&)) {
  ProtocolParams q = p;
  q.B = B;
  return fn(q);
}

double five_point(const ProtocolParams& p, double h,
                  double (*fn)(const ProtocolParams&)) {
  return (with_B(p, p.B - 2 * h, fn) - 8.0 * with_B(p, p.B - h, fn) +
          8.0 * with_B(p, p.B + h, fn) - with_B(p, p.B + 2 * h, fn)) /
         (12.0 * h);
}

}  // namespace

double fd_step(const ProtocolParams& p) {
  return 1e-6 / (p.consts.gamma_e * std::max(p.tau, 1e-6));
}

double delta_Iz(double mean) {
  if (std::abs(mean) > 0.5 + 1e-12)
    throw std::invalid_argument("|<Iz>| cannot exceed 1/2");
  return std::sqrt(std::max(0.25 - mean * mean, 0.0));
}

double dIz_dB(const ProtocolParams& p, DerivativeMethod method) {
  if (method == DerivativeMethod::FiniteDifference)
    return five_point(p, fd_step(p), &signal_Iz);
  if (!symmetric_angles(p))
    throw std::invalid_argument("analytic derivative needs alpha = theta_i = theta_f = pi/2");
  const double q = std::isinf(p.T2_star) ? 1.0 : std::exp(-p.tau / p.T2_star);
  const double a = p.A_zz * p.tau / 2.0;
  const double x = p.consts.gamma_e * p.B * p.tau;
  const double denom = 1.0 + q * std::cos(a) * std::cos(x);
  if (std::abs(denom) < 1e-15) throw numeric_error("signal singular");
  const double dm_dx =
      -(q * std::sin(a) / 2.0) * (std::cos(x) + q * std::cos(a)) / (denom * denom);
  return dm_dx * p.consts.gamma_e * p.tau;
}

double delta_B(const ProtocolParams& p, DerivativeMethod method) {
  const double slope = dIz_dB(p, method);
  if (std::abs(slope) < 1e-15) throw numeric_error("insensitive working point");
  return delta_Iz(signal_Iz(p)) / std::abs(slope);
}

double delta_B_ramsey(double tau, double B, double T2_star, const PhysConstants& c) {
  const double q = std::isinf(T2_star) ? 1.0 : std::exp(-tau / T2_star);
  const double x = c.gamma_e * B * tau;
  const double prob = 0.5 - q * std::cos(x) / 2.0;
  const double slope = std::abs(q * c.gamma_e * tau * std::sin(x) / 2.0);
  if (slope < 1e-15) throw numeric_error("insensitive working point");
  return std::sqrt(prob * (1.0 - prob)) / slope;
}

SensitivityResult sensitivity(const ProtocolParams& p, const TimingBudget& timing) {
  p.validate();
  timing.validate();
  const double ps = success_probability(p);
  if (ps <= 0.0) throw numeric_error("post-selection impossible (P_s ~ 0)");
  const double dB = delta_B(p, symmetric_angles(p) ? DerivativeMethod::Analytic
                                                   : DerivativeMethod::FiniteDifference);
  const double n_trials = 1.0 / ps;
  const double t_m = n_trials * (timing.t_i + p.tau + timing.t_p) + timing.t_r;
  const double eta = dB * kGaussToTesla * std::sqrt(t_m * kMicrosecToSec);
  return {dB, dB * kGaussToTesla, eta, eta / timing.C, t_m, n_trials, ps, p.tau};
}

SensitivityResult sensitivity_ramsey(double tau, double B, double T2_star,
                                     const TimingBudget& timing, const PhysConstants& c) {
  timing.validate();
  const double dB = delta_B_ramsey(tau, B, T2_star, c);
  const double t_m = timing.t_i + tau + timing.t_p;
  const double eta = dB * kGaussToTesla * std::sqrt(t_m * kMicrosecToSec);
  return {dB, dB * kGaussToTesla, eta, eta / timing.C, t_m, 1.0, 1.0, tau};
}

double classical_fisher(const std::function<std::vector<double>(double)>& prob_fn,
                        double B, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("h must be > 0");
  const std::array<double, 4> shifts{-2.0 * h, -h, h, 2.0 * h};
  std::vector<std::vector<double>> at;
  at.reserve(4);
  for (double s : shifts) at.push_back(prob_fn(B + s));
  const std::vector<double> center = prob_fn(B);
  for (const auto& dist : {at[0], at[1], center, at[2], at[3]}) {
    double sum = 0.0;
    for (double v : dist) sum += v;
    if (std::abs(sum - 1.0) > 1e-10)
      throw numeric_error("outcome distribution not normalized");
  }
  double fi = 0.0;
  for (std::size_t i = 0; i < center.size(); ++i) {
    if (center[i] < 1e-12) continue;
    const double d =
        (at[0][i] - 8.0 * at[1][i] + 8.0 * at[2][i] - at[3][i]) / (12.0 * h);
    fi += d * d / center[i];
  }
  return fi;
}

double fisher_postselection_statistics(const ProtocolParams& p) {
  const double ps = success_probability(p);
  const double geB = p.consts.gamma_e * p.B;
  const double du = -(geB + p.A_zz / 2.0), dd = -(geB - p.A_zz / 2.0);
  const double q = std::isinf(p.T2_star) ? 1.0 : std::exp(-p.tau / p.T2_star);
  const double ss = std::sin(p.theta_f) * std::sin(p.theta_i);
  const double cu = std::cos(p.alpha / 2.0) * std::cos(p.alpha / 2.0);
  const double dps = q * ss / 2.0 * p.consts.gamma_e * p.tau *
                     (cu * std::sin(du * p.tau) + (1.0 - cu) * std::sin(dd * p.tau));
  if (ps <= 1e-12 || ps >= 1.0 - 1e-12) {
    if (std::abs(dps) < 1e-9) return 0.0;  // 0/0 family resolves to 0
    throw numeric_error("degenerate post-selection statistics");
  }
  return dps * dps / (ps * (1.0 - ps));
}

double qfi_pure(const std::function<Vec(double)>& state_fn, double B, double h) {
  const Vec plus = state_fn(B + h), minus = state_fn(B - h), center = state_fn(B);
  for (const Vec* v : {&plus, &minus, &center})
    if (std::abs(v->norm() - 1.0) > 1e-9)
      throw numeric_error("state_fn norm drift");
  const Vec d = (plus - minus) / (2.0 * h);
  const double dd = d.squaredNorm();
  const cplx overlap = center.dot(d);
  return 4.0 * (dd - std::norm(overlap));
}

double qfi_mixed_sld(const std::function<Mat(double)>& rho_fn, double B, double h) {
  const Mat rho = rho_fn(B);
  const Mat drho = (rho_fn(B + h) - rho_fn(B - h)) / (2.0 * h);
  Eigen::SelfAdjointEigenSolver<Mat> es(rho);
  const Eigen::VectorXd pr = es.eigenvalues();
  const Mat V = es.eigenvectors();
  const Mat d_eig = V.adjoint() * drho * V;
  const auto n = rho.rows();
  double fi = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double denom = pr(i) + pr(j);
      if (denom <= 1e-12) continue;  // L_ij set to 0 when p_i = p_j = 0
      const double lij = 2.0;
      fi += pr(i) * std::norm(lij * d_eig(i, j) / denom);
    }
  return fi;
}

double postselection_weighted_fisher(const ProtocolParams& p) {
  if (p.tau <= 0.0) return 0.0;  // no phase accumulated
  const double ps = success_probability(p);
  if (ps <= 0.0) throw numeric_error("post-selection impossible (P_s ~ 0)");
  auto rho_fn = [&p](double B) {
    ProtocolParams q = p;
    q.B = B;
    return post_select_density(protocol_density(q), q.theta_f).first;
  };
  return ps * qfi_mixed_sld(rho_fn, p.B, fd_step(p));
}

double fisher_ramsey(double tau, double B, double T2_star, const PhysConstants& c) {
  const double q = std::isinf(T2_star) ? 1.0 : std::exp(-tau / T2_star);
  const double x = c.gamma_e * B * tau;
  const double ge_tau = c.gamma_e * tau;
  const double denom = 1.0 - q * q * std::cos(x) * std::cos(x);
  if (denom < 1e-30) return ge_tau * ge_tau;  // lossless limit, sin^2 cancels
  const double s = std::sin(x);
  return q * q * ge_tau * ge_tau * s * s / denom;
}

FisherReport fisher_report(const ProtocolParams& p) {
  FisherReport r{};
  const double h = fd_step(p);
  auto prob_fn = [&p](double B) {
    ProtocolParams q = p;
    q.B = B;
    const double m = signal_Iz(q);
    return std::vector<double>{0.5 + m, 0.5 - m};
  };
  r.F_classical = classical_fisher(prob_fn, p.B, h);
  r.F_ps = fisher_postselection_statistics(p);
  auto state_fn = [&p](double B) {
    ProtocolParams q = p;
    q.B = B;
    return evolve_free(pre_selected_state(q.alpha, q.theta_i), q.tau, q);
  };
  r.F_Q_probe = qfi_pure(state_fn, p.B, h);
  r.F_Q_post = postselection_weighted_fisher(p);
  r.F_ramsey = fisher_ramsey(p.tau, p.B, p.T2_star, p.consts);
  return r;
}

}  // namespace nvmag
