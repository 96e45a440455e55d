#include "nvmag/protocol.hpp"

#include <cmath>

namespace nvmag {

namespace {

const cplx kI{0.0, 1.0};
constexpr double kPsFloor = 1e-15;

/// Effective phase detunings of the |1> branch relative to the |0> branch
/// once the nuclear Zeeman phases are folded in; gamma_c cancels exactly.
std::pair<double, double> effective_detunings(const ProtocolParams& p) {
  const double geB = p.consts.gamma_e * p.B;
  return {-(geB + p.A_zz / 2.0), -(geB - p.A_zz / 2.0)};
}

double damping(const ProtocolParams& p) {
  return std::isinf(p.T2_star) ? 1.0 : std::exp(-p.tau / p.T2_star);
}

}  // namespace

Vec pre_selected_state(double alpha, double theta_i) {
  const double ce = std::cos(theta_i / 2.0), se = std::sin(theta_i / 2.0);
  const double cn = std::cos(alpha / 2.0), sn = std::sin(alpha / 2.0);
  Vec psi(4);
  psi << se * cn, se * sn, ce * cn, ce * sn;
  return psi;
}

Vec evolve_free(const Vec& state, double tau, const ProtocolParams& p) {
  if (state.size() != 4) throw std::invalid_argument("expected a 4-dim state");
  const auto [du, dd] = detunings(p);
  const double zn = p.consts.gamma_c * p.B * tau / 2.0;
  Vec out(4);
  out(0) = state(0) * std::exp(-kI * zn);
  out(1) = state(1) * std::exp(kI * zn);
  out(2) = state(2) * std::exp(-kI * du * tau);
  out(3) = state(3) * std::exp(-kI * dd * tau);
  return out;
}

PostSelectionOutcome post_select(const Vec& state, double theta_f) {
  if (state.size() != 4) throw std::invalid_argument("expected a 4-dim state");
  const double c = std::cos(theta_f / 2.0), s = std::sin(theta_f / 2.0);
  Eigen::Vector2cd phi;
  phi << s * state(0) + c * state(2), s * state(1) + c * state(3);
  const double ps = phi.squaredNorm();
  if (ps < kPsFloor) throw numeric_error("post-selection impossible (P_s ~ 0)");
  return {phi / std::sqrt(ps), ps};
}

std::pair<Mat, double> post_select_density(const Mat& rho, double theta_f) {
  if (rho.rows() != 4 || rho.cols() != 4)
    throw std::invalid_argument("expected a 4x4 density matrix");
  const double c = std::cos(theta_f / 2.0), s = std::sin(theta_f / 2.0);
  Mat K = Mat::Zero(2, 4);  // <psi_f| x 1 on the nuclear factor
  K(0, 0) = s;
  K(0, 2) = c;
  K(1, 1) = s;
  K(1, 3) = c;
  Mat rho_post = K * rho * K.adjoint();
  const double ps = rho_post.trace().real();
  if (ps < kPsFloor) throw numeric_error("post-selection impossible (P_s ~ 0)");
  return {rho_post / ps, ps};
}

Mat protocol_density(const ProtocolParams& p) {
  const Vec psi = evolve_free(pre_selected_state(p.alpha, p.theta_i), p.tau, p);
  Mat rho = psi * psi.adjoint();
  const double q = damping(p);
  rho.block(0, 2, 2, 2) *= q;  // |0><1| electron coherence block
  rho.block(2, 0, 2, 2) *= q;
  return rho;
}

double success_probability(const ProtocolParams& p) {
  const auto [du, dd] = effective_detunings(p);
  const double cc = std::cos(p.theta_f) * std::cos(p.theta_i);
  const double ss = std::sin(p.theta_f) * std::sin(p.theta_i);
  const double cu = std::cos(p.alpha / 2.0) * std::cos(p.alpha / 2.0);
  const double sd = 1.0 - cu;
  return 0.5 * (1.0 + cc) +
         damping(p) * ss / 2.0 *
             (cu * std::cos(du * p.tau) + sd * std::cos(dd * p.tau));
}

double signal_Iz(const ProtocolParams& p) {
  const double ps = success_probability(p);
  if (ps < kPsFloor) throw numeric_error("post-selection impossible (P_s ~ 0)");
  const auto [du, dd] = effective_detunings(p);
  const double cc = std::cos(p.theta_f) * std::cos(p.theta_i);
  const double ss = std::sin(p.theta_f) * std::sin(p.theta_i);
  const double cu = std::cos(p.alpha / 2.0) * std::cos(p.alpha / 2.0);
  const double sd = 1.0 - cu;
  return (0.25 * (1.0 + cc) * std::cos(p.alpha) +
          damping(p) * ss / 4.0 *
              (cu * std::cos(du * p.tau) - sd * std::cos(dd * p.tau))) /
         ps;
}

double signal_Iz_symmetric(double tau, double B, const ProtocolParams& p) {
  ProtocolParams q = p;
  q.tau = tau;
  q.B = B;
  const double damp = damping(q);
  const double a = q.A_zz * tau / 2.0;
  const double x = q.consts.gamma_e * B * tau;
  const double denom = damp * std::cos(a) * std::cos(x) + 1.0;
  if (std::abs(denom) < 1e-15) throw numeric_error("signal singular");
  return -damp * std::sin(a) * std::sin(x) / (2.0 * denom);
}

double signal_Ix_no_postselection(const ProtocolParams& p) {
  const double ci2 = std::cos(p.theta_i / 2.0) * std::cos(p.theta_i / 2.0);
  const double w = (p.A_zz - p.consts.gamma_c * p.B) * p.tau;
  const double zn = p.consts.gamma_c * p.B * p.tau;  // |0> branch nuclear Zeeman
  return std::sin(p.alpha) * (ci2 * std::cos(w) + (1.0 - ci2) * std::cos(zn));
}

double signal_Iz_no_postselection(const ProtocolParams& p) {
  return std::cos(p.alpha) / 2.0;
}

double ramsey_signal(double tau, double B, double T2_star, const PhysConstants& c) {
  const double q = std::isinf(T2_star) ? 1.0 : std::exp(-tau / T2_star);
  return 0.5 - q * std::cos(c.gamma_e * B * tau) / 2.0;
}

}  // namespace nvmag
