#pragma once

#include <functional>
#include <vector>

#include "nvmag/protocol.hpp"

namespace nvmag {

/// Sequence time costs (us) and readout efficiency.
struct TimingBudget {
  double t_i;  // initialization
  double t_p;  // post-selection / NV readout
  double t_r;  // nuclear readout
  double C = 1.0;

  static TimingBudget c13_cryo() { return {6.0, 3.7, 5.7, 1.0}; }
  static TimingBudget n15_cryo() { return {1.0, 3.7, 4.2, 1.0}; }
  static TimingBudget room_temp() { return {1.0, 5000.0, 8000.0, 0.707}; }
  static TimingBudget ramsey() { return {1.0, 3.7, 0.0, 1.0}; }

  void validate() const {
    if (t_i < 0.0 || t_p < 0.0 || t_r < 0.0) throw config_error("times must be >= 0");
    if (!(C > 0.0 && C <= 1.0)) throw config_error("C must be in (0, 1]");
  }
};

struct SensitivityResult {
  double delta_B_G;   // standard deviation of the field, G
  double delta_B_T;   // same in Tesla
  double eta;         // T Hz^-1/2
  double eta_C;       // eta / C
  double t_m_us;      // total sequence time
  double N;           // mean trials 1/P_s (1 for Ramsey)
  double P_s;
  double tau;
};

struct FisherReport {
  double F_classical;  // FI of the +-1/2 readout on the post-selected state
  double F_ps;         // FI of the success/fail statistics
  double F_Q_probe;    // QFI of the probe state |Psi_1>
  double F_Q_post;     // P_s-weighted QFI of the post-selected state
  double F_ramsey;
};

/// sqrt(<Iz^2> - <Iz>^2) = sqrt(1/4 - mean^2) for a spin-1/2.
double delta_Iz(double mean);

enum class DerivativeMethod { Analytic, FiniteDifference };

/// d<Iz>/dB of the closed-form signal. Analytic is available for the
/// symmetric alpha = theta_i = theta_f = pi/2 configuration.
double dIz_dB(const ProtocolParams& p, DerivativeMethod method);

/// Minimum detectable field Delta B = Delta Iz / |d<Iz>/dB|, in G.
double delta_B(const ProtocolParams& p,
               DerivativeMethod method = DerivativeMethod::FiniteDifference);

/// Ramsey two-outcome counterpart, Delta Sz = sqrt(p(1-p)).
double delta_B_ramsey(double tau, double B, double T2_star,
                      const PhysConstants& c = PhysConstants::nv());

/// eta = Delta B sqrt(t_m) with t_m = (t_i + tau + t_p)/P_s + t_r.
SensitivityResult sensitivity(const ProtocolParams& p, const TimingBudget& timing);

/// Ramsey variant, t_m = t_i + tau + t_p.
SensitivityResult sensitivity_ramsey(double tau, double B, double T2_star,
                                     const TimingBudget& timing,
                                     const PhysConstants& c = PhysConstants::nv());

/// Classical Fisher information sum_i (d_B P_i)^2 / P_i by central differences.
double classical_fisher(const std::function<std::vector<double>(double)>& prob_fn,
                        double B, double h);

/// Binary success/fail FI, (d_B P_s)^2 / (P_s (1 - P_s)); the P_s -> 1,
/// d_B P_s -> 0 corner resolves to 0.
double fisher_postselection_statistics(const ProtocolParams& p);

/// Pure-state QFI 4<d psi|d psi> - 4|<psi|d psi>|^2 with central differences.
double qfi_pure(const std::function<Vec(double)>& state_fn, double B, double h);

/// Mixed-state QFI via the symmetric logarithmic derivative.
double qfi_mixed_sld(const std::function<Mat(double)>& rho_fn, double B, double h);

/// P_s * QFI(|phi_post>), the post-selected state taken lossless after selection.
double postselection_weighted_fisher(const ProtocolParams& p);

/// Two-outcome Ramsey FI; equals (gamma_e tau)^2 when lossless.
double fisher_ramsey(double tau, double B, double T2_star,
                     const PhysConstants& c = PhysConstants::nv());

FisherReport fisher_report(const ProtocolParams& p);

/// Finite-difference field step chosen so that gamma_e*h*tau ~ 1e-6 rad.
double fd_step(const ProtocolParams& p);

}  // namespace nvmag
