#pragma once

#include <utility>

#include "nvmag/spin_core.hpp"

namespace nvmag {

/// Result of projecting the electron onto the post-selection target |psi_f>.
struct PostSelectionOutcome {
  Eigen::Vector2cd nuclear_state;  // normalized |phi_post>
  double success_probability;     // P_s in [0, 1]
};

/// Product state R1(theta_i) R2(alpha) |0 dn> in the 4-dim ordering
/// (|0 up>, |0 dn>, |1 up>, |1 dn>).
Vec pre_selected_state(double alpha, double theta_i);

/// Free evolution for tau under the drive-off rotating-frame Hamiltonian:
/// phases exp(-i delta_up tau), exp(-i delta_dn tau) on the |1> branch and
/// exp(-+i gamma_c B tau / 2) on the |0> branch.
Vec evolve_free(const Vec& state, double tau, const ProtocolParams& p);

/// Project onto <psi_f| = cos(theta_f/2)<1| + sin(theta_f/2)<0| on the electron.
PostSelectionOutcome post_select(const Vec& state, double theta_f);

/// Density-matrix variant: rho_post = <psi_f| rho |psi_f>, P_s = Tr rho_post.
std::pair<Mat, double> post_select_density(const Mat& rho, double theta_f);

/// Joint density matrix after free evolution for p.tau, with the electron
/// coherence blocks damped by exp(-tau/T2*). Exact solution of the pure
/// dephasing master equation for the drive-off (diagonal) Hamiltonian.
Mat protocol_density(const ProtocolParams& p);

/// Closed-form success probability. The nuclear Zeeman phases of the |0>
/// branch cancel the gamma_c B/2 pieces of the detunings exactly, so the
/// field enters only through gamma_e B +- A_zz/2; with finite T2* the
/// interference term is damped by exp(-tau/T2*).
double success_probability(const ProtocolParams& p);

/// Closed-form post-selected signal <I_z>.
double signal_Iz(const ProtocolParams& p);

/// Symmetric-angle (alpha = theta_i = theta_f = pi/2) closed form,
/// -sin(A tau/2) sin(gamma_e B tau) / [2 (cos(A tau/2) cos(gamma_e B tau) + 1)].
double signal_Iz_symmetric(double tau, double B, const ProtocolParams& p);

/// No-post-selection meter signal <sigma_x> = 2<I_x> (Pauli convention);
/// <I_z> = cos(alpha)/2 carries no field information in this case.
double signal_Ix_no_postselection(const ProtocolParams& p);
double signal_Iz_no_postselection(const ProtocolParams& p);

/// Ramsey reference <S_z>_R = 1/2 - exp(-tau/T2*) cos(gamma_e B tau)/2.
double ramsey_signal(double tau, double B, double T2_star,
                     const PhysConstants& c = PhysConstants::nv());

}  // namespace nvmag
