#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>

#include "nvmag/params.hpp"

namespace nvmag {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// max |H - H^dagger| element.
double hermiticity_defect(const Mat& m);

/// Spin operators in the ordering used everywhere:
/// electron basis (|+1>, |0>, |-1>), nuclear basis (|up>, |down>),
/// 6-dim product basis (|+1 up>, |+1 dn>, |0 up>, |0 dn>, |-1 up>, |-1 dn>),
/// 4-dim truncated basis (|0 up>, |0 dn>, |1 up>, |1 dn>) with |1> = m_s = -1.
struct SpinOperators {
  Mat Sz, Sx, Sy, Splus;    // spin-1, 3x3
  Mat Iz, Ix, Iy, Iplus;    // spin-1/2, 2x2
  Mat Sz2;                  // truncated electron S_z on (|0>, |1>), diag(0, -1)

  static const SpinOperators& get();
};

/// Time-dependent 6x6 lab-frame Hamiltonian with cosine drive terms.
Mat build_lab_hamiltonian(const ProtocolParams& p, const DriveParams& drive, double t);

/// Static 6x6 rotating-frame Hamiltonian (RWA). Requires the resonant frame
/// choice omega_e = -D + gamma_e*B_z, omega_c = gamma_c*B_z.
Mat build_rotating_frame_hamiltonian(const ProtocolParams& p, const DriveParams& drive);

/// Project a 6x6 rotating-frame Hamiltonian onto the {m_s = 0, -1} manifold.
Mat truncate_to_submanifold(const Mat& H6);

/// (delta_1_up, delta_1_down): detunings of the |1 up>, |1 dn> levels, rad/us.
std::pair<double, double> detunings(const ProtocolParams& p);

/// exp(-i H t) for Hermitian H, via eigendecomposition.
Mat propagator(const Mat& H, double t);

}  // namespace nvmag
