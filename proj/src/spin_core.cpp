#include "nvmag/spin_core.hpp"

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

namespace nvmag {

namespace {
const cplx kI{0.0, 1.0};
}

double hermiticity_defect(const Mat& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

const SpinOperators& SpinOperators::get() {
  static const SpinOperators ops = [] {
    SpinOperators o;
    const double s = 1.0 / std::sqrt(2.0);
    o.Sz = Mat::Zero(3, 3);
    o.Sz.diagonal() << 1.0, 0.0, -1.0;
    o.Sx = Mat::Zero(3, 3);
    o.Sx(0, 1) = o.Sx(1, 0) = o.Sx(1, 2) = o.Sx(2, 1) = s;
    o.Sy = Mat::Zero(3, 3);
    o.Sy(0, 1) = -kI * s;
    o.Sy(1, 0) = kI * s;
    o.Sy(1, 2) = -kI * s;
    o.Sy(2, 1) = kI * s;
    o.Splus = o.Sx + kI * o.Sy;

    o.Iz = Mat::Zero(2, 2);
    o.Iz.diagonal() << 0.5, -0.5;
    o.Ix = Mat::Zero(2, 2);
    o.Ix(0, 1) = o.Ix(1, 0) = 0.5;
    o.Iy = Mat::Zero(2, 2);
    o.Iy(0, 1) = -0.5 * kI;
    o.Iy(1, 0) = 0.5 * kI;
    o.Iplus = o.Ix + kI * o.Iy;

    o.Sz2 = Mat::Zero(2, 2);
    o.Sz2.diagonal() << 0.0, -1.0;
    return o;
  }();
  return ops;
}

Mat build_lab_hamiltonian(const ProtocolParams& p, const DriveParams& drive, double t) {
  p.validate();
  drive.validate();
  if (t < 0.0) throw std::invalid_argument("t must be >= 0");
  const auto& op = SpinOperators::get();
  const Mat I3 = Mat::Identity(3, 3);
  const Mat I2 = Mat::Identity(2, 2);
  const double Btot = p.B_z + p.B;

  Mat H = p.consts.D * kroneckerProduct(Mat(op.Sz * op.Sz), I2) +
          p.consts.gamma_e * Btot * kroneckerProduct(op.Sz, I2) +
          p.consts.gamma_c * Btot * kroneckerProduct(I3, op.Iz) +
          p.A_zz * kroneckerProduct(op.Sz, op.Iz) +
          std::sqrt(2.0) * drive.Omega_e * std::cos(drive.omega_e * t) *
              kroneckerProduct(op.Sx, I2) +
          2.0 * drive.Omega_c0 * std::cos(drive.omega_c * t) *
              kroneckerProduct(I3, op.Ix);
  if (H.rows() != 6 || H.cols() != 6)
    throw numeric_error("internal error: lab Hamiltonian is not 6x6");
  return H;
}

Mat build_rotating_frame_hamiltonian(const ProtocolParams& p, const DriveParams& drive) {
  p.validate();
  drive.validate();
  const double D = p.consts.D, ge = p.consts.gamma_e, gc = p.consts.gamma_c;
  const double tol = 1e-9 * std::max(1.0, D);
  if (std::abs(drive.omega_e - (-D + ge * p.B_z)) > tol ||
      std::abs(drive.omega_c - gc * p.B_z) > tol)
    throw config_error(
        "rotating frame requires omega_e = -D + gamma_e*B_z and omega_c = gamma_c*B_z");

  const double B = p.B, A = p.A_zz;
  Mat H = Mat::Zero(6, 6);
  H(0, 0) = A + 4.0 * D + (2.0 * ge + gc) * B;
  H(1, 1) = -A + 4.0 * D + (2.0 * ge - gc) * B;
  H(2, 2) = gc * B;
  H(3, 3) = -gc * B;
  H(4, 4) = -A + (gc - 2.0 * ge) * B;
  H(5, 5) = A - (gc + 2.0 * ge) * B;
  H(2, 3) = H(3, 2) = drive.Omega_c0;
  H(2, 4) = H(4, 2) = drive.Omega_e;
  H(3, 5) = H(5, 3) = drive.Omega_e;
  return 0.5 * H;
}

Mat truncate_to_submanifold(const Mat& H6) {
  if (H6.rows() != 6 || H6.cols() != 6)
    throw std::invalid_argument("expected a 6x6 Hamiltonian");
  return H6.block(2, 2, 4, 4);
}

std::pair<double, double> detunings(const ProtocolParams& p) {
  const double ge = p.consts.gamma_e, gc = p.consts.gamma_c;
  const double up = -ge * p.B - p.A_zz / 2.0 + gc * p.B / 2.0;
  const double dn = -ge * p.B + p.A_zz / 2.0 - gc * p.B / 2.0;
  return {up, dn};
}

Mat propagator(const Mat& H, double t) {
  const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  if (hermiticity_defect(H) > 1e-10 * scale)
    throw numeric_error("propagator requires a Hermitian Hamiltonian");
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  const Eigen::VectorXd lam = es.eigenvalues();
  Vec phases(lam.size());
  for (Eigen::Index k = 0; k < lam.size(); ++k)
    phases(k) = std::exp(-kI * lam(k) * t);
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace nvmag
