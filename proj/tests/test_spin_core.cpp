#include <doctest.h>

#include <unsupported/Eigen/KroneckerProduct>

#include "nvmag/spin_core.hpp"

using namespace nvmag;

namespace {

const cplx kI{0.0, 1.0};

/// Independent matrix exponential oracle: scaling and squaring + Taylor.
Mat expm_oracle(const Mat& A) {
  int s = 0;
  double norm = A.cwiseAbs().sum();
  while (norm > 0.5) {
    norm /= 2.0;
    ++s;
  }
  const Mat B = A / std::pow(2.0, s);
  Mat term = Mat::Identity(A.rows(), A.cols());
  Mat sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * B / double(k);
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

}  // namespace

TEST_CASE("spin operator algebra") {
  const auto& op = SpinOperators::get();
  CHECK(((op.Sx * op.Sy - op.Sy * op.Sx) - kI * op.Sz).cwiseAbs().maxCoeff() ==
        doctest::Approx(0.0).epsilon(1e-14));
  CHECK(((op.Ix * op.Iy - op.Iy * op.Ix) - kI * op.Iz).cwiseAbs().maxCoeff() ==
        doctest::Approx(0.0).epsilon(1e-14));
  // spin-1 Casimir S^2 = 2
  const Mat s2 = op.Sx * op.Sx + op.Sy * op.Sy + op.Sz * op.Sz;
  CHECK((s2 - 2.0 * Mat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(op.Sz2(0, 0) == cplx(0.0, 0.0));
  CHECK(op.Sz2(1, 1) == cplx(-1.0, 0.0));
}

TEST_CASE("lab Hamiltonian is Hermitian and 6x6") {
  ProtocolParams p;
  p.B_z = 100.0;
  const DriveParams d = DriveParams::resonant(p, kTwoPi * 0.05, kTwoPi * 0.02);
  for (double t : {0.0, 0.123, 1.7}) {
    const Mat H = build_lab_hamiltonian(p, d, t);
    CHECK(H.rows() == 6);
    CHECK(hermiticity_defect(H) < 1e-12 * H.cwiseAbs().maxCoeff());
  }
  CHECK_THROWS_AS(build_lab_hamiltonian(p, d, -1.0), std::invalid_argument);
}

TEST_CASE("rotating frame rejects off-resonant frame frequencies") {
  ProtocolParams p;
  DriveParams d = DriveParams::resonant(p, 0.0, 0.0);
  d.omega_e += 1.0;
  CHECK_THROWS_AS(build_rotating_frame_hamiltonian(p, d), config_error);
}

TEST_CASE("rotating frame equals the time-averaged transformed lab Hamiltonian") {
  // Commensurate custom constants so one common period covers both frame
  // frequencies exactly: |omega_e| = 2 pi 70, omega_c = 2 pi 1 (1/us).
  ProtocolParams p;
  p.consts.D = kTwoPi * 100.0;
  p.consts.gamma_e = kTwoPi * 3.0;
  p.consts.gamma_c = kTwoPi * 0.1;
  p.B_z = 10.0;
  p.B = 0.01;
  p.A_zz = kTwoPi * 0.5;
  const double Oe = kTwoPi * 0.05, Oc = kTwoPi * 0.02;
  const DriveParams d = DriveParams::resonant(p, Oe, Oc);
  const Mat H_rwa = build_rotating_frame_hamiltonian(p, d);

  const auto& op = SpinOperators::get();
  const Mat G = d.omega_e * kroneckerProduct(op.Sz, Mat::Identity(2, 2)) +
                d.omega_c * kroneckerProduct(Mat::Identity(3, 3), op.Iz);
  // N prime and larger than every harmonic of the integrand makes the
  // uniform average over one period exact up to rounding
  const int N = 1009;
  const double T = 1.0;
  Mat avg = Mat::Zero(6, 6);
  for (int j = 0; j < N; ++j) {
    const double t = T * double(j) / double(N);
    const Mat V = expm_oracle(-kI * t * G);
    avg += V.adjoint() * build_lab_hamiltonian(p, d, t) * V - G;
  }
  avg /= double(N);

  // the (0,-1) manifold: everything the protocol uses
  Mat diff = truncate_to_submanifold(avg) - truncate_to_submanifold(H_rwa);
  // secular term dropped from the reference matrix: the nuclear drive inside
  // the m_s = -1 manifold, detuned by A_zz
  CHECK(std::abs(diff(2, 3) - Oc / 2.0) < 1e-8);
  CHECK(std::abs(diff(3, 2) - Oc / 2.0) < 1e-8);
  diff(2, 3) = diff(3, 2) = 0.0;
  CHECK(diff.cwiseAbs().maxCoeff() < 1e-8);
  // counter-rotating pieces average away in the diagonal entries exactly
  for (int i = 0; i < 6; ++i)
    CHECK(std::abs(avg(i, i) - H_rwa(i, i)) < 1e-8);
}

TEST_CASE("propagator matches the series expm and stays unitary to t = 1e4") {
  ProtocolParams p;
  const DriveParams d = DriveParams::resonant(p, kTwoPi * 0.1, kTwoPi * 0.03);
  const Mat H = build_rotating_frame_hamiltonian(p, d);
  const Mat H4 = truncate_to_submanifold(H);
  for (double t : {0.1, 2.5}) {
    const Mat U = propagator(H4, t);
    const Mat U_ref = expm_oracle(-kI * t * H4);
    CHECK((U - U_ref).cwiseAbs().maxCoeff() < 1e-11);
  }
  const Mat U = propagator(H4, 1e4);
  CHECK((U * U.adjoint() - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);

  Mat bad = H4;
  bad(0, 1) += cplx(0.0, 1.0);
  bad(1, 0) += cplx(0.0, 1.0);  // breaks Hermiticity
  CHECK_THROWS_AS(propagator(bad, 1.0), numeric_error);
}

TEST_CASE("detunings carry the hyperfine and Zeeman shifts") {
  ProtocolParams p;
  const auto [du, dd] = detunings(p);
  const double ge = p.consts.gamma_e, gc = p.consts.gamma_c;
  CHECK(du == doctest::Approx(-ge * p.B - p.A_zz / 2 + gc * p.B / 2).epsilon(1e-14));
  CHECK(dd == doctest::Approx(-ge * p.B + p.A_zz / 2 - gc * p.B / 2).epsilon(1e-14));
  // they must match the truncated rotating-frame diagonal
  const Mat H4 =
      truncate_to_submanifold(build_rotating_frame_hamiltonian(p, DriveParams::resonant(p, 0, 0)));
  CHECK(std::abs(H4(2, 2).real() - du) < 1e-12);
  CHECK(std::abs(H4(3, 3).real() - dd) < 1e-12);
}
