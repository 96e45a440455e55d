#pragma once

#include <cmath>
#include <limits>
#include <numbers>

#include "nvmag/errors.hpp"

namespace nvmag {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Ordinary frequency (MHz-family, i.e. 1/us) -> angular frequency (rad/us).
inline double to_angular(double f) { return kTwoPi * f; }
inline double from_angular(double w) { return w / kTwoPi; }

/// Physical constants. User-facing values are ordinary frequencies;
/// everything stored here is angular (rad/us, rad/(us*G)).
struct PhysConstants {
  double D = to_angular(2870.0);          // zero-field splitting, 2.87 GHz
  double gamma_e = to_angular(2.8);       // electron, 2.8 MHz/G
  double gamma_c = to_angular(1.07e-3);   // 13C nucleus, 1.07 kHz/G

  static PhysConstants nv() { return {}; }

  void validate() const {
    if (!(gamma_e > gamma_c && gamma_c > 0.0))
      throw config_error("require gamma_e > gamma_c > 0");
    if (!(D > 0.0)) throw config_error("require D > 0");
  }
};

enum class Species { C13, N15, Custom };

/// Hyperfine couplings quoted in the usual ordinary-frequency units.
inline double default_A_zz(Species s) {
  switch (s) {
    case Species::C13: return to_angular(0.5);    // 500 kHz
    case Species::N15: return to_angular(3.03);   // 3.03 MHz
    default: throw config_error("custom species needs an explicit A_zz");
  }
}

/// All physical and control parameters of the pre/post-selection protocol.
/// Angles in rad, times in us, fields in G, A_zz in rad/us.
struct ProtocolParams {
  double alpha = std::numbers::pi / 2;
  double theta_i = std::numbers::pi / 2;
  double theta_f = std::numbers::pi / 2;
  double tau = 1.0;
  double B = 0.01;
  double B_z = 0.0;
  double A_zz = default_A_zz(Species::C13);
  double T2_star = kInf;
  Species species = Species::C13;
  PhysConstants consts{};

  static ProtocolParams c13() { return {}; }
  static ProtocolParams n15() {
    ProtocolParams p;
    p.species = Species::N15;
    p.A_zz = default_A_zz(Species::N15);
    return p;
  }

  void validate() const {
    consts.validate();
    if (!(tau >= 0.0)) throw config_error("tau must be >= 0");
    if (!(T2_star > 0.0)) throw config_error("T2_star must be > 0");
    if (!std::isfinite(alpha) || !std::isfinite(theta_i) || !std::isfinite(theta_f))
      throw config_error("rotation angles must be finite");
    if (!std::isfinite(B) || !std::isfinite(B_z))
      throw config_error("fields must be finite");
  }

  /// Weak-field regime check: the closed-form signals assume gamma_c*B*tau << 1.
  bool weak_field_ok() const { return consts.gamma_c * std::abs(B) * tau < 1e-2; }

  double dephasing_rate() const { return std::isinf(T2_star) ? 0.0 : 1.0 / T2_star; }
};

/// MW/RF drive parameters, angular units (rad/us).
struct DriveParams {
  double Omega_e = 0.0;    // electron Rabi frequency
  double Omega_c0 = 0.0;   // nuclear Rabi frequency
  double omega_e = 0.0;    // MW drive frequency
  double omega_c = 0.0;    // RF drive frequency

  /// Frame frequencies used throughout: omega_e = -D + gamma_e*B_z, omega_c = gamma_c*B_z.
  static DriveParams resonant(const ProtocolParams& p, double Omega_e, double Omega_c0) {
    return {Omega_e, Omega_c0, -p.consts.D + p.consts.gamma_e * p.B_z,
            p.consts.gamma_c * p.B_z};
  }

  void validate() const {
    if (Omega_e < 0.0 || Omega_c0 < 0.0)
      throw config_error("Rabi frequencies must be >= 0");
  }

  /// A_zz caps the nuclear control speed (power broadening).
  bool power_broadening_ok(double A_zz) const { return Omega_c0 < A_zz; }
};

}  // namespace nvmag
