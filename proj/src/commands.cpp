#include "nvmag/commands.hpp"

#include <cmath>
#include <cstdio>

namespace nvmag {

namespace {

constexpr double kTeslaToNano = 1e9;

const Range& require_range(const std::optional<Range>& r, const char* what) {
  if (!r) throw config_error(std::string(what) + " must be a {min,max,points} range");
  return *r;
}

void require_scalar(const std::optional<Range>& r, const char* what) {
  if (r) throw config_error(std::string(what) + " must be a scalar here");
}

void scale_column(SweepResult& t, const std::string& name, double factor,
                  const std::string& new_name) {
  for (std::size_t c = 0; c < t.columns.size(); ++c)
    if (t.columns[c] == name) {
      for (auto& row : t.rows) row[c] *= factor;
      t.columns[c] = new_name;
      return;
    }
  throw std::logic_error("column not found: " + name);
}

Mat nuclear_Iz2() {
  Mat iz(2, 2);
  iz << 0.5, 0.0, 0.0, -0.5;
  return iz;
}

}  // namespace

SweepResult cmd_signal(const ExperimentConfig& cfg) {
  const Range& taus = require_range(cfg.tau_range, "protocol.tau");
  require_scalar(cfg.B_range, "physics.B");
  require_scalar(cfg.T2_range, "physics.T2_star");
  const Mat iz = nuclear_Iz2();
  SweepResult out;
  out.columns = {"tau", "Iz_postselected", "Ps", "Iz_symmetric_closed_form",
                 "ramsey_signal"};
  for (double t : taus.grid()) {
    ProtocolParams p = cfg.base;
    p.tau = t;
    const auto [rho_post, ps] = post_select_density(protocol_density(p), p.theta_f);
    const double m = (rho_post * iz).trace().real();
    out.rows.push_back({t, m, ps, signal_Iz_symmetric(t, p.B, p),
                        ramsey_signal(t, p.B, p.T2_star, p.consts)});
  }
  out.metadata["units"] = "tau us; B G";
  return out;
}

SweepResult cmd_sensitivity(const ExperimentConfig& cfg) {
  require_scalar(cfg.B_range, "physics.B");
  if (cfg.T2_range) {
    SweepResult out = sweep_T2star(*cfg.T2_range, cfg.base.B);
    scale_column(out, "eta_ramsey", kTeslaToNano, "eta_ramsey_nT");
    scale_column(out, "eta_c13", kTeslaToNano, "eta_c13_nT");
    scale_column(out, "eta_n15", kTeslaToNano, "eta_n15_nT");
    out.metadata["units"] = "T2_star us; eta nT Hz^-1/2; tau us";
    return out;
  }
  require_scalar(cfg.tau_range, "protocol.tau");
  const SensitivityResult s = sensitivity(cfg.base, cfg.timing);
  SweepResult out;
  out.columns = {"tau", "B", "T2_star", "P_s", "N", "t_m_us",
                 "delta_B_G", "eta_nT", "eta_C_nT"};
  out.rows.push_back({s.tau, cfg.base.B, cfg.base.T2_star, s.P_s, s.N, s.t_m_us,
                      s.delta_B_G, s.eta * kTeslaToNano, s.eta_C * kTeslaToNano});
  out.metadata["units"] = "tau us; B G; eta nT Hz^-1/2";
  return out;
}

SweepResult cmd_noise_compare(const ExperimentConfig& cfg) {
  if (cfg.noise.model != "ou")
    throw config_error("noise-compare needs noise.model = ou");
  if (std::isinf(cfg.base.T2_star))
    throw config_error("noise-compare needs a finite physics.T2_star");
  require_scalar(cfg.tau_range, "protocol.tau");
  const OrnsteinUhlenbeck model = OrnsteinUhlenbeck::from_T2star(
      cfg.base.T2_star, cfg.noise.tau_c, cfg.noise.dt, cfg.noise.seed,
      cfg.base.consts.gamma_e);

  std::vector<double> ts(cfg.noise.points);
  for (std::size_t i = 0; i < ts.size(); ++i)
    ts[i] = cfg.noise.t_max * double(i + 1) / double(ts.size());

  // Markov-limit coherence decay rate of the OU bath; the naive
  // rate-equals-1/T2* dissipator differs by the factor 2 tau_c / T2*.
  const double gamma_coh = ou_markov_gamma(cfg.base.T2_star, cfg.noise.tau_c) / 2.0;
  ProtocolParams markov = cfg.base;
  markov.T2_star = 1.0 / gamma_coh;

  ProtocolParams mc = cfg.base;
  mc.T2_star = kInf;  // in the trajectory picture the bath is the dephasing
  const MonteCarloResult ou = monte_carlo_signal(
      mc, model, cfg.noise.n_traj, Observable::IzPostSelected, ts);

  SweepResult out;
  out.columns = {"t", "Iz_markov", "Iz_ou_mean", "Iz_ou_stderr"};
  for (std::size_t i = 0; i < ts.size(); ++i) {
    markov.tau = ts[i];
    out.rows.push_back({ts[i], signal_Iz(markov), ou.mean[i], ou.std_error[i]});
  }
  char rate[40];
  std::snprintf(rate, sizeof(rate), "%.12g", gamma_coh);
  out.metadata["markov_coherence_rate_per_us"] = rate;
  out.metadata["note"] =
      "Markov rate 2*tau_c/T2star^2 (OU limit); a bare 1/T2star dissipator "
      "overdamps by T2star/(2*tau_c)";
  out.metadata["units"] = "t us";
  return out;
}

SweepResult cmd_fisher(const ExperimentConfig& cfg) {
  const Range& taus = require_range(cfg.tau_range, "protocol.tau");
  require_scalar(cfg.B_range, "physics.B");
  require_scalar(cfg.T2_range, "physics.T2_star");
  SweepResult out = fisher_vs_time(taus, cfg.base);
  out.metadata["units"] = "tau us; Fisher information in G^-2";
  return out;
}

SweepResult cmd_ratio_map(const ExperimentConfig& cfg) {
  const Range& t2s = require_range(cfg.T2_range, "physics.T2_star");
  const Range& bs = require_range(cfg.B_range, "physics.B");
  SweepResult out = ratio_map(t2s, bs);
  out.metadata["units"] = "T2_star us; B G; ratio eta_post/eta_ramsey";
  return out;
}

SweepResult cmd_sweep_b(const ExperimentConfig& cfg) {
  const Range& bs = require_range(cfg.B_range, "physics.B");
  require_scalar(cfg.tau_range, "protocol.tau");
  SweepResult out = sweep_B_fixed_tau(bs, cfg.base.tau, cfg.base, cfg.timing);
  scale_column(out, "eta", kTeslaToNano, "eta_nT");
  out.metadata["units"] = "B G; eta nT Hz^-1/2";
  return out;
}

SweepResult run_command(const std::string& name, const ExperimentConfig& cfg) {
  if (name == "signal") return cmd_signal(cfg);
  if (name == "sensitivity") return cmd_sensitivity(cfg);
  if (name == "noise-compare") return cmd_noise_compare(cfg);
  if (name == "fisher") return cmd_fisher(cfg);
  if (name == "ratio-map") return cmd_ratio_map(cfg);
  if (name == "sweep-b") return cmd_sweep_b(cfg);
  throw config_error("unknown command '" + name + "'");
}

}  // namespace nvmag
