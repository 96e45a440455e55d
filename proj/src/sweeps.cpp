#include "nvmag/sweeps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace nvmag {

namespace {

constexpr double kInfEta = std::numeric_limits<double>::infinity();
const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

double eta_at(double tau, const ProtocolParams& base, const TimingBudget& timing,
              ProtocolKind kind, double ps_floor) {
  if (!(tau > 0.0)) return kInfEta;
  try {
    if (kind == ProtocolKind::Ramsey)
      return sensitivity_ramsey(tau, base.B, base.T2_star, timing, base.consts).eta;
    ProtocolParams p = base;
    p.tau = tau;
    if (success_probability(p) < ps_floor) return kInfEta;
    return sensitivity(p, timing).eta;
  } catch (const numeric_error&) {
    return kInfEta;
  }
}

double golden_section(double a, double b, const std::function<double(double)>& f,
                      int iters) {
  double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < iters; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = f(x2);
    }
  }
  return f1 < f2 ? x1 : x2;
}

}  // namespace

void Range::validate() const {
  if (points < 2) throw config_error("range needs >= 2 points");
  if (!(min < max)) throw config_error("range needs min < max");
  if (log_scale && !(min > 0.0)) throw config_error("log range needs min > 0");
  if (!std::isfinite(min) || !std::isfinite(max))
    throw config_error("range bounds must be finite");
}

std::vector<double> Range::grid() const {
  validate();
  std::vector<double> g(points);
  if (log_scale) {
    const double la = std::log(min), lb = std::log(max);
    for (std::size_t i = 0; i < points; ++i)
      g[i] = std::exp(la + (lb - la) * double(i) / double(points - 1));
    g.back() = max;  // avoid exp/log round-off at the endpoint
  } else {
    for (std::size_t i = 0; i < points; ++i)
      g[i] = min + (max - min) * double(i) / double(points - 1);
    g.back() = max;
  }
  return g;
}

void OptimizerSettings::validate() const {
  if (coarse_points < 400) throw config_error("optimizer needs >= 400 coarse points");
  if (refinements < 0) throw config_error("refinements must be >= 0");
  if (!(ps_floor >= 0.0 && ps_floor < 1.0)) throw config_error("ps_floor out of range");
}

TauOptimum optimize_tau(const ProtocolParams& p, const TimingBudget& timing,
                        const Range& range, ProtocolKind kind,
                        const OptimizerSettings& opt) {
  opt.validate();
  Range search = range;
  search.points = std::max(range.points, opt.coarse_points);
  const std::vector<double> taus = search.grid();
  auto f = [&](double tau) { return eta_at(tau, p, timing, kind, opt.ps_floor); };

  std::size_t best = taus.size();
  double best_eta = kInfEta;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const double e = f(taus[i]);
    if (e < best_eta) {
      best_eta = e;
      best = i;
    }
  }
  if (best == taus.size())
    throw numeric_error("all grid points insensitive in tau search");

  double a = taus[best > 0 ? best - 1 : best];
  double b = taus[std::min(best + 1, taus.size() - 1)];
  double tau_star = taus[best];
  for (int pass = 0; pass < opt.refinements; ++pass) {
    if (!(a < b)) break;
    tau_star = golden_section(a, b, f, 40);
    const double w = (b - a) / 20.0;
    a = std::max(range.min, tau_star - w);
    b = std::min(range.max, tau_star + w);
  }
  const double eta_star = f(tau_star);
  if (eta_star <= best_eta) return {tau_star, eta_star};
  return {taus[best], best_eta};  // keep the coarse argmin if refinement drifted
}

SweepResult sweep_T2star(const Range& t2_range, double B,
                         const OptimizerSettings& opt) {
  const std::vector<double> t2s = t2_range.grid();
  SweepResult out;
  out.columns = {"T2_star", "eta_ramsey", "eta_c13", "eta_n15",
                 "tau_star_ramsey", "tau_star_c13", "tau_star_n15"};
  out.rows.assign(t2s.size(), {});
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long i = 0; i < (long long)t2s.size(); ++i) {
    const double t2 = t2s[i];
    const Range search{1e-3, 5.0 * t2, opt.coarse_points, false};
    ProtocolParams c13 = ProtocolParams::c13();
    ProtocolParams n15 = ProtocolParams::n15();
    c13.B = n15.B = B;
    c13.T2_star = n15.T2_star = t2;
    const TauOptimum r = optimize_tau(c13, TimingBudget::ramsey(), search,
                                      ProtocolKind::Ramsey, opt);
    const TauOptimum pc = optimize_tau(c13, TimingBudget::c13_cryo(), search,
                                       ProtocolKind::PostSelection, opt);
    const TauOptimum pn = optimize_tau(n15, TimingBudget::n15_cryo(), search,
                                       ProtocolKind::PostSelection, opt);
    out.rows[i] = {t2,          r.eta_star, pc.eta_star, pn.eta_star,
                   r.tau_star,  pc.tau_star, pn.tau_star};
  }
  out.metadata["B_G"] = std::to_string(B);
  return out;
}

SweepResult ratio_map(const Range& t2_range, const Range& b_range,
                      const OptimizerSettings& opt) {
  const std::vector<double> t2s = t2_range.grid();
  const std::vector<double> bs = b_range.grid();
  SweepResult out;
  out.columns = {"T2_star", "B", "ratio", "tau_star_post", "tau_star_ramsey"};
  out.rows.assign(t2s.size() * bs.size(), {});
#ifdef _OPENMP
#pragma omp parallel for schedule(static) collapse(2)
#endif
  for (long long i = 0; i < (long long)t2s.size(); ++i)
    for (long long j = 0; j < (long long)bs.size(); ++j) {
      ProtocolParams p = ProtocolParams::n15();
      p.T2_star = t2s[i];
      p.B = bs[j];
      const Range search{1e-3, 5.0 * p.T2_star, opt.coarse_points, false};
      const TauOptimum post = optimize_tau(p, TimingBudget::n15_cryo(), search,
                                           ProtocolKind::PostSelection, opt);
      const TauOptimum ram = optimize_tau(p, TimingBudget::ramsey(), search,
                                          ProtocolKind::Ramsey, opt);
      out.rows[i * bs.size() + j] = {p.T2_star, p.B, post.eta_star / ram.eta_star,
                                     post.tau_star, ram.tau_star};
    }
  return out;
}

SweepResult sweep_B_fixed_tau(const Range& b_range, double tau,
                              const ProtocolParams& base,
                              const TimingBudget& timing) {
  const std::vector<double> bs = b_range.grid();
  SweepResult out;
  out.columns = {"B", "eta", "delta_B_G", "P_s", "t_m_us"};
  out.rows.assign(bs.size(), {});
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long i = 0; i < (long long)bs.size(); ++i) {
    ProtocolParams p = base;
    p.tau = tau;
    p.B = bs[i];
    const SensitivityResult s = sensitivity(p, timing);
    out.rows[i] = {p.B, s.eta, s.delta_B_G, s.P_s, s.t_m_us};
  }
  out.metadata["tau_us"] = std::to_string(tau);
  return out;
}

SweepResult fisher_vs_time(const Range& tau_range, const ProtocolParams& base) {
  const std::vector<double> taus = tau_range.grid();
  SweepResult out;
  out.columns = {"tau", "F_ramsey", "F_Q_probe", "F_ps", "F_Q_post"};
  out.rows.assign(taus.size(), {});
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long long i = 0; i < (long long)taus.size(); ++i) {
    ProtocolParams p = base;
    p.tau = taus[i];
    if (p.tau == 0.0) {
      out.rows[i] = {0.0, 0.0, 0.0, 0.0, 0.0};
      continue;
    }
    const FisherReport r = fisher_report(p);
    out.rows[i] = {p.tau, r.F_ramsey, r.F_Q_probe, r.F_ps, r.F_Q_post};
  }
  return out;
}

}  // namespace nvmag
