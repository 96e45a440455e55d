#include <doctest.h>

#include "nvmag/sweeps.hpp"

using namespace nvmag;

TEST_CASE("range grids") {
  Range lin{0.0, 1.0, 5, false};
  const auto g = lin.grid();
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 1.0);
  CHECK(g[2] == doctest::Approx(0.5).epsilon(1e-15));
  Range lg{1e-2, 1.0, 3, true};
  const auto h = lg.grid();
  CHECK(h.front() == doctest::Approx(1e-2).epsilon(1e-14));
  CHECK(h[1] == doctest::Approx(1e-1).epsilon(1e-12));
  CHECK(h.back() == 1.0);
  CHECK_THROWS_AS((Range{1.0, 0.5, 10, false}.grid()), config_error);
  CHECK_THROWS_AS((Range{0.0, 1.0, 1, false}.grid()), config_error);
  CHECK_THROWS_AS((Range{0.0, 1.0, 10, true}.grid()), config_error);
}

TEST_CASE("optimize_tau satisfies the argmin property") {
  ProtocolParams p;
  p.T2_star = 2.0;
  const Range search{1e-3, 10.0, 500, false};
  const TauOptimum opt = optimize_tau(p, TimingBudget::c13_cryo(), search,
                                      ProtocolKind::PostSelection);
  for (double t : search.grid()) {
    ProtocolParams q = p;
    q.tau = t;
    try {
      if (success_probability(q) < 1e-3) continue;
      const double eta = sensitivity(q, TimingBudget::c13_cryo()).eta;
      CHECK(opt.eta_star <= eta * (1.0 + 1e-12));
    } catch (const numeric_error&) {
    }
  }
  // expected optimum scale for this setting
  CHECK(opt.tau_star > 1.0);
  CHECK(opt.tau_star < 1.6);
}

TEST_CASE("lossless Ramsey pushes tau to the range maximum") {
  ProtocolParams p;  // T2* = inf
  const Range search{0.1, 4.0, 400, false};
  const TauOptimum opt =
      optimize_tau(p, TimingBudget::ramsey(), search, ProtocolKind::Ramsey);
  CHECK(opt.tau_star == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("Ramsey optimal tau exceeds the post-selection one") {
  ProtocolParams p = ProtocolParams::n15();
  p.T2_star = 2.0;
  const Range search{1e-3, 10.0, 500, false};
  const TauOptimum post = optimize_tau(p, TimingBudget::n15_cryo(), search,
                                       ProtocolKind::PostSelection);
  const TauOptimum ram =
      optimize_tau(p, TimingBudget::ramsey(), search, ProtocolKind::Ramsey);
  CHECK(ram.tau_star > post.tau_star);
}

TEST_CASE("T2* sweep reproduces the qualitative orderings") {
  const Range t2{1.0, 16.0, 5, true};
  const SweepResult res = sweep_T2star(t2, 0.01, {400, 2, 1e-3});
  REQUIRE(res.rows.size() == 5);
  // columns: T2, eta_ramsey, eta_c13, eta_n15, ...
  for (const auto& row : res.rows) CHECK(row[3] < row[2]);  // 15N below 13C
  const auto& small = res.rows.front();  // T2* = 1 us
  const auto& large = res.rows.back();   // T2* = 16 us
  CHECK(small[2] < small[1]);  // post-selection wins at short T2*
  CHECK(large[1] < large[2]);  // Ramsey wins at long T2*
}

TEST_CASE("flat field sweep at tau = 3.0 us, oscillating at 3.2 us") {
  ProtocolParams p;  // lossless 13C
  const Range b{1e-2, 1.0, 60, true};
  const SweepResult flat = sweep_B_fixed_tau(b, 3.0, p, TimingBudget::c13_cryo());
  double lo = 1e300, hi = 0.0;
  for (const auto& row : flat.rows) {
    lo = std::min(lo, row[1]);
    hi = std::max(hi, row[1]);
  }
  CHECK((hi - lo) / lo < 0.01);
  const SweepResult osc = sweep_B_fixed_tau(b, 3.2, p, TimingBudget::c13_cryo());
  lo = 1e300;
  hi = 0.0;
  for (const auto& row : osc.rows) {
    lo = std::min(lo, row[1]);
    hi = std::max(hi, row[1]);
  }
  CHECK((hi - lo) / lo > 0.05);
}

TEST_CASE("ratio map contains the advantage region and is grid-stable") {
  const Range t2{2.0, 10.0, 2, false};
  const Range b{1e-2, 1e-1, 2, true};
  const SweepResult res = ratio_map(t2, b, {400, 2, 1e-3});
  REQUIRE(res.rows.size() == 4);
  // row 0: T2* = 2 us, B = 1e-2 G
  CHECK(res.rows[0][2] < 1.0);
  // T2* = 10 us at the same field: Ramsey wins
  CHECK(res.rows[2][2] > 1.0);
  // refinement stability: doubling the coarse grid moves the ratio < 2%
  const SweepResult fine = ratio_map(t2, b, {800, 2, 1e-3});
  for (std::size_t i = 0; i < res.rows.size(); ++i)
    CHECK(std::abs(fine.rows[i][2] - res.rows[i][2]) < 0.02 * res.rows[i][2]);
}

TEST_CASE("fisher_vs_time endpoints and lossless identity") {
  ProtocolParams p;  // lossless
  const Range taus{0.0, 3.0, 7, false};
  const SweepResult res = fisher_vs_time(taus, p);
  CHECK(res.rows.front()[1] == 0.0);
  CHECK(res.rows.front()[4] == 0.0);
  const double ge = p.consts.gamma_e;
  for (const auto& row : res.rows) {
    if (row[0] == 0.0) continue;
    CHECK(row[1] == doctest::Approx(ge * ge * row[0] * row[0]).epsilon(1e-9));
  }
}
