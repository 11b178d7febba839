#include <doctest.h>

#include <cmath>
#include <vector>

#include "varint/guiding_centre.hpp"

using namespace varint;

namespace {

// Thesis trapped-particle benchmark.
GCParams trapped_params(double h) {
  GCParams p;
  p.mu = 2.25e-6;
  p.p_phi = -1.077e-3;
  p.tokamak = TokamakParams{1.0, 1.0, 2.0};
  p.h = h;
  return p;
}

constexpr double kTauB = 43062.0;  // closed-form bounce time of the orbit

}  // namespace

TEST_CASE("initial conditions reproduce the printed momenta") {
  GCParams p = trapped_params(1.0);
  GCState4D s = make_initial_4d(p, 1.05, 0.0);
  CHECK(std::abs(s.pR) < 1e-15);
  CHECK(s.pZ == doctest::Approx(-2.438e-2).epsilon(2e-4));
  CHECK(s.pPhi == doctest::Approx(-1.077e-3).epsilon(1e-12));
  CHECK(std::abs(s.pU) < 1e-15);

  GCState2D s2 = make_initial_2d(p, 1.05, 0.0);
  CHECK(std::abs(s2.pR) < 1e-15);
  CHECK(s2.pZ == doctest::Approx(s.pZ).epsilon(1e-12));
}

TEST_CASE("energy of the initial state") {
  GCParams p = trapped_params(1.0);
  GCState2D s2 = make_initial_2d(p, 1.05, 0.0);
  GCDiagnostics d2 = gc_diagnostics(s2, p);
  CHECK(d2.H == doctest::Approx(2.236e-6).epsilon(2e-4));

  GCState4D s4 = make_initial_4d(p, 1.05, 0.0);
  GCDiagnostics d4 = gc_diagnostics(s4, p);
  CHECK(d4.H == doctest::Approx(d2.H).epsilon(1e-12));
  CHECK(d4.p_phi == doctest::Approx(-1.077e-3).epsilon(1e-12));
}

TEST_CASE("H = 0 when mu = 0 and u = 0") {
  GCParams p = trapped_params(1.0);
  p.mu = 0.0;
  // p_phi chosen so the parallel velocity vanishes at (1.05, 0).
  p.p_phi = -0.05 * 0.05 / 4.0;
  GCState2D s = make_initial_2d(p, 1.05, 0.0);
  CHECK(std::abs(gc_diagnostics(s, p).H) < 1e-30);
}

TEST_CASE("near-identity map for h -> 0") {
  SolverConfig cfg;
  GCParams p = trapped_params(1e-12);
  GCState2D s2 = make_initial_2d(p, 1.05, 0.0);
  for (Scheme sch : {Scheme::trapezoidal, Scheme::midpoint}) {
    auto [n, rep] = step_2d(sch, s2, p, cfg);
    CHECK(rep.converged);
    CHECK(std::abs(n.qR - s2.qR) < 1e-9);
    CHECK(std::abs(n.qZ - s2.qZ) < 1e-9);
  }
  GCState4D s4 = make_initial_4d(p, 1.05, 0.0);
  for (Scheme sch : {Scheme::trapezoidal, Scheme::midpoint}) {
    auto [n, rep] = step_4d(sch, s4, p, cfg);
    CHECK(rep.converged);
    CHECK(std::abs(n.qR - s4.qR) < 1e-9);
    CHECK(std::abs(n.qZ - s4.qZ) < 1e-9);
    CHECK(std::abs(n.qU - s4.qU) < 1e-9);
  }
}

TEST_CASE("midpoint step matches dense Newton with FD Jacobian") {
  SolverConfig cfg;
  cfg.abs_tolerance = 1e-13;
  GCParams p = trapped_params(kTauB / 100.0);
  GCState2D s = make_initial_2d(p, 1.05, 0.0);
  auto [n, rep] = step_2d(Scheme::midpoint, s, p, cfg);
  CHECK(rep.converged);

  ResidualFn res = [&](const Vec& y) {
    return step_residual(Scheme::midpoint, s, p, y);
  };
  auto [y, orep] =
      newton_solve(res, finite_difference_jacobian(res), Vec{s.qR, s.qZ}, cfg);
  CHECK(orep.converged);
  CHECK(std::abs(n.qR - y[0]) < 1e-10);
  CHECK(std::abs(n.qZ - y[1]) < 1e-10);

  // Same cross-check for the 4D system.
  GCState4D s4 = make_initial_4d(p, 1.05, 0.0);
  auto [n4, rep4] = step_4d(Scheme::midpoint, s4, p, cfg);
  CHECK(rep4.converged);
  ResidualFn res4 = [&](const Vec& y4) {
    return step_residual(Scheme::midpoint, s4, p, y4);
  };
  auto [y4, orep4] = newton_solve(res4, finite_difference_jacobian(res4),
                                  Vec{s4.qR, s4.qZ, s4.qPhi, s4.qU}, cfg);
  CHECK(orep4.converged);
  CHECK(std::abs(n4.qR - y4[0]) < 1e-10);
  CHECK(std::abs(n4.qZ - y4[1]) < 1e-10);
  CHECK(std::abs(n4.qPhi - y4[2]) < 1e-10);
  CHECK(std::abs(n4.qU - y4[3]) < 1e-10);
}

TEST_CASE("time symmetry: forward then backward returns the state") {
  SolverConfig cfg;
  cfg.abs_tolerance = 1e-13;
  GCParams fwd = trapped_params(kTauB / 100.0);
  GCParams bwd = trapped_params(-kTauB / 100.0);
  for (Scheme sch : {Scheme::trapezoidal, Scheme::midpoint}) {
    GCState2D s = make_initial_2d(fwd, 1.05, 0.0);
    auto [mid, r1] = step_2d(sch, s, fwd, cfg);
    auto [back, r2] = step_2d(sch, mid, bwd, cfg);
    CHECK(r1.converged);
    CHECK(r2.converged);
    CHECK(std::abs(back.qR - s.qR) < 10 * cfg.abs_tolerance);
    CHECK(std::abs(back.qZ - s.qZ) < 10 * cfg.abs_tolerance);
    CHECK(std::abs(back.pR - s.pR) < 10 * cfg.abs_tolerance);
    CHECK(std::abs(back.pZ - s.pZ) < 10 * cfg.abs_tolerance);
  }
  for (Scheme sch : {Scheme::trapezoidal, Scheme::midpoint}) {
    GCState4D s = make_initial_4d(fwd, 1.05, 0.0);
    auto [mid, r1] = step_4d(sch, s, fwd, cfg);
    auto [back, r2] = step_4d(sch, mid, bwd, cfg);
    CHECK(r1.converged);
    CHECK(r2.converged);
    CHECK(std::abs(back.qR - s.qR) < 10 * cfg.abs_tolerance);
    CHECK(std::abs(back.qU - s.qU) < 10 * cfg.abs_tolerance);
  }
}

TEST_CASE("4D toroidal momentum conserved over 1000 steps") {
  SolverConfig cfg;
  cfg.abs_tolerance = 1e-12;
  GCParams p = trapped_params(kTauB / 100.0);
  GCState4D s = make_initial_4d(p, 1.05, 0.0);
  const double p_phi0 = s.pPhi;
  for (int i = 0; i < 1000; ++i) {
    auto [n, rep] = step_4d(Scheme::midpoint, s, p, cfg);
    REQUIRE(rep.converged);
    s = n;
  }
  CHECK(std::abs(s.pPhi - p_phi0) <= 1e-10);
}

TEST_CASE("second-order energy amplitude, halving h reduces by 4") {
  SolverConfig cfg;
  cfg.abs_tolerance = 1e-13;
  auto amplitude = [&](double h) {
    GCParams p = trapped_params(h);
    GCState2D s = make_initial_2d(p, 1.05, 0.0);
    const double H0 = gc_diagnostics(s, p).H;
    double amp = 0.0;
    int n = static_cast<int>(std::lround(kTauB / h));
    for (int i = 0; i < n; ++i) {
      auto [ns, rep] = step_2d(Scheme::midpoint, s, p, cfg);
      REQUIRE(rep.converged);
      s = ns;
      amp = std::max(amp, std::abs(gc_diagnostics(s, p).H - H0));
    }
    return amp;
  };
  double a1 = amplitude(kTauB / 100.0);
  double a2 = amplitude(kTauB / 200.0);
  CHECK(a1 / a2 == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("composed midpoint is fourth order") {
  SolverConfig cfg;
  cfg.abs_tolerance = 1e-14;
  CompositionTable table = CompositionTable::named("4o3s");
  auto amplitude = [&](double h) {
    GCParams p = trapped_params(h);
    OneStepMap<GCState2D> base = [&p, &cfg](const GCState2D& st, double hh) {
      GCParams q = p;
      q.h = hh;
      return step_2d(Scheme::midpoint, st, q, cfg);
    };
    auto composed = compose(base, table);
    GCState2D s = make_initial_2d(p, 1.05, 0.0);
    const double H0 = gc_diagnostics(s, p).H;
    double amp = 0.0;
    int n = static_cast<int>(std::lround(kTauB / h));
    for (int i = 0; i < n; ++i) {
      auto [ns, rep] = composed(s, h);
      REQUIRE(rep.converged);
      s = ns;
      amp = std::max(amp, std::abs(gc_diagnostics(s, p).H - H0));
    }
    return amp;
  };
  double a1 = amplitude(kTauB / 50.0);
  double a2 = amplitude(kTauB / 100.0);
  CHECK(a1 / a2 == doctest::Approx(16.0).epsilon(0.30));
}

TEST_CASE("composition tables") {
  // 2 gamma + (1 - 2 gamma) telescopes to 1.
  CompositionTable t3 = CompositionTable::named("4o3s");
  const double g = 1.0 / (2.0 - std::cbrt(2.0));
  CHECK(g == doctest::Approx(1.3512071919596578).epsilon(1e-15));
  CHECK(t3.gammas.size() == 3);
  CHECK(t3.gammas[0] == doctest::Approx(g).epsilon(1e-15));
  CHECK(2 * t3.gammas[0] + t3.gammas[1] == doctest::Approx(1.0).epsilon(1e-15));

  CompositionTable t7 = CompositionTable::named("6o7s");
  CHECK(t7.gammas[0] == 0.78451361047755726381949763);
  CHECK(t7.gammas[1] == 0.23557321335935813368479318);
  CHECK(t7.gammas[2] == -1.17767998417887100694641568);
  CHECK(t7.gammas[3] == 1.31518632068391121888424973);
  CHECK(t7.gammas[6] == t7.gammas[0]);

  CompositionTable t9 = CompositionTable::named("6o9s");
  CHECK(t9.gammas.size() == 9);
  double sum = 0;
  for (double x : t9.gammas) sum += x;
  CHECK(std::abs(sum - 1.0) <= 1e-12);

  CHECK_THROWS_AS(CompositionTable({0.5, 0.4}), std::invalid_argument);
  CHECK_THROWS_AS(CompositionTable({0.7, 0.3}), std::invalid_argument);
}

TEST_CASE("rk4 order checks on the harmonic oscillator") {
  // x' = v, v' = -x; exact solution (cos t, -sin t) from (1, 0).
  auto rhs = [](const std::array<double, 2>& y) {
    return std::array<double, 2>{y[1], -y[0]};
  };
  const double h = 0.1;
  auto y = rk4_classic<2>(rhs, {1.0, 0.0}, h);
  CHECK(std::abs(y[0] - std::cos(h)) < 1e-7);
  CHECK(std::abs(y[1] + std::sin(h)) < 1e-7);

  // Richardson: error over a fixed interval h drops ~16x when halving.
  auto err = [&](double hh, int steps) {
    std::array<double, 2> s{1.0, 0.0};
    for (int i = 0; i < steps; ++i) s = rk4_classic<2>(rhs, s, hh);
    double t = hh * steps;
    return std::hypot(s[0] - std::cos(t), s[1] + std::sin(t));
  };
  double e1 = err(0.2, 1);
  double e2 = err(0.1, 2);
  CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.25));
}

TEST_CASE("rk4 dissipates energy on the trapped orbit") {
  // Within a bounce period the energy error oscillates with the orbit
  // phase; the secular drift shows in the per-period samples.
  GCParams p = trapped_params(kTauB / 100.0);
  GCState2D s = make_initial_2d(p, 1.05, 0.0);
  std::vector<double> H_sample{gc_diagnostics(s, p).H};
  for (int block = 0; block < 5; ++block) {
    for (int i = 0; i < 1000; ++i) s = rk4_step(s, p);
    H_sample.push_back(gc_diagnostics(s, p).H);
  }
  for (size_t k = 0; k + 1 < H_sample.size(); ++k)
    CHECK(H_sample[k + 1] < H_sample[k]);
}

TEST_CASE("trapezoidal scheme is unstable at 25 steps per bounce") {
  SolverConfig cfg;
  GCParams p = trapped_params(kTauB / 25.0);
  GCState2D s = make_initial_2d(p, 1.05, 0.0);
  bool failed = false;
  try {
    for (int i = 0; i < 250; ++i) {
      auto [n, rep] = step_2d(Scheme::trapezoidal, s, p, cfg);
      if (!rep.converged) {
        failed = true;
        break;
      }
      s = n;
    }
  } catch (const SolverError&) {
    failed = true;
  } catch (const std::domain_error&) {
    failed = true;
  }
  CHECK(failed);
}
