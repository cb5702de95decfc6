#include <cmath>

#include "doctest.h"
#include "scatlab/errors.hpp"
#include "scatlab/evolve.hpp"
#include "scatlab/norms.hpp"
#include "scatlab/profiles.hpp"
#include "scatlab/rng.hpp"
#include "scatlab/taylor.hpp"
#include "support.hpp"

using namespace scatlab;
using scatlab::test::rel_diff;
using scatlab::test::rel_field_diff;

namespace {

ComplexField final_state(const Trajectory& t) { return t.at(t.nodes() - 1); }

struct ToySetup {
  PropagatorSpec prop;
  NonlinearitySpec nl;
  IntegratorConfig cfg;
  ComplexField data;
};

ToySetup make_toy(double lambda = 1.0, double T = 10.0, double dt = 1e-2) {
  auto grid = SpatialGrid::toy(4);
  ToySetup s{PropagatorSpec::toy(grid),
             NonlinearitySpec::toy_gauge_power(5, lambda),
             IntegratorConfig{},
             toy_profile(grid, 0.7)};
  s.cfg.dt = dt;
  s.cfg.T = T;
  s.cfg.scheme = Scheme::LawsonRK4;
  return s;
}

}  // namespace

TEST_CASE("config validation") {
  IntegratorConfig cfg;
  cfg.dt = 0.3;
  cfg.T = 1.0;  // 0.3 does not divide 2.0
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.dt = 0.1;
  CHECK_NOTHROW(cfg.validate());

  // Strang is restricted to the gauge-invariant Schroedinger equation.
  auto toy = make_toy();
  toy.cfg.scheme = Scheme::StrangSplit;
  CHECK_THROWS_AS(
      solve_nonlinear(toy.prop, toy.nl, toy.cfg, toy.data, -toy.cfg.T),
      std::invalid_argument);
}

TEST_CASE("lambda = 0 reduces to the free flow (both schemes)") {
  auto grid = SpatialGrid::periodic(40.0, 256);
  auto prop = PropagatorSpec::schrodinger(grid);
  auto nl = NonlinearitySpec::gauge_power(5, 0.0);
  IntegratorConfig cfg;
  cfg.dt = 1e-2;
  cfg.T = 2.0;
  const ComplexField u0 = gaussian_profile(grid, 0.8, 1.0);

  for (Scheme scheme : {Scheme::StrangSplit, Scheme::LawsonRK4}) {
    cfg.scheme = scheme;
    const Trajectory traj = solve_nonlinear(prop, nl, cfg, u0, -cfg.T);
    for (int i = 0; i < traj.nodes(); i += 40) {
      const ComplexField expect =
          apply_U(prop, traj.times()[i] + cfg.T, u0);
      CHECK(rel_field_diff(traj.at(i), expect) < 1e-10);
    }
  }
}

TEST_CASE("zero data stays zero") {
  auto toy = make_toy();
  ComplexField zero(toy.prop.grid, 1);
  const Trajectory traj =
      solve_nonlinear(toy.prop, toy.nl, toy.cfg, zero, -toy.cfg.T);
  CHECK(max_abs(final_state(traj)) == 0.0);
}

TEST_CASE("strang conserves NLS mass to round-off and energy to scheme order") {
  auto grid = SpatialGrid::periodic(80.0, 512);
  auto prop = PropagatorSpec::schrodinger(grid);
  auto nl = NonlinearitySpec::gauge_power(5, 1.0);
  IntegratorConfig cfg;
  cfg.dt = 1e-2;
  cfg.T = 4.0;
  cfg.snapshot_stride = 10;
  cfg.conservation_check_every = 20;
  const ComplexField u0 = gaussian_profile(grid, 0.5, 1.0);
  ConservationLog log;
  solve_nonlinear(prop, nl, cfg, apply_U(prop, -cfg.T, u0), -cfg.T, &log);
  REQUIRE(log.times.size() > 10);
  double mass_drift = 0.0, energy_drift = 0.0;
  for (size_t i = 0; i < log.times.size(); ++i) {
    mass_drift =
        std::max(mass_drift, std::abs(log.mass[i] / log.mass[0] - 1.0));
    energy_drift =
        std::max(energy_drift, std::abs(log.energy[i] / log.energy[0] - 1.0));
  }
  CHECK(mass_drift < 1e-12);
  CHECK(energy_drift < 1e-6);
}

TEST_CASE("self-convergence order: Strang is 2, Lawson is 4") {
  auto grid = SpatialGrid::periodic(40.0, 128);
  auto prop = PropagatorSpec::schrodinger(grid);
  auto nl = NonlinearitySpec::gauge_power(5, 1.0);
  const ComplexField u0 = gaussian_profile(grid, 0.7, 1.0);

  auto order_of = [&](Scheme scheme, double dt0) {
    IntegratorConfig cfg;
    cfg.scheme = scheme;
    cfg.T = 1.0;
    cfg.dt = dt0 / 8.0;
    const ComplexField ref =
        final_state(solve_nonlinear(prop, nl, cfg, u0, -cfg.T));
    std::vector<double> errs;
    for (double dt : {dt0, dt0 / 2.0}) {
      cfg.dt = dt;
      ComplexField diff =
          final_state(solve_nonlinear(prop, nl, cfg, u0, -cfg.T));
      diff -= ref;
      errs.push_back(h1_norm(diff));
    }
    return std::log2(errs[0] / errs[1]);
  };
  CHECK(std::abs(order_of(Scheme::StrangSplit, 0.02) - 2.0) < 0.3);
  CHECK(std::abs(order_of(Scheme::LawsonRK4, 0.02) - 4.0) < 0.3);
}

TEST_CASE("lawson self-convergence order 4 on the toy model") {
  auto toy = make_toy(1.0, 2.0, 0.1);
  const ComplexField ref = [&] {
    auto cfg = toy.cfg;
    cfg.dt = 0.0125;
    return final_state(
        solve_nonlinear(toy.prop, toy.nl, cfg, toy.data, -cfg.T));
  }();
  std::vector<double> errs;
  for (double dt : {0.1, 0.05}) {
    auto cfg = toy.cfg;
    cfg.dt = dt;
    ComplexField diff =
        final_state(solve_nonlinear(toy.prop, toy.nl, cfg, toy.data, -cfg.T));
    diff -= ref;
    errs.push_back(euclidean_norm(diff));
  }
  CHECK(std::abs(std::log2(errs[0] / errs[1]) - 4.0) < 0.3);
}

TEST_CASE("focusing blow-up raises DivergedError with the last finite time") {
  auto grid = SpatialGrid::periodic(20.0, 64);
  auto prop = PropagatorSpec::klein_gordon(grid, 1.0);
  auto nl = NonlinearitySpec::real_odd_power(3, -1.0);
  IntegratorConfig cfg;
  cfg.scheme = Scheme::LawsonRK4;
  cfg.dt = 1e-2;
  cfg.T = 4.0;
  const ComplexField u0 = gaussian_pair_profile(grid, 5.0, 1.0);
  CHECK_THROWS_AS(solve_nonlinear(prop, nl, cfg, u0, -cfg.T), DivergedError);
  try {
    solve_nonlinear(prop, nl, cfg, u0, -cfg.T);
  } catch (const DivergedError& e) {
    CHECK(e.last_finite_time() > -cfg.T);
    CHECK(e.last_finite_time() < cfg.T);
  }
}

TEST_CASE("time reversal sanity for the gauge equation") {
  auto grid = SpatialGrid::periodic(40.0, 128);
  auto prop = PropagatorSpec::schrodinger(grid);
  auto nl = NonlinearitySpec::gauge_power(5, 1.0);
  const ComplexField u0 = gaussian_profile(grid, 0.6, 1.0);

  auto round_trip_error = [&](Scheme scheme, double dt) {
    IntegratorConfig cfg;
    cfg.scheme = scheme;
    cfg.T = 1.0;
    cfg.dt = dt;
    ComplexField fwd = final_state(solve_nonlinear(prop, nl, cfg, u0, -cfg.T));
    for (Complex& v : fwd.values()) v = std::conj(v);
    ComplexField back =
        final_state(solve_nonlinear(prop, nl, cfg, fwd, -cfg.T));
    for (Complex& v : back.values()) v = std::conj(v);
    back -= u0;
    return h1_norm(back);
  };
  // Strang is time-symmetric: the conjugate round trip inverts the
  // discrete map exactly, so only round-off survives.
  CHECK(round_trip_error(Scheme::StrangSplit, 0.02) < 1e-10);
  // Lawson is not; the round trip closes at least at scheme order (the
  // leading term partially cancels under reversal, so the observed rate
  // can exceed 4).
  const double e1 = round_trip_error(Scheme::LawsonRK4, 0.02);
  const double e2 = round_trip_error(Scheme::LawsonRK4, 0.01);
  CHECK(std::log2(e1 / e2) > 3.7);
  CHECK(e2 < 1e-8);
}

TEST_CASE("tangent: free reduction on a zero background") {
  auto toy = make_toy();
  const Trajectory zero_bg = Trajectory::zero(
      toy.prop.grid, 1, -toy.cfg.T, toy.cfg.T,
      static_cast<int>(std::lround(2 * toy.cfg.T / toy.cfg.dt)) + 1);
  Rng rng(31);
  const ComplexField w0 = random_toy_field(toy.prop.grid, rng, 1.0);
  const Trajectory w = solve_tangent(toy.prop, toy.nl, zero_bg, w0, -toy.cfg.T);
  const ComplexField expect = apply_U(toy.prop, 2 * toy.cfg.T, w0);
  CHECK(rel_field_diff(final_state(w), expect) < 1e-11);

  // Zero data and zero source stay zero.
  ComplexField zero(toy.prop.grid, 1);
  const Trajectory wz =
      solve_tangent(toy.prop, toy.nl, zero_bg, zero, -toy.cfg.T);
  CHECK(max_abs(final_state(wz)) == 0.0);
}

TEST_CASE("tangent central-difference oracle: Richardson slope 2 +- 0.2") {
  // eps in {1e-3, 5e-4, 2.5e-4} on the toy model at fine dt, so that the
  // integrator floor sits far below the eps^2 signal.
  auto toy = make_toy(1.0, 10.0, 2e-3);
  Rng rng(47);
  const ComplexField v = random_toy_field(toy.prop.grid, rng, 1.0);
  const Trajectory bg =
      solve_nonlinear(toy.prop, toy.nl, toy.cfg, toy.data, -toy.cfg.T);
  const ComplexField tangent =
      final_state(solve_tangent(toy.prop, toy.nl, bg, v, -toy.cfg.T));

  std::vector<double> eps_list = {1e-3, 5e-4, 2.5e-4};
  std::vector<double> lx, ly;
  for (double eps : eps_list) {
    ComplexField up = toy.data, um = toy.data;
    axpy(Complex(eps, 0.0), v, up);
    axpy(Complex(-eps, 0.0), v, um);
    ComplexField fd =
        final_state(solve_nonlinear(toy.prop, toy.nl, toy.cfg, up, -toy.cfg.T));
    fd -= final_state(
        solve_nonlinear(toy.prop, toy.nl, toy.cfg, um, -toy.cfg.T));
    fd *= Complex(0.5 / eps, 0.0);
    fd -= tangent;
    lx.push_back(std::log(eps));
    ly.push_back(std::log(euclidean_norm(fd)));
  }
  const double slope = linear_fit(lx, ly).first;
  CHECK(std::abs(slope - 2.0) < 0.2);
}

TEST_CASE("tangent rejects misaligned sources and off-grid start times") {
  auto toy = make_toy();
  const Trajectory bg =
      solve_nonlinear(toy.prop, toy.nl, toy.cfg, toy.data, -toy.cfg.T);
  ComplexField w0(toy.prop.grid, 1);
  const Trajectory bad_source = Trajectory::zero(
      toy.prop.grid, 1, -toy.cfg.T, toy.cfg.T, bg.nodes() + 5);
  CHECK_THROWS_AS(
      solve_tangent(toy.prop, toy.nl, bg, w0, -toy.cfg.T, &bad_source),
      std::invalid_argument);
  CHECK_THROWS_AS(solve_tangent(toy.prop, toy.nl, bg, w0, -toy.cfg.T + 1e-5),
                  std::invalid_argument);
}
