#include <cmath>

#include "doctest.h"
#include "scatlab/audit.hpp"
#include "scatlab/errors.hpp"
#include "scatlab/profiles.hpp"
#include "scatlab/rng.hpp"
#include "scatlab/scattering.hpp"
#include "scatlab/taylor.hpp"
#include "support.hpp"

using namespace scatlab;
using scatlab::test::rel_field_diff;

namespace {

struct ToyLab {
  PropagatorSpec prop;
  NonlinearitySpec nl;
  IntegratorConfig cfg;
  StrichartzExponents exps;
};

ToyLab make_toy_lab(double lambda = 1.0, double T = 20.0, double dt = 1e-2) {
  auto grid = SpatialGrid::toy(4);
  auto nl = NonlinearitySpec::toy_gauge_power(5, lambda);
  IntegratorConfig cfg;
  cfg.scheme = Scheme::LawsonRK4;
  cfg.dt = dt;
  cfg.T = T;
  return ToyLab{PropagatorSpec::toy(grid), nl, cfg,
                StrichartzExponents::toy(5, 1, nl.coupling)};
}

}  // namespace

TEST_CASE("scatter: zero data gives an all-zero converged result") {
  auto lab = make_toy_lab();
  ComplexField zero(lab.prop.grid, 1);
  const ScatteringResult res =
      scatter(lab.prop, lab.nl, lab.cfg, zero, lab.exps);
  CHECK(res.converged);
  CHECK(max_abs(res.u_plus) == 0.0);
  CHECK(res.norm_table.f_norm == 0.0);
}

TEST_CASE("scatter: lambda = 0 is the identity on asymptotic states") {
  auto grid = SpatialGrid::periodic(60.0, 256);
  auto prop = PropagatorSpec::schrodinger(grid);
  auto nl = NonlinearitySpec::gauge_power(5, 0.0);
  IntegratorConfig cfg;
  cfg.dt = 5e-3;
  cfg.T = 4.0;
  cfg.snapshot_stride = 5;
  const ComplexField u_minus = gaussian_profile(grid, 0.4, 1.0);
  const ScatteringResult res =
      scatter(prop, nl, cfg, u_minus, StrichartzExponents::for_nls(5));
  CHECK(rel_field_diff(res.u_plus, u_minus) < 1e-10);
  CHECK(rel_field_diff(res.u_at_zero, u_minus) < 1e-10);
}

TEST_CASE("scatter: toy run converges with strictly decreasing tails") {
  auto lab = make_toy_lab();
  ScatterThresholds thr;
  thr.tail = 5e-2;
  const ComplexField u_minus = toy_profile(lab.prop.grid, 0.6);
  const ScatteringResult res =
      scatter(lab.prop, lab.nl, lab.cfg, u_minus, lab.exps, thr);
  REQUIRE(res.cauchy_tail.size() == 3);
  CHECK(res.cauchy_tail[0].second > res.cauchy_tail[1].second);
  CHECK(res.cauchy_tail[1].second > res.cauchy_tail[2].second);
  CHECK(res.converged);
  CHECK(res.boundary_mass_max == 0.0);
}

TEST_CASE("scatter: NLS gaussian converges and horizon doubling is tail-small") {
  auto grid = SpatialGrid::periodic(100.0, 1024);
  auto prop = PropagatorSpec::schrodinger(grid);
  auto nl = NonlinearitySpec::gauge_power(5, 1.0);
  IntegratorConfig cfg;
  cfg.dt = 2e-3;
  cfg.T = 4.0;
  cfg.snapshot_stride = 10;
  ScatterThresholds thr;
  thr.tail = 2e-2;
  const ComplexField u_minus = gaussian_profile(grid, 0.3, 1.0);
  auto exps = StrichartzExponents::for_nls(5);
  const ScatteringResult res = scatter(prop, nl, cfg, u_minus, exps, thr);
  CHECK(res.converged);
  for (size_t i = 1; i < res.cauchy_tail.size(); ++i)
    CHECK(res.cauchy_tail[i].second < res.cauchy_tail[i - 1].second);

  IntegratorConfig cfg2 = cfg;
  cfg2.T = 8.0;
  const ScatteringResult res2 = scatter(prop, nl, cfg2, u_minus, exps, thr);
  ComplexField moved = res2.u_plus;
  moved -= res.u_plus;
  // Doubling the horizon moves u_plus by less than the accumulated tail.
  // The last increment alone underestimates the remaining correction by
  // the universal factor ~3 for the t^{-2} integrands of these flows, so
  // the accumulated tail is the honest comparison scale.
  double tail_mass = 0.0;
  for (const auto& [t, s] : res.cauchy_tail) tail_mass += s;
  CHECK(d_norm(moved) < tail_mass);
}

TEST_CASE("scatter: boundary-mass breach raises a tainted-result error") {
  auto grid = SpatialGrid::periodic(20.0, 128);
  auto prop = PropagatorSpec::schrodinger(grid);
  auto nl = NonlinearitySpec::gauge_power(5, 1.0);
  IntegratorConfig cfg;
  cfg.dt = 5e-3;
  cfg.T = 4.0;
  cfg.snapshot_stride = 10;
  // The box is far too small for T = 4 of free spreading.
  const ComplexField u_minus = gaussian_profile(grid, 0.5, 1.0);
  CHECK_THROWS_AS(
      scatter(prop, nl, cfg, u_minus, StrichartzExponents::for_nls(5)),
      TaintedResultError);
}

TEST_CASE("linearized scatter: identity on a zero background, zero on zero data") {
  auto lab = make_toy_lab(1.7);
  ComplexField zero(lab.prop.grid, 1);
  const ScatteringResult bg =
      scatter(lab.prop, lab.nl, lab.cfg, zero, lab.exps);
  Rng rng(5);
  const ComplexField v = random_toy_field(lab.prop.grid, rng, 1.0);
  // N_1(0, .) = 0 for p >= 3, so dS(0) is the identity.
  CHECK(rel_field_diff(linearized_scatter(lab.prop, lab.nl, bg, v), v) < 1e-10);
  CHECK(max_abs(linearized_scatter(lab.prop, lab.nl, bg, zero)) == 0.0);
}

TEST_CASE("linearized scatter: central-difference oracle, slope 2 +- 0.2") {
  auto lab = make_toy_lab(1.0, 20.0, 5e-3);
  ScatterThresholds thr;
  thr.tail = 5e-2;
  const ComplexField u_minus = toy_profile(lab.prop.grid, 0.5);
  const ScatteringResult bg =
      scatter(lab.prop, lab.nl, lab.cfg, u_minus, lab.exps, thr);
  REQUIRE(bg.converged);
  Rng rng(21);
  const ComplexField v = random_toy_field(lab.prop.grid, rng, 1.0);
  const ComplexField v_plus = linearized_scatter(lab.prop, lab.nl, bg, v);

  std::vector<double> lx, ly;
  for (double eps : {1e-2, 5e-3, 2.5e-3}) {
    ComplexField up = u_minus, um = u_minus;
    axpy(Complex(eps, 0.0), v, up);
    axpy(Complex(-eps, 0.0), v, um);
    ComplexField fd =
        scatter(lab.prop, lab.nl, lab.cfg, up, lab.exps, thr).u_plus;
    fd -= scatter(lab.prop, lab.nl, lab.cfg, um, lab.exps, thr).u_plus;
    fd *= Complex(0.5 / eps, 0.0);
    fd -= v_plus;
    lx.push_back(std::log(eps));
    ly.push_back(std::log(euclidean_norm(fd)));
  }
  CHECK(std::abs(linear_fit(lx, ly).first - 2.0) < 0.2);
}

TEST_CASE("linearized scatter: additive and real-homogeneous to 1e-10") {
  auto lab = make_toy_lab(1.0, 20.0, 1e-2);
  ScatterThresholds thr;
  thr.tail = 5e-2;
  const ScatteringResult bg = scatter(lab.prop, lab.nl, lab.cfg,
                                      toy_profile(lab.prop.grid, 0.5),
                                      lab.exps, thr);
  REQUIRE(bg.converged);
  Rng rng(33);
  const ComplexField a = random_toy_field(lab.prop.grid, rng, 1.0);
  const ComplexField b = random_toy_field(lab.prop.grid, rng, 0.7);
  const double s = 1.8;
  ComplexField combo = a;
  axpy(Complex(s, 0.0), b, combo);
  ComplexField lhs = linearized_scatter(lab.prop, lab.nl, bg, combo);
  ComplexField rhs = linearized_scatter(lab.prop, lab.nl, bg, a);
  axpy(Complex(s, 0.0), linearized_scatter(lab.prop, lab.nl, bg, b), rhs);
  CHECK(rel_field_diff(lhs, rhs) < 1e-10);
}

TEST_CASE("partition: zero background is a single interval") {
  auto lab = make_toy_lab();
  const Trajectory zero = Trajectory::zero(lab.prop.grid, 1, -20.0, 20.0, 401);
  const auto intervals = partition_intervals(zero, lab.exps, 1.0);
  REQUIRE(intervals.size() == 1);
  CHECK(intervals[0].a == doctest::Approx(-20.0));
  CHECK(intervals[0].b == doctest::Approx(20.0));
}

TEST_CASE("partition: K is finite, scaling-monotone, and infeasible when C huge") {
  auto lab = make_toy_lab();
  ScatterThresholds thr;
  thr.tail = 5e-2;
  const ScatteringResult big = scatter(lab.prop, lab.nl, lab.cfg,
                                       toy_profile(lab.prop.grid, 0.9),
                                       lab.exps, thr);
  const ScatteringResult small = scatter(lab.prop, lab.nl, lab.cfg,
                                         toy_profile(lab.prop.grid, 0.45),
                                         lab.exps, thr);
  const double c_emp = measure_h2_constant(lab.prop, lab.nl, big.trajectory,
                                           lab.exps, 8, 99);
  CHECK(c_emp > 0.0);
  const auto k_big =
      partition_intervals(big.trajectory, lab.exps, c_emp).size();
  const auto k_small =
      partition_intervals(small.trajectory, lab.exps, c_emp).size();
  CHECK(k_big >= 1);
  CHECK(k_small <= k_big);
  CHECK_THROWS_AS(partition_intervals(big.trajectory, lab.exps, 1e9),
                  PartitionInfeasibleError);
}

TEST_CASE("partition: linear backgrounds, K non-increasing in the data norm") {
  auto grid = SpatialGrid::toy(4);
  auto prop = PropagatorSpec::toy(grid);
  auto nl = NonlinearitySpec::toy_gauge_power(5, 1.0);
  auto exps = StrichartzExponents::toy(5, 1, nl.coupling);
  IntegratorConfig cfg;
  cfg.scheme = Scheme::LawsonRK4;
  cfg.dt = 1e-2;
  cfg.T = 20.0;
  const ComplexField g = toy_profile(grid, 1.4);

  // One constant from the largest member of the scaled family, reused for
  // every smaller one.
  const Trajectory big = free_flow(prop, cfg, g);
  const double c_emp = measure_h2_constant(prop, nl, big, exps, 8, 12345);
  size_t prev = 1u << 20;
  for (double scale : {1.0, 0.5, 0.25}) {
    ComplexField data = g;
    data *= Complex(scale, 0.0);
    const Trajectory flow = free_flow(prop, cfg, data);
    const size_t k = partition_intervals(flow, exps, c_emp).size();
    CHECK(k >= 1);
    CHECK(k <= prev);
    prev = k;
  }
}
