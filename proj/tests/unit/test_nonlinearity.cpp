#include <cmath>
#include <vector>

#include "doctest.h"
#include "scatlab/nonlinearity.hpp"
#include "scatlab/norms.hpp"
#include "scatlab/rng.hpp"
#include "support.hpp"

using namespace scatlab;
using scatlab::test::rel_field_diff;

namespace {

ComplexField random_small_field(std::shared_ptr<const SpatialGrid> grid,
                                int components, Rng& rng) {
  ComplexField f(grid, components);
  for (Complex& v : f.values()) v = 0.5 * rng.complex_normal();
  return f;
}

struct KindCase {
  NonlinearitySpec spec;
  std::shared_ptr<const SpatialGrid> grid;
};

std::vector<KindCase> all_kinds() {
  auto pgrid = SpatialGrid::periodic(10.0, 8);
  auto tgrid = SpatialGrid::toy(4);
  std::vector<KindCase> kinds;
  for (int p : {3, 5, 7})
    kinds.push_back({NonlinearitySpec::gauge_power(p, 1.3), pgrid});
  for (int p : {3, 7})
    kinds.push_back({NonlinearitySpec::real_odd_power(p, 0.7), pgrid});
  kinds.push_back({NonlinearitySpec::toy_gauge_power(5, 1.0), tgrid});
  kinds.push_back({NonlinearitySpec::toy_convolution_cubic(1.0, 4), tgrid});
  return kinds;
}

}  // namespace

TEST_CASE("spec validation: even p and asymmetric kernels are rejected") {
  CHECK_THROWS_AS(NonlinearitySpec::gauge_power(4, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(NonlinearitySpec::gauge_power(1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(NonlinearitySpec::real_odd_power(6, 1.0),
                  std::invalid_argument);
  std::vector<double> bad = {1.0, 2.0, 3.0, 4.0};
  CHECK_THROWS_AS(NonlinearitySpec::toy_convolution_cubic(1.0, 2, bad),
                  std::invalid_argument);
}

TEST_CASE("phi: zero input, constant gauge field, toy hand value") {
  auto pgrid = SpatialGrid::periodic(10.0, 8);
  auto nl = NonlinearitySpec::gauge_power(5, 2.0);
  ComplexField zero(pgrid, 1);
  CHECK(max_abs(phi(nl, 0.0, zero)) == 0.0);

  // Constant field a: phi = -i lambda |a|^4 a at every point.
  const Complex a(0.4, -0.3);
  ComplexField constant(pgrid, 1);
  for (Complex& v : constant.values()) v = a;
  const Complex expect = Complex(0.0, -2.0) * std::pow(std::abs(a), 4.0) * a;
  const ComplexField out = phi(nl, 0.0, constant);
  for (const Complex& v : out.values()) CHECK(std::abs(v - expect) < 1e-14);

  // Toy gauge power, p = 5, c(t) = (1+t^2)^{-1}, t = 1, u = (1, i):
  // all |u_k| = 1, so phi = -i lambda (1/2) u.
  auto tgrid = SpatialGrid::toy(2);
  auto toy = NonlinearitySpec::toy_gauge_power(5, 1.0);
  ComplexField u(tgrid, 1);
  u.values()[0] = Complex(1.0, 0.0);
  u.values()[1] = Complex(0.0, 1.0);
  const ComplexField tout = phi(toy, 1.0, u);
  for (int m = 0; m < 2; ++m)
    CHECK(std::abs(tout.values()[m] -
                   Complex(0.0, -0.5) * u.values()[m]) < 1e-15);
}

TEST_CASE("n_j reconstruction: sum over j recovers phi(u+w) - phi(u)") {
  Rng rng(101);
  for (const auto& kind : all_kinds()) {
    const int comps = kind.spec.components();
    for (int trial = 0; trial < 5; ++trial) {
      const ComplexField u = random_small_field(kind.grid, comps, rng);
      const ComplexField w = random_small_field(kind.grid, comps, rng);
      const double t = rng.uniform(-2.0, 2.0);
      ComplexField sum(kind.grid, comps);
      for (int j = 1; j <= kind.spec.p; ++j)
        sum += n_j_integrand(kind.spec, t, u, w, j);
      ComplexField uw = u;
      uw += w;
      ComplexField direct = phi(kind.spec, t, uw);
      direct -= phi(kind.spec, t, u);
      CHECK(rel_field_diff(sum, direct) < 1e-12);
    }
  }
}

TEST_CASE("n_j around zero: only j = p survives and equals phi(w)") {
  Rng rng(55);
  for (const auto& kind : all_kinds()) {
    const int comps = kind.spec.components();
    ComplexField zero(kind.grid, comps);
    const ComplexField w = random_small_field(kind.grid, comps, rng);
    for (int j = 1; j < kind.spec.p; ++j)
      CHECK(max_abs(n_j_integrand(kind.spec, 0.3, zero, w, j)) == 0.0);
    CHECK(rel_field_diff(n_j_integrand(kind.spec, 0.3, zero, w, kind.spec.p),
                         phi(kind.spec, 0.3, w)) < 1e-12);
  }
}

TEST_CASE("n_j: any zero slot annihilates the form") {
  Rng rng(77);
  auto pgrid = SpatialGrid::periodic(10.0, 8);
  auto nl = NonlinearitySpec::gauge_power(5, 1.0);
  const ComplexField u = random_small_field(pgrid, 1, rng);
  const ComplexField w = random_small_field(pgrid, 1, rng);
  ComplexField zero(pgrid, 1);
  std::vector<const ComplexField*> args = {&w, &zero, &w};
  CHECK(max_abs(n_j_integrand(nl, 0.0, u,
                              std::span<const ComplexField* const>(args), 3)) ==
        0.0);
}

TEST_CASE("n_j: real multilinearity and permutation symmetry") {
  Rng rng(303);
  auto pgrid = SpatialGrid::periodic(10.0, 8);
  auto nl = NonlinearitySpec::gauge_power(5, 1.0);
  const ComplexField u = random_small_field(pgrid, 1, rng);
  const ComplexField a = random_small_field(pgrid, 1, rng);
  const ComplexField b = random_small_field(pgrid, 1, rng);
  const ComplexField c = random_small_field(pgrid, 1, rng);

  // Additivity and real homogeneity in one slot.
  const double s = rng.uniform(0.5, 2.0);
  ComplexField a_plus_sb = a;
  axpy(Complex(s, 0.0), b, a_plus_sb);
  std::vector<const ComplexField*> l1 = {&a_plus_sb, &c};
  std::vector<const ComplexField*> l2 = {&a, &c};
  std::vector<const ComplexField*> l3 = {&b, &c};
  ComplexField lhs =
      n_j_integrand(nl, 0.0, u, std::span<const ComplexField* const>(l1), 2);
  ComplexField rhs =
      n_j_integrand(nl, 0.0, u, std::span<const ComplexField* const>(l2), 2);
  axpy(Complex(s, 0.0),
       n_j_integrand(nl, 0.0, u, std::span<const ComplexField* const>(l3), 2),
       rhs);
  CHECK(rel_field_diff(lhs, rhs) < 1e-11);

  // Symmetry under permutation of the last arguments.
  std::vector<const ComplexField*> abc = {&a, &b, &c};
  std::vector<const ComplexField*> cab = {&c, &a, &b};
  CHECK(rel_field_diff(
            n_j_integrand(nl, 0.0, u, std::span<const ComplexField* const>(abc),
                          3),
            n_j_integrand(nl, 0.0, u, std::span<const ComplexField* const>(cab),
                          3)) < 1e-11);

  CHECK_THROWS_AS(n_j_integrand(nl, 0.0, u, a, 0), std::invalid_argument);
  CHECK_THROWS_AS(n_j_integrand(nl, 0.0, u, a, 6), std::invalid_argument);
}

TEST_CASE("n_1 is the Frechet derivative: Richardson order 2 in eps") {
  Rng rng(12);
  for (const auto& kind : all_kinds()) {
    const int comps = kind.spec.components();
    const ComplexField u = random_small_field(kind.grid, comps, rng);
    const ComplexField w = random_small_field(kind.grid, comps, rng);
    const ComplexField n1 = n_j_integrand(kind.spec, 0.4, u, w, 1);

    std::vector<double> eps_list = {1e-2, 5e-3, 2.5e-3};
    std::vector<double> errs;
    for (double eps : eps_list) {
      ComplexField up = u, um = u;
      axpy(Complex(eps, 0.0), w, up);
      axpy(Complex(-eps, 0.0), w, um);
      ComplexField fd = phi(kind.spec, 0.4, up);
      fd -= phi(kind.spec, 0.4, um);
      fd *= Complex(1.0 / (2.0 * eps), 0.0);
      fd -= n1;
      errs.push_back(max_abs(fd));
    }
    // err(eps) ~ C eps^2: halving eps divides the error by ~4.
    CHECK(errs[0] / errs[1] == doctest::Approx(4.0).epsilon(0.15));
    CHECK(errs[1] / errs[2] == doctest::Approx(4.0).epsilon(0.15));
  }
}

TEST_CASE("phi_linearized agrees with the j = 1 extraction for every kind") {
  Rng rng(202);
  for (const auto& kind : all_kinds()) {
    const int comps = kind.spec.components();
    const ComplexField u = random_small_field(kind.grid, comps, rng);
    const ComplexField w = random_small_field(kind.grid, comps, rng);
    const double t = rng.uniform(-1.0, 1.0);
    CHECK(rel_field_diff(phi_linearized(kind.spec, t, u, w),
                         n_j_integrand(kind.spec, t, u, w, 1)) < 1e-12);
  }
}

TEST_CASE("gauge linearization closed form: p = 3 gives 2|u|^2 w + u^2 conj(w)") {
  auto pgrid = SpatialGrid::periodic(10.0, 8);
  auto nl = NonlinearitySpec::gauge_power(3, 1.0);
  Rng rng(8);
  const ComplexField u = random_small_field(pgrid, 1, rng);
  const ComplexField w = random_small_field(pgrid, 1, rng);
  const ComplexField lin = phi_linearized(nl, 0.0, u, w);
  for (int j = 0; j < 8; ++j) {
    const Complex uu = u.values()[j], ww = w.values()[j];
    const Complex expect =
        Complex(0.0, -1.0) *
        (2.0 * std::norm(uu) * ww + uu * uu * std::conj(ww));
    CHECK(std::abs(lin.values()[j] - expect) < 1e-14);
  }
}

TEST_CASE("phi_series_coefficient matches the diagonal extraction") {
  Rng rng(909);
  for (const auto& kind : all_kinds()) {
    const int comps = kind.spec.components();
    const ComplexField u = random_small_field(kind.grid, comps, rng);
    const ComplexField w = random_small_field(kind.grid, comps, rng);
    const double t = 0.2;
    // Phi(u + eps w): coefficient of eps^j equals Phi_j(u; w..w). The
    // series path places w at order 1 (terms[0]).
    std::vector<const ComplexField*> terms = {&w};
    for (int j = 1; j <= kind.spec.p; ++j) {
      const ComplexField jet = phi_series_coefficient(
          kind.spec, t, u, std::span<const ComplexField* const>(terms), j);
      const ComplexField ref = n_j_integrand(kind.spec, t, u, w, j);
      if (max_abs(ref) == 0.0)
        CHECK(max_abs(jet) < 1e-13);
      else
        CHECK(rel_field_diff(jet, ref) < 1e-12);
    }
  }
}
