#include "scatlab/norms.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "scatlab/fft.hpp"
#include "scatlab/propagator.hpp"

namespace scatlab {

namespace {
int64_t gcd64(int64_t a, int64_t b) {
  while (b != 0) {
    int64_t t = a % b;
    a = b;
    b = t;
  }
  return a < 0 ? -a : a;
}
}  // namespace

Rational::Rational(int64_t n, int64_t d) : num(n), den(d) {
  if (den == 0) throw std::invalid_argument("Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const int64_t g = gcd64(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

Rational Rational::operator+(const Rational& o) const {
  return Rational(num * o.den + o.num * den, den * o.den);
}
Rational Rational::operator-(const Rational& o) const {
  return Rational(num * o.den - o.num * den, den * o.den);
}
Rational Rational::operator*(const Rational& o) const {
  return Rational(num * o.num, den * o.den);
}
Rational Rational::operator/(const Rational& o) const {
  if (o.num == 0) throw std::invalid_argument("Rational: division by zero");
  return Rational(num * o.den, den * o.num);
}

StrichartzExponents StrichartzExponents::for_nls(int p, int n) {
  if (n != 1)
    throw std::invalid_argument("StrichartzExponents: only n = 1 is supported");
  if (p < 3 || p % 2 == 0)
    throw std::invalid_argument("StrichartzExponents: p must be odd >= 3");
  if (p < 1 + 4 / n)
    throw std::invalid_argument("StrichartzExponents: need p >= 1 + 4/n");
  StrichartzExponents e;
  e.p = p;
  e.n = n;
  e.q = Rational(4 * p + 4, n * (p - 1));
  e.r = Rational(p + 1, 1);
  e.theta = Rational(p + 1, p - 1) * Rational(n * (p - 1) - 4, n * (p - 1));
  e.delta = Rational(1, 1) - e.theta;
  // Admissibility: 2/q = n (1/2 - 1/r), checked exactly.
  const Rational lhs = Rational(2, 1) / e.q;
  const Rational rhs =
      Rational(n, 1) * (Rational(1, 2) - Rational(1, 1) / e.r);
  if (!(lhs == rhs))
    throw std::logic_error("StrichartzExponents: admissibility identity failed");
  if (e.theta.value() < 0.0 || e.theta.value() >= 1.0)
    throw std::invalid_argument("StrichartzExponents: theta outside [0,1)");
  return e;
}

StrichartzExponents StrichartzExponents::toy(
    int p, int q_time, std::function<double(double)> weight) {
  if (p < 3 || p % 2 == 0)
    throw std::invalid_argument("StrichartzExponents: p must be odd >= 3");
  if (q_time < 1)
    throw std::invalid_argument("StrichartzExponents: q must be >= 1");
  StrichartzExponents e;
  e.p = p;
  e.n = 1;
  e.q = Rational(q_time, 1);
  e.r = Rational(2, 1);
  e.theta = Rational(0, 1);
  e.delta = Rational(1, 1);
  e.time_weight = std::move(weight);
  return e;
}

double l2_norm(const ComplexField& f) {
  ensure_finite(f, "l2_norm");
  const double dx =
      f.grid().kind() == GridKind::Periodic1D ? f.grid().dx() : 1.0;
  double s = 0.0;
  for (const Complex& v : f.values()) s += std::norm(v);
  return std::sqrt(dx * s);
}

double h1_norm(const ComplexField& f) {
  ensure_components(f, 1, "h1_norm");
  if (f.grid().kind() != GridKind::Periodic1D)
    throw std::invalid_argument("h1_norm: needs a periodic grid");
  ensure_finite(f, "h1_norm");
  const ComplexField df = spectral::derivative(f);
  const double a = l2_norm(f), b = l2_norm(df);
  return std::sqrt(a * a + b * b);
}

double kg_energy_norm(const ComplexField& f) {
  ensure_components(f, 2, "kg_energy_norm");
  ensure_finite(f, "kg_energy_norm");
  ComplexField u(f.grid_ptr(), 1), v(f.grid_ptr(), 1);
  const int n = f.points();
  for (int j = 0; j < n; ++j) {
    u.values()[j] = f.component(0)[j];
    v.values()[j] = f.component(1)[j];
  }
  const double a = h1_norm(u), b = l2_norm(v);
  return std::sqrt(a * a + b * b);
}

double euclidean_norm(const ComplexField& f) {
  ensure_finite(f, "euclidean_norm");
  double s = 0.0;
  for (const Complex& v : f.values()) s += std::norm(v);
  return std::sqrt(s);
}

double d_norm(const ComplexField& f) {
  if (f.grid().kind() == GridKind::ToyVector) return euclidean_norm(f);
  return f.components() == 2 ? kg_energy_norm(f) : h1_norm(f);
}

double sigma_norm(const ComplexField& f) {
  ensure_components(f, 1, "sigma_norm");
  if (f.grid().kind() != GridKind::Periodic1D)
    throw std::invalid_argument("sigma_norm: needs a periodic grid");
  ComplexField xf = f;
  const auto& x = f.grid().coords();
  for (int j = 0; j < f.points(); ++j) xf.values()[j] *= x[j];
  return h1_norm(f) + l2_norm(xf);
}

double lr_norm_component(const ComplexField& f, int component, double r) {
  if (r < 1.0) throw std::invalid_argument("lr_norm_component: r < 1");
  const double dx =
      f.grid().kind() == GridKind::Periodic1D ? f.grid().dx() : 1.0;
  double s = 0.0;
  const Complex* u = f.component(component);
  for (int j = 0; j < f.points(); ++j) s += std::pow(std::abs(u[j]), r);
  return std::pow(dx * s, 1.0 / r);
}

double x_norm(const ComplexField& f, double r) {
  if (f.grid().kind() == GridKind::ToyVector) return euclidean_norm(f);
  const ComplexField df = spectral::derivative(f);
  if (f.components() == 1)
    return lr_norm_component(f, 0, r) + lr_norm_component(df, 0, r);
  // Pair: W^{1,r} on the first component, L^r on the time derivative.
  return lr_norm_component(f, 0, r) + lr_norm_component(df, 0, r) +
         lr_norm_component(f, 1, r);
}

double boundary_mass_fraction(const ComplexField& f) {
  if (f.grid().kind() != GridKind::Periodic1D) return 0.0;
  const auto& x = f.grid().coords();
  const double edge = 0.45 * f.grid().length();
  double outer = 0.0, total = 0.0;
  const int n = f.points();
  for (int c = 0; c < f.components(); ++c) {
    const Complex* u = f.component(c);
    for (int j = 0; j < n; ++j) {
      const double m = std::norm(u[j]);
      total += m;
      if (std::abs(x[j]) >= edge) outer += m;
    }
  }
  return total > 0.0 ? outer / total : 0.0;
}

NormReport f_norms(const Trajectory& traj, Interval interval,
                   const StrichartzExponents& exps, bool with_J) {
  if (!(interval.a <= interval.b))
    throw std::invalid_argument("f_norms: empty interval");
  const double span = std::max(1.0, traj.t1() - traj.t0());
  int i0 = -1, i1 = -1;
  for (int i = 0; i < traj.nodes(); ++i) {
    const double t = traj.times()[i];
    if (t >= interval.a - 1e-9 * span && t <= interval.b + 1e-9 * span) {
      if (i0 < 0) i0 = i;
      i1 = i;
    }
  }
  if (i0 < 0) throw std::invalid_argument("f_norms: interval contains no nodes");

  const bool is_toy = traj.grid().kind() == GridKind::ToyVector;
  const bool is_pair = traj.components() == 2;
  if (with_J && (is_toy || is_pair))
    throw std::invalid_argument(
        "f_norms: J norms are unsupported for this equation");

  PropagatorSpec jspec;
  if (with_J) {
    auto grid_ptr = traj.at(0).grid_ptr();
    jspec = PropagatorSpec::schrodinger(grid_ptr);
  }

  NormReport rep;
  rep.restricted_to = interval;
  rep.d_norm = d_norm(traj.at(i0));

  const double q = exps.q.value();
  const double r = exps.r.value();
  const double h = traj.dt();

  double f1 = 0.0;
  std::vector<double> xq(i1 - i0 + 1);   // weighted |X-norm|^q per node
  std::vector<double> jq;                // |J L^r norm|^q per node
  double j_sup = 0.0;
  if (with_J) jq.resize(i1 - i0 + 1);

  for (int i = i0; i <= i1; ++i) {
    const ComplexField& snap = traj.at(i);
    f1 = std::max(f1, d_norm(snap));
    const double w = exps.weight_at(traj.times()[i]);
    xq[i - i0] = w * std::pow(x_norm(snap, r), q);
    if (with_J) {
      const ComplexField jf = apply_J(jspec, traj.times()[i], snap);
      j_sup = std::max(j_sup, l2_norm(jf));
      jq[i - i0] = std::pow(lr_norm_component(jf, 0, r), q);
    }
  }

  auto trapezoid = [&](const std::vector<double>& g) {
    if (g.size() < 2) return 0.0;
    double s = 0.5 * (g.front() + g.back());
    for (size_t i = 1; i + 1 < g.size(); ++i) s += g[i];
    return s * h;
  };

  rep.f1_norm = f1;
  rep.f2_norm = std::pow(trapezoid(xq), 1.0 / q);
  rep.f_norm = std::max(rep.f1_norm, rep.f2_norm);
  if (with_J) {
    rep.f3_norm = j_sup + std::pow(trapezoid(jq), 1.0 / q);
    rep.f_norm += *rep.f3_norm;
  }
  return rep;
}

}  // namespace scatlab
