#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "scatlab/trajectory.hpp"

namespace scatlab {

// Exact rational arithmetic for the Strichartz exponent bookkeeping.
struct Rational {
  int64_t num = 0;
  int64_t den = 1;

  Rational() = default;
  Rational(int64_t n, int64_t d);
  static Rational integer(int64_t n) { return Rational(n, 1); }

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  bool operator==(const Rational& o) const {
    return num == o.num && den == o.den;
  }
  double value() const { return static_cast<double>(num) / den; }
};

// Admissible space-time exponents: q = (4p+4)/(n(p-1)), r = p+1,
// theta = ((p+1)/(p-1)) ((n(p-1)-4)/(n(p-1))), delta = 1 - theta.
// The toy variant carries a configurable time exponent and, when the
// coupling is time-dependent, the weight used in the time quadrature.
struct StrichartzExponents {
  int p = 0;
  int n = 1;
  Rational q;
  Rational r;
  Rational theta;
  Rational delta;
  // Optional weight under the L^q_t quadrature (toy kinds only; the
  // integrable coupling is what makes restricted norms vanish on tails).
  std::function<double(double)> time_weight;

  static StrichartzExponents for_nls(int p, int n = 1);
  // Toy norms: Euclidean X-norm with a configurable time exponent. The
  // default q = 1 together with the coupling weight keeps restricted
  // norms proportional to the integrated coupling, which is what makes
  // the interval-partition diagnostic feasible at finite resolution.
  static StrichartzExponents toy(int p, int q_time = 1,
                                 std::function<double(double)> weight = {});

  double weight_at(double t) const { return time_weight ? time_weight(t) : 1.0; }
};

struct Interval {
  double a = 0.0;
  double b = 0.0;
};

struct NormReport {
  double d_norm = 0.0;   // data norm of the first snapshot in the interval
  double f1_norm = 0.0;  // sup over nodes of the data norm
  double f2_norm = 0.0;  // L^q_t quadrature of the spatial X-norm
  std::optional<double> f3_norm;  // J-augmented norm (Schroedinger only)
  double f_norm = 0.0;   // max(f1, f2) (+ f3 when present)
  Interval restricted_to;
};

// Data norms. h1_norm rejects multi-component fields; d_norm dispatches
// on the field shape (H^1, H^1 x L^2 energy norm, Euclidean).
double l2_norm(const ComplexField& f);
double h1_norm(const ComplexField& f);
double kg_energy_norm(const ComplexField& f);
double euclidean_norm(const ComplexField& f);
double d_norm(const ComplexField& f);
// Weighted data norm ||f||_{H^1} + ||x f||_{L^2} (periodic one-component
// fields; the coordinate is the centered sawtooth).
double sigma_norm(const ComplexField& f);

// (dx sum |f_c|^r)^(1/r) of one component.
double lr_norm_component(const ComplexField& f, int component, double r);
// Spatial X-norm entering F2: W^{1,r} for one-component periodic fields
// (||f||_r + ||f'||_r), W^{1,r} x L^r for pairs, Euclidean for toy.
double x_norm(const ComplexField& f, double r);

// Fraction of the total mass sitting in the outer 10% of the box.
double boundary_mass_fraction(const ComplexField& f);

// Space-time norms of a trajectory restricted to an interval.
NormReport f_norms(const Trajectory& traj, Interval interval,
                   const StrichartzExponents& exps, bool with_J = false);

inline NormReport f_norms_full(const Trajectory& traj,
                               const StrichartzExponents& exps,
                               bool with_J = false) {
  return f_norms(traj, {traj.t0(), traj.t1()}, exps, with_J);
}

}  // namespace scatlab
