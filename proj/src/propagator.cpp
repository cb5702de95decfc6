#include "scatlab/propagator.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "scatlab/fft.hpp"

namespace scatlab {

PropagatorSpec PropagatorSpec::schrodinger(
    std::shared_ptr<const SpatialGrid> grid) {
  if (!grid || grid->kind() != GridKind::Periodic1D)
    throw std::invalid_argument("schrodinger propagator needs a periodic grid");
  PropagatorSpec s;
  s.kind = PropagatorKind::SchrodingerFree;
  s.grid = std::move(grid);
  return s;
}

PropagatorSpec PropagatorSpec::klein_gordon(
    std::shared_ptr<const SpatialGrid> grid, double mass) {
  if (!grid || grid->kind() != GridKind::Periodic1D)
    throw std::invalid_argument("klein-gordon propagator needs a periodic grid");
  if (mass < 0.0) throw std::invalid_argument("klein-gordon mass must be >= 0");
  PropagatorSpec s;
  s.kind = PropagatorKind::KleinGordon;
  s.grid = std::move(grid);
  s.kg_mass = mass;
  return s;
}

PropagatorSpec PropagatorSpec::toy(std::shared_ptr<const SpatialGrid> grid,
                                   std::vector<double> frequencies) {
  if (!grid || grid->kind() != GridKind::ToyVector)
    throw std::invalid_argument("toy propagator needs a toy grid");
  PropagatorSpec s;
  s.kind = PropagatorKind::ToyDiagonal;
  s.grid = std::move(grid);
  if (frequencies.empty()) {
    // Incommensurate defaults: sqrt of the first primes.
    static const double primes[] = {1.0, 2.0, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0};
    frequencies.resize(s.grid->size());
    for (int m = 0; m < s.grid->size(); ++m)
      frequencies[m] = std::sqrt(primes[m % 8]) * (1 + m / 8);
  }
  if (static_cast<int>(frequencies.size()) != s.grid->size())
    throw std::invalid_argument("toy propagator: frequency count != dimension");
  s.toy_frequencies = std::move(frequencies);
  return s;
}

namespace {

void check_input(const PropagatorSpec& spec, const ComplexField& f,
                 const char* where) {
  if (!f.grid().same_as(*spec.grid))
    throw std::invalid_argument(std::string(where) + ": grid mismatch");
  ensure_components(f, spec.components(), where);
  ensure_finite(f, where);
}

}  // namespace

ComplexField apply_U(const PropagatorSpec& spec, double t,
                     const ComplexField& f) {
  check_input(spec, f, "apply_U");
  ComplexField out = f;
  switch (spec.kind) {
    case PropagatorKind::SchrodingerFree: {
      const int n = spec.grid->size();
      Complex* u = out.component(0);
      spectral::forward_inplace(n, u);
      const auto& xi = spec.grid->wavenumbers();
      for (int m = 0; m < n; ++m) {
        const double phase = -0.5 * t * xi[m] * xi[m];
        u[m] *= Complex(std::cos(phase), std::sin(phase));
      }
      spectral::inverse_inplace(n, u);
      break;
    }
    case PropagatorKind::KleinGordon: {
      const int n = spec.grid->size();
      Complex* u = out.component(0);
      Complex* v = out.component(1);
      spectral::forward_inplace(n, u);
      spectral::forward_inplace(n, v);
      const auto& xi = spec.grid->wavenumbers();
      const double m2 = spec.kg_mass * spec.kg_mass;
      for (int m = 0; m < n; ++m) {
        const double w = std::sqrt(xi[m] * xi[m] + m2);
        double c, s_over_w, minus_w_s;
        if (w == 0.0) {
          // Analytic limit of the massless zero mode: W(t) = t.
          c = 1.0;
          s_over_w = t;
          minus_w_s = 0.0;
        } else {
          c = std::cos(w * t);
          const double s = std::sin(w * t);
          s_over_w = s / w;
          minus_w_s = -w * s;
        }
        const Complex a = u[m], b = v[m];
        u[m] = c * a + s_over_w * b;
        v[m] = minus_w_s * a + c * b;
      }
      spectral::inverse_inplace(n, u);
      spectral::inverse_inplace(n, v);
      break;
    }
    case PropagatorKind::ToyDiagonal: {
      Complex* u = out.component(0);
      for (int m = 0; m < spec.grid->size(); ++m) {
        const double phase = spec.toy_frequencies[m] * t;
        u[m] *= Complex(std::cos(phase), std::sin(phase));
      }
      break;
    }
  }
  return out;
}

ComplexField apply_J(const PropagatorSpec& spec, double t,
                     const ComplexField& f) {
  if (spec.kind != PropagatorKind::SchrodingerFree)
    throw std::invalid_argument(
        "apply_J: unsupported combination (free Schroedinger only)");
  check_input(spec, f, "apply_J");
  ComplexField out = spectral::derivative(f);
  out *= Complex(0.0, t);
  const auto& x = spec.grid->coords();
  Complex* o = out.component(0);
  const Complex* u = f.component(0);
  for (int j = 0; j < spec.grid->size(); ++j) o[j] += x[j] * u[j];
  return out;
}

double max_phase_per_step(const PropagatorSpec& spec, double dt) {
  switch (spec.kind) {
    case PropagatorKind::SchrodingerFree: {
      const double xi_max =
          std::numbers::pi * spec.grid->size() / spec.grid->length();
      return 0.5 * xi_max * xi_max * dt;
    }
    case PropagatorKind::KleinGordon: {
      const double xi_max =
          std::numbers::pi * spec.grid->size() / spec.grid->length();
      return std::sqrt(xi_max * xi_max + spec.kg_mass * spec.kg_mass) * dt;
    }
    case PropagatorKind::ToyDiagonal: {
      double m = 0.0;
      for (double a : spec.toy_frequencies) m = std::max(m, std::abs(a));
      return m * dt;
    }
  }
  return 0.0;
}

}  // namespace scatlab
