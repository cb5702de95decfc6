#include "scatlab/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "scatlab/fft.hpp"
#include "scatlab/norms.hpp"

namespace scatlab {

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller with explicit formulas (std::normal_distribution is not
  // pinned by the standard).
  double u1 = uniform01();
  while (u1 <= 0.0) u1 = uniform01();
  const double u2 = uniform01();
  const double rad = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * std::numbers::pi * u2;
  spare_ = rad * std::sin(ang);
  has_spare_ = true;
  return rad * std::cos(ang);
}

namespace {

// Low-mode random field with (1 + xi^2)^{-3/2} coefficient decay and a
// Gaussian envelope keeping the mass away from the box boundary.
ComplexField raw_random_component(const std::shared_ptr<const SpatialGrid>& grid,
                                  Rng& rng, bool real_valued) {
  const int n = grid->size();
  const int m_max = std::min(n / 4, 12);
  ComplexField f(grid, 1);
  Complex* u = f.values().data();
  const auto& xi = grid->wavenumbers();
  // Fill Fourier coefficients in a fixed index order for determinism.
  for (int m = -m_max; m <= m_max; ++m) {
    const int idx = m >= 0 ? m : m + n;
    const double decay = std::pow(1.0 + xi[idx] * xi[idx], -1.5);
    u[idx] = decay * rng.complex_normal();
  }
  if (real_valued) {
    for (int m = 1; m <= m_max; ++m) u[n - m] = std::conj(u[m]);
    u[0] = Complex(u[0].real(), 0.0);
  }
  spectral::inverse_inplace(n, u);
  const auto& x = grid->coords();
  const double w = grid->length() / 6.0;
  for (int j = 0; j < n; ++j) u[j] *= std::exp(-(x[j] / w) * (x[j] / w));
  return f;
}

void normalize_to(ComplexField& f, double current, double target) {
  if (current <= 0.0)
    throw std::runtime_error("random field: degenerate normalization");
  f *= Complex(target / current, 0.0);
}

}  // namespace

ComplexField random_h1_field(std::shared_ptr<const SpatialGrid> grid, Rng& rng,
                             double target_norm) {
  ComplexField f = raw_random_component(grid, rng, false);
  normalize_to(f, h1_norm(f), target_norm);
  return f;
}

ComplexField random_pair_field(std::shared_ptr<const SpatialGrid> grid,
                               Rng& rng, double target_norm) {
  ComplexField u = raw_random_component(grid, rng, true);
  ComplexField v = raw_random_component(grid, rng, true);
  ComplexField pair(grid, 2);
  const int n = grid->size();
  for (int j = 0; j < n; ++j) {
    pair.component(0)[j] = u.values()[j];
    pair.component(1)[j] = v.values()[j];
  }
  normalize_to(pair, kg_energy_norm(pair), target_norm);
  return pair;
}

ComplexField random_toy_field(std::shared_ptr<const SpatialGrid> grid,
                              Rng& rng, double target_norm) {
  if (grid->kind() != GridKind::ToyVector)
    throw std::invalid_argument("random_toy_field: needs a toy grid");
  ComplexField f(grid, 1);
  for (Complex& v : f.values()) v = rng.complex_normal();
  normalize_to(f, euclidean_norm(f), target_norm);
  return f;
}

}  // namespace scatlab
