#include "scatlab/profiles.hpp"

#include <cmath>
#include <stdexcept>

namespace scatlab {

namespace {
void require_periodic(const std::shared_ptr<const SpatialGrid>& grid,
                      const char* where) {
  if (!grid || grid->kind() != GridKind::Periodic1D)
    throw std::invalid_argument(std::string(where) + ": needs a periodic grid");
}
}  // namespace

ComplexField gaussian_profile(std::shared_ptr<const SpatialGrid> grid,
                              double amplitude, double width) {
  require_periodic(grid, "gaussian_profile");
  if (!(width > 0.0))
    throw std::invalid_argument("gaussian_profile: width must be positive");
  ComplexField f(grid, 1);
  const auto& x = grid->coords();
  for (int j = 0; j < grid->size(); ++j) {
    const double r = x[j] / width;
    f.values()[j] = amplitude * std::exp(-r * r);
  }
  return f;
}

ComplexField packet_profile(std::shared_ptr<const SpatialGrid> grid,
                            double amplitude, double width,
                            double wavenumber) {
  ComplexField f = gaussian_profile(grid, amplitude, width);
  const auto& x = grid->coords();
  for (int j = 0; j < grid->size(); ++j)
    f.values()[j] *=
        Complex(std::cos(wavenumber * x[j]), std::sin(wavenumber * x[j]));
  return f;
}

ComplexField gaussian_pair_profile(std::shared_ptr<const SpatialGrid> grid,
                                   double amplitude, double width) {
  require_periodic(grid, "gaussian_pair_profile");
  ComplexField u = gaussian_profile(grid, amplitude, width);
  ComplexField pair(grid, 2);
  for (int j = 0; j < grid->size(); ++j)
    pair.component(0)[j] = u.values()[j];
  return pair;
}

ComplexField toy_profile(std::shared_ptr<const SpatialGrid> grid,
                         double amplitude) {
  if (!grid || grid->kind() != GridKind::ToyVector)
    throw std::invalid_argument("toy_profile: needs a toy grid");
  ComplexField f(grid, 1);
  for (int m = 0; m < grid->size(); ++m) {
    const double mm = static_cast<double>(m);
    f.values()[m] = amplitude / std::sqrt(1.0 + mm) *
                    Complex(std::cos(mm), std::sin(mm));
  }
  return f;
}

}  // namespace scatlab
