#include "scatlab/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace scatlab {

namespace {
bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

SpatialGrid::SpatialGrid(GridKind kind, double length, int size)
    : kind_(kind), length_(length), size_(size) {
  if (kind_ == GridKind::Periodic1D) {
    const double dx = length_ / size_;
    coords_.resize(size_);
    wavenumbers_.resize(size_);
    for (int j = 0; j < size_; ++j) {
      coords_[j] = -0.5 * length_ + j * dx;
      const int m = (j < size_ / 2) ? j : j - size_;
      wavenumbers_[j] = 2.0 * std::numbers::pi * m / length_;
    }
  }
}

std::shared_ptr<const SpatialGrid> SpatialGrid::periodic(double length,
                                                         int points) {
  if (!(length > 0.0))
    throw std::invalid_argument("SpatialGrid: box length must be positive");
  if (points < 8 || !is_power_of_two(points))
    throw std::invalid_argument(
        "SpatialGrid: point count must be a power of two >= 8");
  return std::shared_ptr<const SpatialGrid>(
      new SpatialGrid(GridKind::Periodic1D, length, points));
}

std::shared_ptr<const SpatialGrid> SpatialGrid::toy(int dimension) {
  if (dimension < 1)
    throw std::invalid_argument("SpatialGrid: toy dimension must be >= 1");
  return std::shared_ptr<const SpatialGrid>(
      new SpatialGrid(GridKind::ToyVector, 0.0, dimension));
}

bool SpatialGrid::same_as(const SpatialGrid& other) const {
  if (this == &other) return true;
  return kind_ == other.kind_ && size_ == other.size_ &&
         length_ == other.length_;
}

}  // namespace scatlab
