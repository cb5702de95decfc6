#pragma once

#include <complex>
#include <memory>
#include <vector>

namespace scatlab {

using Complex = std::complex<double>;

enum class GridKind { Periodic1D, ToyVector };

// Discretization of the spatial domain: either a periodic 1D grid on
// [-L/2, L/2) with a power-of-two number of points, or a plain
// d-component vector with no spatial structure ("toy").
class SpatialGrid {
public:
  static std::shared_ptr<const SpatialGrid> periodic(double length, int points);
  static std::shared_ptr<const SpatialGrid> toy(int dimension);

  GridKind kind() const { return kind_; }
  double length() const { return length_; }
  // Number of grid points (periodic) or vector dimension (toy).
  int size() const { return size_; }
  double dx() const { return length_ / size_; }

  // Physical coordinates x_j = -L/2 + j dx, and wavenumbers
  // xi_m = 2 pi m / L in standard DFT ordering. Empty for toy grids.
  const std::vector<double>& coords() const { return coords_; }
  const std::vector<double>& wavenumbers() const { return wavenumbers_; }

  bool same_as(const SpatialGrid& other) const;

private:
  SpatialGrid(GridKind kind, double length, int size);

  GridKind kind_;
  double length_;
  int size_;
  std::vector<double> coords_;
  std::vector<double> wavenumbers_;
};

}  // namespace scatlab
