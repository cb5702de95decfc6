#pragma once

#include "scatlab/field.hpp"

namespace scatlab {

// amplitude * exp(-(x/width)^2)
ComplexField gaussian_profile(std::shared_ptr<const SpatialGrid> grid,
                              double amplitude, double width);

// amplitude * exp(-(x/width)^2) * exp(i k x)
ComplexField packet_profile(std::shared_ptr<const SpatialGrid> grid,
                            double amplitude, double width, double wavenumber);

// Klein-Gordon pair (gaussian, 0).
ComplexField gaussian_pair_profile(std::shared_ptr<const SpatialGrid> grid,
                                   double amplitude, double width);

// Toy vector with entries amplitude * exp(i m) / sqrt(1 + m).
ComplexField toy_profile(std::shared_ptr<const SpatialGrid> grid,
                         double amplitude);

}  // namespace scatlab
