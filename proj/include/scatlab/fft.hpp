#pragma once

#include "scatlab/field.hpp"

namespace scatlab::spectral {

// Unnormalized forward DFT: out_m = sum_j in_j exp(-2 pi i j m / n).
void forward_inplace(int n, Complex* data);
// Inverse DFT including the 1/n factor.
void inverse_inplace(int n, Complex* data);

// Spectral derivative of one component buffer, physical -> physical.
void derivative_inplace(const SpatialGrid& grid, Complex* component);

// Per-component spectral derivative of a whole field.
ComplexField derivative(const ComplexField& f);

}  // namespace scatlab::spectral
