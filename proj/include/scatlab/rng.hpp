#pragma once

#include <cstdint>
#include <random>

#include "scatlab/field.hpp"

namespace scatlab {

// Deterministic random source. The generator is mt19937_64, which is
// fully specified by the standard, and doubles are produced with an
// explicit 53-bit mapping so that streams are reproducible across
// platforms and standard libraries.
class Rng {
public:
  static constexpr const char* algorithm = "mt19937_64";

  explicit Rng(uint64_t seed) : engine_(seed) {}

  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }
  double normal();
  Complex complex_normal() { return {normal(), normal()}; }

private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Seeded random smooth field on a periodic grid: low-mode Fourier
// coefficients with polynomial decay, localized by a Gaussian envelope
// and normalized so that the requested data norm equals target_norm.
ComplexField random_h1_field(std::shared_ptr<const SpatialGrid> grid, Rng& rng,
                             double target_norm);

// Same construction for a Klein-Gordon pair (both components random and
// real-valued), normalized in the energy norm.
ComplexField random_pair_field(std::shared_ptr<const SpatialGrid> grid,
                               Rng& rng, double target_norm);

// Random toy vector normalized in the Euclidean norm.
ComplexField random_toy_field(std::shared_ptr<const SpatialGrid> grid,
                              Rng& rng, double target_norm);

}  // namespace scatlab
