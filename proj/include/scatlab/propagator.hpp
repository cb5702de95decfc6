#pragma once

#include <memory>
#include <vector>

#include "scatlab/field.hpp"

namespace scatlab {

enum class PropagatorKind { SchrodingerFree, KleinGordon, ToyDiagonal };

// The linear group U(t): free Schroedinger multiplier exp(-i t xi^2 / 2),
// the Klein-Gordon pair rotation with W(t) = sin(omega t)/omega and
// omega = sqrt(xi^2 + m^2), or a diagonal unitary diag(exp(i alpha_m t)).
struct PropagatorSpec {
  PropagatorKind kind = PropagatorKind::SchrodingerFree;
  std::shared_ptr<const SpatialGrid> grid;
  double kg_mass = 1.0;  // 0 selects the wave multiplier
  std::vector<double> toy_frequencies;

  static PropagatorSpec schrodinger(std::shared_ptr<const SpatialGrid> grid);
  static PropagatorSpec klein_gordon(std::shared_ptr<const SpatialGrid> grid,
                                     double mass = 1.0);
  static PropagatorSpec toy(std::shared_ptr<const SpatialGrid> grid,
                            std::vector<double> frequencies = {});

  int components() const {
    return kind == PropagatorKind::KleinGordon ? 2 : 1;
  }
};

ComplexField apply_U(const PropagatorSpec& spec, double t,
                     const ComplexField& f);

// Galilean operator J(t) f = x f + i t grad f (free Schroedinger only).
ComplexField apply_J(const PropagatorSpec& spec, double t,
                     const ComplexField& f);

// Largest linear phase advanced in one step of size dt; used by the
// integrator stability warning.
double max_phase_per_step(const PropagatorSpec& spec, double dt);

}  // namespace scatlab
