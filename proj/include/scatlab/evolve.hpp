#pragma once

#include "scatlab/nonlinearity.hpp"
#include "scatlab/propagator.hpp"
#include "scatlab/trajectory.hpp"

namespace scatlab {

enum class Scheme { StrangSplit, LawsonRK4 };

struct IntegratorConfig {
  double dt = 1e-3;
  Scheme scheme = Scheme::StrangSplit;
  double T = 1.0;                     // horizon: evolution lives in [-T, T]
  int conservation_check_every = 0;   // steps between log entries; 0 = off
  int snapshot_stride = 1;            // trajectory node spacing in steps
  double stability_phase_threshold = 3.141592653589793;

  void validate() const;
};

struct ConservationLog {
  std::vector<double> times;
  std::vector<double> mass;    // NaN where the equation has no mass invariant
  std::vector<double> energy;  // NaN where no energy functional is tracked
};

// Conserved functionals of the flow (used by the drift monitor and tests).
double mass_functional(const PropagatorSpec& prop, const ComplexField& u);
double energy_functional(const PropagatorSpec& prop,
                         const NonlinearitySpec& nl, const ComplexField& u);

// Full nonlinear flow from u(t_init) = u_init up to t = T. Snapshots are
// recorded every snapshot_stride steps. Strang splitting applies the
// exact half-step multiplier around the exact pointwise gauge rotation
// (GaugePower only); LawsonRK4 is the exponential integrator used for
// Klein-Gordon pairs and the toy kinds.
Trajectory solve_nonlinear(const PropagatorSpec& prop,
                           const NonlinearitySpec& nl,
                           const IntegratorConfig& cfg,
                           const ComplexField& u_init, double t_init,
                           ConservationLog* log = nullptr);

// Linearized flow dw/dt = L w + Phi'(ubar(t))[w] + source(t) along a
// stored background, integrated with LawsonRK4 at the background node
// spacing; background and source values at stage midpoints come from
// 4-point cubic interpolation. Pass source = nullptr for a homogeneous
// tangent solve.
Trajectory solve_tangent(const PropagatorSpec& prop,
                         const NonlinearitySpec& nl,
                         const Trajectory& background,
                         const ComplexField& w_init, double t_init,
                         const Trajectory* source = nullptr);

// Same flow, returning only the final state (memory-light variant).
ComplexField solve_tangent_final(const PropagatorSpec& prop,
                                 const NonlinearitySpec& nl,
                                 const Trajectory& background,
                                 const ComplexField& w_init, double t_init,
                                 const Trajectory* source = nullptr);

}  // namespace scatlab
