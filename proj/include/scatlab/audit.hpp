#pragma once

#include <cstdint>

#include "scatlab/evolve.hpp"
#include "scatlab/norms.hpp"

namespace scatlab {

struct LinearBoundAudit {
  double c0 = 0.0;             // max over the corpus of f_norm(U(.)g)/||g||_D
  std::vector<double> ratios;  // per-probe ratios
};

// Empirical constant of the homogeneous space-time bound
// || U(.) g ||_F <= C_0 || g ||_D over a corpus of seeded random data.
// The free flow is sampled on the node grid implied by cfg (dt and
// snapshot_stride) across [-T, T].
LinearBoundAudit measure_linear_bound(const PropagatorSpec& prop,
                                      const StrichartzExponents& exps,
                                      const IntegratorConfig& cfg, int corpus,
                                      uint64_t seed, bool with_J = false);

// Free-flow trajectory U(t) g on the cfg node grid (no time stepping).
Trajectory free_flow(const PropagatorSpec& prop, const IntegratorConfig& cfg,
                     const ComplexField& g);

}  // namespace scatlab
