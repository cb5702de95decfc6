#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "scatlab/evolve.hpp"
#include "scatlab/norms.hpp"

namespace scatlab {

struct ScatterThresholds {
  double tail = 1e-4;           // relative to the data norm of u_minus
  double boundary_mass = 1e-6;  // fraction of mass in the outer 10% of the box
  double noise_floor = 1e-12;   // relative solver noise floor for fits
};

// Finite-horizon surrogate of the scattering construction: the asymptotic
// state u_minus is prescribed through u(-T) = U(-T) u_minus, the flow is
// integrated across [-T, T], and u_plus = U(-T) u(T). The committed
// truncation error is made observable through the Cauchy tail samples
// || U(-t2) u(t2) - U(-t1) u(t1) ||_D at checkpoints T/4, T/2, 3T/4, T.
struct ScatteringResult {
  ComplexField u_minus;
  ComplexField u_at_zero;  // wave-operator value u(0)
  ComplexField u_plus;
  double horizon = 0.0;
  std::vector<std::pair<double, double>> cauchy_tail;  // (t, tail sample)
  double boundary_mass_max = 0.0;
  NormReport norm_table;
  bool converged = false;
  Trajectory trajectory;
};

ScatteringResult scatter(const PropagatorSpec& prop, const NonlinearitySpec& nl,
                         const IntegratorConfig& cfg,
                         const ComplexField& u_minus,
                         const StrichartzExponents& exps,
                         const ScatterThresholds& thresholds = {},
                         ConservationLog* log = nullptr);

// v_plus = dS(u_minus)[v_minus]: the tangent flow along a converged
// background, pulled back to asymptotic variables at both ends.
ComplexField linearized_scatter(const PropagatorSpec& prop,
                                const NonlinearitySpec& nl,
                                const ScatteringResult& background,
                                const ComplexField& v_minus);

// Greedy decomposition of [-T, T] into maximal intervals on which the
// empirical contraction bound C_emp ||1_I ubar||_{F2}^delta
// ||ubar||_F^{p-1-delta} stays below 1/2.
std::vector<Interval> partition_intervals(const Trajectory& background,
                                          const StrichartzExponents& exps,
                                          double c_emp);

// Least-squares estimate of the degree-1 continuity constant: fits
// || N_1(ubar, v) ||_F against ||ubar||_{F2}^delta ||ubar||_F^{p-1-delta}
// ||v||_F over seeded random free-flow probes v.
double measure_h2_constant(const PropagatorSpec& prop,
                           const NonlinearitySpec& nl,
                           const Trajectory& background,
                           const StrichartzExponents& exps, int probes,
                           uint64_t seed);

}  // namespace scatlab
