#pragma once

#include <span>

#include "scatlab/taylor.hpp"

namespace scatlab {

enum class FormKind { SchrodingerForm, WaveForm };

// Skew-symmetric pairings: Im int conj(u1) u2 dx for Schroedinger fields,
// int (u1 d_t u2 - u2 d_t u1) dx for wave/Klein-Gordon pairs.
double omega(FormKind kind, const ComplexField& f, const ComplexField& g);

struct OmegaReport {
  FormKind form_kind = FormKind::SchrodingerForm;
  double value_minus = 0.0;  // omega at the asymptotic pair (v-^a, v-^b)
  double value_plus = 0.0;   // omega at (dS v-^a, dS v-^b)
  double relative_defect = 0.0;
};

// Invariance of omega under the linearized scattering map along a
// converged background.
OmegaReport omega_invariance(const PropagatorSpec& prop,
                             const NonlinearitySpec& nl,
                             const ScatteringResult& background,
                             const ComplexField& v_a, const ComplexField& v_b);

struct InverseScatteringReport {
  std::vector<double> eps_list;
  std::vector<double> residual_norms;     // || S(eps phi) - eps phi ||, primary norm
  std::vector<double> residual_norms_h1;  // same in H^1 (PDE only)
  bool p_hat_defined = false;
  double p_hat = 0.0;
  double p_hat_h1 = 0.0;
  double born_residual_slope = 0.0;
  bool born_slope_defined = false;
  // State needed by estimate_lambda: the residual at the smallest reliable
  // eps and the unit-coupling first correction term.
  double eps_smallest = 0.0;
  ComplexField residual_at_smallest;
  ComplexField born_unit;
};

// First correction term of the small-data expansion: the time integral of
// U(-t) Phi(t, U(t) phi) over [-T, T] by composite trapezoid. The group is
// exact at any t, so the quadrature grid may be refined below the solver
// step (substeps > 1) when the trapezoid error would otherwise mask the
// high-order remainder. Includes the coupling factors of nl.
ComplexField born_term(const PropagatorSpec& prop, const NonlinearitySpec& nl,
                       const IntegratorConfig& cfg, const ComplexField& phi0,
                       int substeps = 1);

// Power recovery: fits log || S(eps phi) - eps phi || against log eps.
// The primary norm is L^2 (Euclidean for the toy model); H^1 residuals are
// also recorded for PDE runs.
InverseScatteringReport estimate_power(const PropagatorSpec& prop,
                                       const NonlinearitySpec& nl,
                                       const IntegratorConfig& cfg,
                                       const ComplexField& phi0,
                                       std::span<const double> eps_list,
                                       const StrichartzExponents& exps,
                                       const ScatterThresholds& thresholds = {},
                                       int born_substeps = 1);

// Coupling recovery: closed-form one-dimensional least squares at the
// smallest reliable eps (the first correction term is linear in lambda).
// Requires p_hat resolved to an integer within 0.2.
double estimate_lambda(const InverseScatteringReport& report);

}  // namespace scatlab
