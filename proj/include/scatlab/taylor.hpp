#pragma once

#include <span>
#include <vector>

#include "scatlab/scattering.hpp"

namespace scatlab {

// Taylor data of the scattering map at a background state: asymptotic
// coefficients w_k^+, their space-time norms, and the fitted geometric
// growth envelope ||w_k||_F <= Lambda^k.
struct SeriesResult {
  std::vector<ComplexField> w_plus;
  std::vector<double> f_norms_of_wk;
  double growth_lambda = 0.0;
  double radius_estimate = 0.0;  // 1 / growth_lambda
  double envelope_max_residual = 0.0;  // max positive residual of the log fit
  std::vector<std::pair<int, double>> remainder_orders;  // (K used, slope)
};

// The recursive hierarchy: w_0 solves the homogeneous tangent equation
// with asymptotic data u0; for m >= 1, w_m solves the tangent equation
// driven by the degree-(m+1) source assembled from w_0 ... w_{m-1}.
std::vector<Trajectory> build_hierarchy(const PropagatorSpec& prop,
                                        const NonlinearitySpec& nl,
                                        const Trajectory& background,
                                        const ComplexField& u0, int K);

// Reference assembly of one hierarchy source value by explicit multiset
// enumeration with multinomial multiplicities; used to cross-check the
// series-coefficient path (the two are algebraically identical).
ComplexField hierarchy_source_reference(
    const NonlinearitySpec& nl, double t, const ComplexField& background,
    std::span<const ComplexField* const> w_nodes, int m);

SeriesResult build_series(const PropagatorSpec& prop,
                          const NonlinearitySpec& nl,
                          const ScatteringResult& background,
                          const ComplexField& u0, int K,
                          const StrichartzExponents& exps);

// Partial sum ubar_+ + eps sum_{k<=K} eps^k w_k^+. Refuses eps outside the
// fitted radius unless force is set; *out_of_radius reports the marker.
ComplexField sum_series(const SeriesResult& series,
                        const ComplexField& u_plus_bar, double eps, int K,
                        bool force = false, bool* out_of_radius = nullptr);

struct RemainderFit {
  enum class Status { Ok, TriviallyZero };
  Status status = Status::Ok;
  double slope = 0.0;
  std::vector<std::pair<double, double>> samples;  // (eps, remainder)
};

// Fits log || S(ubar_- + eps u0) - partial sum || against log eps over a
// geometric eps list. Throws InconclusiveError when the remainder does not
// clear the solver noise floor by 10x.
RemainderFit remainder_order(const PropagatorSpec& prop,
                             const NonlinearitySpec& nl,
                             const IntegratorConfig& cfg,
                             const ScatteringResult& background,
                             const SeriesResult& series,
                             const ComplexField& u0, int K,
                             std::span<const double> eps_list,
                             const StrichartzExponents& exps,
                             const ScatterThresholds& thresholds = {});

// Least-squares line through (x, y) pairs; returns {slope, intercept}.
std::pair<double, double> linear_fit(std::span<const double> x,
                                     std::span<const double> y);

}  // namespace scatlab
