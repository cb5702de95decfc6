#pragma once

#include <functional>
#include <span>
#include <vector>

#include "scatlab/field.hpp"

namespace scatlab {

enum class NonlinearityKind {
  GaugePower,           // -i lambda |u|^{p-1} u
  RealOddPower,         // (0, -lambda u^p) on a (u, du/dt) pair
  ToyGaugePower,        // -i lambda c(t) |u_m|^{p-1} u_m componentwise
  ToyConvolutionCubic,  // -i lambda c(t) (sum_k K_mk |u_k|^2) u_m
};

struct NonlinearitySpec {
  NonlinearityKind kind = NonlinearityKind::GaugePower;
  int p = 3;
  double lambda = 1.0;  // defocusing for lambda > 0
  std::function<double(double)> coupling;  // toy kinds; defaults to (1+t^2)^{-1}
  std::vector<double> conv_kernel;         // row-major d x d, symmetric

  static NonlinearitySpec gauge_power(int p, double lambda);
  static NonlinearitySpec real_odd_power(int p, double lambda);
  static NonlinearitySpec toy_gauge_power(
      int p, double lambda, std::function<double(double)> coupling = {});
  static NonlinearitySpec toy_convolution_cubic(
      double lambda, int dimension, std::vector<double> kernel = {},
      std::function<double(double)> coupling = {});

  int components() const {
    return kind == NonlinearityKind::RealOddPower ? 2 : 1;
  }
  bool time_dependent() const {
    return kind == NonlinearityKind::ToyGaugePower ||
           kind == NonlinearityKind::ToyConvolutionCubic;
  }
  double coupling_at(double t) const;
};

// Pointwise evaluation of Phi(t, u).
ComplexField phi(const NonlinearitySpec& spec, double t, const ComplexField& u);

// Frechet derivative Phi'(t, u)[w], in closed form. Agrees with
// n_j_integrand at j = 1; used as the hot path of the tangent solver.
ComplexField phi_linearized(const NonlinearitySpec& spec, double t,
                            const ComplexField& u, const ComplexField& w);

// The degree-j multilinear piece Phi_j(u; w_1, ..., w_j) of
// Phi(u + w) - Phi(u) = sum_j Phi_j(u; w, ..., w). Computed by exact
// polynomial degree extraction on interpolation nodes; unequal arguments
// are handled by real polarization (the forms are R-multilinear only).
ComplexField n_j_integrand(const NonlinearitySpec& spec, double t,
                           const ComplexField& background,
                           std::span<const ComplexField* const> ws, int j);

// Convenience overload with all arguments equal.
ComplexField n_j_integrand(const NonlinearitySpec& spec, double t,
                           const ComplexField& background,
                           const ComplexField& w, int j);

// Coefficient of eps^order in Phi(t, base + sum_k eps^{k+1} terms[k]),
// computed with truncated power-series arithmetic. This is the exact
// generating function of the hierarchy source terms.
ComplexField phi_series_coefficient(const NonlinearitySpec& spec, double t,
                                    const ComplexField& base,
                                    std::span<const ComplexField* const> terms,
                                    int order);

}  // namespace scatlab
