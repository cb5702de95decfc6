#include "scatlab/consequences.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "scatlab/errors.hpp"

namespace scatlab {

double omega(FormKind kind, const ComplexField& f, const ComplexField& g) {
  ensure_same_shape(f, g, "omega");
  ensure_finite(f, "omega");
  ensure_finite(g, "omega");
  const double dx =
      f.grid().kind() == GridKind::Periodic1D ? f.grid().dx() : 1.0;
  switch (kind) {
    case FormKind::SchrodingerForm: {
      ensure_components(f, 1, "omega(SchrodingerForm)");
      Complex s(0.0, 0.0);
      const Complex* a = f.component(0);
      const Complex* b = g.component(0);
      for (int j = 0; j < f.points(); ++j) s += std::conj(a[j]) * b[j];
      return dx * s.imag();
    }
    case FormKind::WaveForm: {
      ensure_components(f, 2, "omega(WaveForm)");
      Complex s(0.0, 0.0);
      for (int j = 0; j < f.points(); ++j)
        s += f.component(0)[j] * g.component(1)[j] -
             g.component(0)[j] * f.component(1)[j];
      return dx * s.real();
    }
  }
  return 0.0;
}

OmegaReport omega_invariance(const PropagatorSpec& prop,
                             const NonlinearitySpec& nl,
                             const ScatteringResult& background,
                             const ComplexField& v_a,
                             const ComplexField& v_b) {
  OmegaReport rep;
  rep.form_kind = prop.kind == PropagatorKind::KleinGordon
                      ? FormKind::WaveForm
                      : FormKind::SchrodingerForm;
  const ComplexField va_plus = linearized_scatter(prop, nl, background, v_a);
  const ComplexField vb_plus = linearized_scatter(prop, nl, background, v_b);
  rep.value_minus = omega(rep.form_kind, v_a, v_b);
  rep.value_plus = omega(rep.form_kind, va_plus, vb_plus);
  const double scale = d_norm(v_a) * d_norm(v_b);
  rep.relative_defect =
      scale > 0.0 ? std::abs(rep.value_plus - rep.value_minus) / scale : 0.0;
  return rep;
}

ComplexField born_term(const PropagatorSpec& prop, const NonlinearitySpec& nl,
                       const IntegratorConfig& cfg, const ComplexField& phi0,
                       int substeps) {
  cfg.validate();
  if (substeps < 1) throw std::invalid_argument("born_term: substeps < 1");
  ensure_finite(phi0, "born_term");
  const double T = cfg.T;
  const double dt = cfg.dt / substeps;
  const int steps = static_cast<int>(std::lround(2.0 * T / dt));
  ComplexField acc(phi0.grid_ptr(), phi0.components());
  for (int s = 0; s <= steps; ++s) {
    const double t = -T + s * dt;
    const double w = (s == 0 || s == steps) ? 0.5 : 1.0;
    const ComplexField integrand =
        apply_U(prop, -t, phi(nl, t, apply_U(prop, t, phi0)));
    axpy(Complex(w * dt, 0.0), integrand, acc);
  }
  return acc;
}

InverseScatteringReport estimate_power(const PropagatorSpec& prop,
                                       const NonlinearitySpec& nl,
                                       const IntegratorConfig& cfg,
                                       const ComplexField& phi0,
                                       std::span<const double> eps_list,
                                       const StrichartzExponents& exps,
                                       const ScatterThresholds& thresholds,
                                       int born_substeps) {
  if (eps_list.size() < 3)
    throw std::invalid_argument("estimate_power: need at least three eps");
  for (size_t i = 1; i < eps_list.size(); ++i) {
    if (!(eps_list[i] < eps_list[i - 1]))
      throw std::invalid_argument("estimate_power: eps list must decrease");
  }
  // Geometric spacing with ratio >= sqrt(2), within 1% slack.
  const double ratio0 = eps_list[0] / eps_list[1];
  for (size_t i = 1; i < eps_list.size(); ++i) {
    const double r = eps_list[i - 1] / eps_list[i];
    if (std::abs(r - ratio0) > 1e-2 * ratio0)
      throw std::invalid_argument("estimate_power: eps list is not geometric");
  }
  if (ratio0 < std::sqrt(2.0) * 0.99)
    throw std::invalid_argument("estimate_power: geometric ratio below sqrt(2)");

  const bool is_pde = phi0.grid().kind() == GridKind::Periodic1D;
  const bool is_pair = phi0.components() == 2;
  auto primary_norm = [&](const ComplexField& f) {
    return is_pde ? l2_norm(f) : euclidean_norm(f);
  };

  InverseScatteringReport rep;
  rep.born_unit = [&] {
    NonlinearitySpec unit = nl;
    unit.lambda = 1.0;
    return born_term(prop, unit, cfg, phi0, born_substeps);
  }();

  const double phi_scale = primary_norm(phi0);
  std::vector<ComplexField> residual_fields;
  for (double eps : eps_list) {
    ComplexField data = phi0;
    data *= Complex(eps, 0.0);
    const ScatteringResult res =
        scatter(prop, nl, cfg, data, exps, thresholds);
    ComplexField diff = res.u_plus;
    diff -= data;
    rep.eps_list.push_back(eps);
    rep.residual_norms.push_back(primary_norm(diff));
    if (is_pde && !is_pair) rep.residual_norms_h1.push_back(h1_norm(diff));
    // Weak-regime precondition: the correction must stay small against
    // the linear term.
    if (rep.residual_norms.back() > 0.2 * eps * phi_scale)
      throw std::invalid_argument(
          "estimate_power: eps outside the weak regime (residual not small "
          "against eps ||phi||)");
    residual_fields.push_back(std::move(diff));
  }

  const double floor_abs =
      thresholds.noise_floor * std::max(phi_scale, 1e-300);
  bool above_floor = true;
  for (double r : rep.residual_norms)
    if (r < 10.0 * floor_abs) above_floor = false;

  if (above_floor) {
    std::vector<double> lx, ly, lyh;
    for (size_t i = 0; i < rep.eps_list.size(); ++i) {
      lx.push_back(std::log(rep.eps_list[i]));
      ly.push_back(std::log(rep.residual_norms[i]));
      if (!rep.residual_norms_h1.empty())
        lyh.push_back(std::log(rep.residual_norms_h1[i]));
    }
    rep.p_hat_defined = true;
    rep.p_hat = linear_fit(lx, ly).first;
    if (!lyh.empty()) rep.p_hat_h1 = linear_fit(lx, lyh).first;

    // Residual after removing the first correction term. The fit runs
    // over the eps that keep the corrected residual above the noise
    // floor; at small eps the eps^{2p-1} remainder drops below solver
    // accuracy and carries no slope information.
    std::vector<double> lcx, lcy;
    for (size_t i = 0; i < rep.eps_list.size(); ++i) {
      ComplexField corrected = residual_fields[i];
      const double ep = std::pow(rep.eps_list[i], nl.p);
      axpy(Complex(-ep * nl.lambda, 0.0), rep.born_unit, corrected);
      const double r = primary_norm(corrected);
      if (r >= 10.0 * floor_abs) {
        lcx.push_back(lx[i]);
        lcy.push_back(std::log(r));
      }
    }
    if (lcx.size() >= 3) {
      rep.born_slope_defined = true;
      rep.born_residual_slope = linear_fit(lcx, lcy).first;
    }
    rep.eps_smallest = rep.eps_list.back();
    rep.residual_at_smallest = residual_fields.back();
  }
  return rep;
}

double estimate_lambda(const InverseScatteringReport& report) {
  if (!report.p_hat_defined)
    throw std::invalid_argument("estimate_lambda: p_hat undefined");
  const double p_round = std::round(report.p_hat);
  if (std::abs(report.p_hat - p_round) > 0.2) {
    std::ostringstream msg;
    msg << "estimate_lambda: p_hat = " << report.p_hat
        << " is not resolved to an integer within 0.2";
    throw std::invalid_argument(msg.str());
  }
  const double ep = std::pow(report.eps_smallest, p_round);
  // lambda_hat = argmin_lambda || r - lambda (eps^p B1) || in the real
  // inner product of the primary norm.
  const ComplexField& r = report.residual_at_smallest;
  const ComplexField& b = report.born_unit;
  // The quadrature weight is a common factor and cancels in the ratio.
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < r.values().size(); ++i) {
    const Complex bi = ep * b.values()[i];
    num += (std::conj(bi) * r.values()[i]).real();
    den += std::norm(bi);
  }
  if (den == 0.0)
    throw std::invalid_argument("estimate_lambda: degenerate correction term");
  return num / den;
}

}  // namespace scatlab
