#include "scatlab/taylor.hpp"

#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "scatlab/errors.hpp"

namespace scatlab {

std::pair<double, double> linear_fit(std::span<const double> x,
                                     std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("linear_fit: need at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("linear_fit: degenerate x");
  const double slope = (n * sxy - sx * sy) / denom;
  return {slope, (sy - slope * sx) / n};
}

std::vector<Trajectory> build_hierarchy(const PropagatorSpec& prop,
                                        const NonlinearitySpec& nl,
                                        const Trajectory& background,
                                        const ComplexField& u0, int K) {
  if (K < 0) throw std::invalid_argument("build_hierarchy: K < 0");
  ensure_finite(u0, "build_hierarchy");
  // K + 1 stored trajectories plus the working source.
  const double bytes = (K + 2.0) * background.nodes() *
                       background.components() * background.grid().size() *
                       sizeof(Complex);
  if (bytes > 8e9)
    throw std::invalid_argument(
        "build_hierarchy: requested hierarchy exceeds the memory budget "
        "(reduce K, the node count, or the grid)");
  const double T = -background.t0();
  std::vector<Trajectory> w;
  w.reserve(K + 1);

  // w_0: homogeneous tangent flow with asymptotic data u0.
  const ComplexField w0_init = apply_U(prop, -T, u0);
  w.push_back(
      solve_tangent(prop, nl, background, w0_init, background.t0(), nullptr));

  auto grid = background.at(0).grid_ptr();
  const int components = background.components();
  for (int m = 1; m <= K; ++m) {
    // Source S_m(t): coefficient of eps^{m+1} in
    // Phi(ubar + sum_{k<m} eps^{k+1} w_k). The degree-1 term in w_m itself
    // cannot appear since only k <= m-1 enter the generating sum.
    std::vector<double> times = background.times();
    std::vector<ComplexField> snaps;
    snaps.reserve(background.nodes());
    std::vector<const ComplexField*> terms(m);
    for (int i = 0; i < background.nodes(); ++i) {
      for (int k = 0; k < m; ++k) terms[k] = &w[k].at(i);
      snaps.push_back(phi_series_coefficient(
          nl, times[i], background.at(i),
          std::span<const ComplexField* const>(terms), m + 1));
    }
    Trajectory source(std::move(times), std::move(snaps));
    ComplexField zero_init(grid, components);
    w.push_back(solve_tangent(prop, nl, background, zero_init,
                              background.t0(), &source));
  }
  return w;
}

namespace {

// Enumerate multisets 0 <= l_1 <= ... <= l_j with given sum and max entry.
void enumerate_multisets(int slots, int sum, int max_entry, int min_entry,
                         std::vector<int>& current,
                         const std::function<void(const std::vector<int>&)>& f) {
  if (slots == 0) {
    if (sum == 0) f(current);
    return;
  }
  for (int v = min_entry; v <= std::min(sum, max_entry); ++v) {
    current.push_back(v);
    enumerate_multisets(slots - 1, sum - v, max_entry, v, current, f);
    current.pop_back();
  }
}

double multinomial_permutations(const std::vector<int>& multiset) {
  // Number of ordered tuples realizing the multiset: j! / prod(mult_c!).
  double num = 1.0;
  for (size_t i = 1; i <= multiset.size(); ++i) num *= static_cast<double>(i);
  size_t i = 0;
  while (i < multiset.size()) {
    size_t j = i;
    while (j < multiset.size() && multiset[j] == multiset[i]) ++j;
    double fact = 1.0;
    for (size_t k = 1; k <= j - i; ++k) fact *= static_cast<double>(k);
    num /= fact;
    i = j;
  }
  return num;
}

}  // namespace

ComplexField hierarchy_source_reference(
    const NonlinearitySpec& nl, double t, const ComplexField& background,
    std::span<const ComplexField* const> w_nodes, int m) {
  if (m < 1) throw std::invalid_argument("hierarchy_source_reference: m < 1");
  if (static_cast<int>(w_nodes.size()) < m)
    throw std::invalid_argument("hierarchy_source_reference: need w_0..w_{m-1}");
  ComplexField out(background.grid_ptr(), background.components());
  for (int j = 2; j <= nl.p; ++j) {
    const int index_sum = m + 1 - j;
    if (index_sum < 0) continue;
    std::vector<int> current;
    enumerate_multisets(
        j, index_sum, m - 1, 0, current, [&](const std::vector<int>& ls) {
          // Well-foundedness: every contributing index must be < m.
          for (int l : ls)
            if (l > m - 1)
              throw std::logic_error(
                  "hierarchy_source_reference: index bookkeeping violated");
          std::vector<const ComplexField*> args;
          args.reserve(j);
          for (int l : ls) args.push_back(w_nodes[l]);
          const double count = multinomial_permutations(ls);
          axpy(Complex(count, 0.0),
               n_j_integrand(nl, t, background,
                             std::span<const ComplexField* const>(args), j),
               out);
        });
  }
  return out;
}

SeriesResult build_series(const PropagatorSpec& prop,
                          const NonlinearitySpec& nl,
                          const ScatteringResult& background,
                          const ComplexField& u0, int K,
                          const StrichartzExponents& exps) {
  if (!background.converged)
    throw std::invalid_argument("build_series: background not converged");
  const std::vector<Trajectory> w =
      build_hierarchy(prop, nl, background.trajectory, u0, K);
  SeriesResult series;
  series.w_plus.reserve(K + 1);
  series.f_norms_of_wk.reserve(K + 1);
  const double T = background.horizon;
  for (const Trajectory& traj : w) {
    series.w_plus.push_back(apply_U(prop, -T, traj.at(traj.nodes() - 1)));
    series.f_norms_of_wk.push_back(f_norms_full(traj, exps).f_norm);
  }

  // Geometric envelope fit on k >= 1 (w_0 scales with ||u0||_D and is
  // excluded); exact zeros (sparse hierarchy) carry no envelope information.
  std::vector<double> ks, logs;
  for (int k = 1; k <= K; ++k) {
    if (series.f_norms_of_wk[k] > 0.0) {
      ks.push_back(static_cast<double>(k));
      logs.push_back(std::log(series.f_norms_of_wk[k]));
    }
  }
  if (ks.size() >= 2) {
    const auto [slope, intercept] = linear_fit(ks, logs);
    series.growth_lambda = std::exp(slope);
    series.radius_estimate = 1.0 / series.growth_lambda;
    double max_res = 0.0;
    for (size_t i = 0; i < ks.size(); ++i)
      max_res = std::max(max_res, logs[i] - (slope * ks[i] + intercept));
    series.envelope_max_residual = max_res;
  } else if (ks.size() == 1) {
    series.growth_lambda = std::exp(logs[0] / ks[0]);
    series.radius_estimate = 1.0 / series.growth_lambda;
  }
  return series;
}

ComplexField sum_series(const SeriesResult& series,
                        const ComplexField& u_plus_bar, double eps, int K,
                        bool force, bool* out_of_radius) {
  if (K < 0 || K >= static_cast<int>(series.w_plus.size()))
    throw std::invalid_argument("sum_series: K exceeds available coefficients");
  const bool outside =
      series.growth_lambda > 0.0 && !(eps * series.growth_lambda < 1.0);
  if (out_of_radius) *out_of_radius = outside;
  if (outside && !force) {
    std::ostringstream msg;
    msg << "sum_series: eps = " << eps
        << " lies outside the estimated radius 1/Lambda = "
        << series.radius_estimate << " (pass force to override)";
    throw std::invalid_argument(msg.str());
  }
  ComplexField out = u_plus_bar;
  double factor = eps;
  for (int k = 0; k <= K; ++k) {
    axpy(Complex(factor, 0.0), series.w_plus[k], out);
    factor *= eps;
  }
  return out;
}

RemainderFit remainder_order(const PropagatorSpec& prop,
                             const NonlinearitySpec& nl,
                             const IntegratorConfig& cfg,
                             const ScatteringResult& background,
                             const SeriesResult& series,
                             const ComplexField& u0, int K,
                             std::span<const double> eps_list,
                             const StrichartzExponents& exps,
                             const ScatterThresholds& thresholds) {
  if (eps_list.size() < 2)
    throw std::invalid_argument("remainder_order: need at least two eps");
  const double ratio0 = eps_list[0] / eps_list[1];
  for (size_t i = 1; i < eps_list.size(); ++i) {
    const double r = eps_list[i - 1] / eps_list[i];
    if (!(r > 1.0) || std::abs(r - ratio0) > 1e-2 * ratio0)
      throw std::invalid_argument(
          "remainder_order: eps_list must be geometric and decreasing");
    if (series.growth_lambda > 0.0 &&
        !(eps_list[i - 1] * series.growth_lambda < 1.0))
      throw std::invalid_argument(
          "remainder_order: eps outside the estimated radius");
  }
  RemainderFit fit;
  const double scale =
      std::max(d_norm(background.u_plus), d_norm(u0));
  for (double eps : eps_list) {
    ComplexField data = background.u_minus;
    axpy(Complex(eps, 0.0), u0, data);
    const ScatteringResult pert =
        scatter(prop, nl, cfg, data, exps, thresholds);
    ComplexField diff = pert.u_plus;
    diff -= sum_series(series, background.u_plus, eps, K, /*force=*/true);
    fit.samples.emplace_back(eps, d_norm(diff));
  }
  if (nl.lambda == 0.0) {
    fit.status = RemainderFit::Status::TriviallyZero;
    return fit;
  }
  const double floor_abs = thresholds.noise_floor * std::max(scale, 1e-300);
  std::vector<double> lx, ly;
  for (const auto& [eps, r] : fit.samples) {
    if (r < 10.0 * floor_abs) {
      std::ostringstream msg;
      msg << "remainder_order: remainder " << r << " at eps = " << eps
          << " is within 10x of the noise floor " << floor_abs
          << "; increase eps or refine dt";
      throw InconclusiveError(msg.str());
    }
    lx.push_back(std::log(eps));
    ly.push_back(std::log(r));
  }
  fit.slope = linear_fit(lx, ly).first;
  return fit;
}

}  // namespace scatlab
