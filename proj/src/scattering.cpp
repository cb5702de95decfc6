#include "scatlab/scattering.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "scatlab/errors.hpp"
#include "scatlab/rng.hpp"

namespace scatlab {

ScatteringResult scatter(const PropagatorSpec& prop, const NonlinearitySpec& nl,
                         const IntegratorConfig& cfg,
                         const ComplexField& u_minus,
                         const StrichartzExponents& exps,
                         const ScatterThresholds& thresholds,
                         ConservationLog* log) {
  ensure_finite(u_minus, "scatter");
  const double T = cfg.T;

  ComplexField u_start = apply_U(prop, -T, u_minus);
  ScatteringResult res;
  res.u_minus = u_minus;
  res.horizon = T;
  res.trajectory = solve_nonlinear(prop, nl, cfg, u_start, -T, log);
  const Trajectory& traj = res.trajectory;

  const int i_zero = traj.index_of(0.0);
  if (i_zero < 0)
    throw std::invalid_argument("scatter: t = 0 is not a trajectory node");
  res.u_at_zero = traj.at(i_zero);

  // Boundary-mass monitor (wrap-around contamination).
  double bmax = 0.0, bmax_t = 0.0;
  for (int i = 0; i < traj.nodes(); ++i) {
    const double b = boundary_mass_fraction(traj.at(i));
    if (b > bmax) {
      bmax = b;
      bmax_t = traj.times()[i];
    }
  }
  res.boundary_mass_max = bmax;
  if (prop.kind != PropagatorKind::ToyDiagonal &&
      bmax > thresholds.boundary_mass) {
    std::ostringstream msg;
    msg << "scatter: boundary mass fraction " << bmax << " at t = " << bmax_t
        << " exceeds " << thresholds.boundary_mass
        << " (wrap-around contamination)";
    throw TaintedResultError(bmax, bmax_t, msg.str());
  }

  // Cauchy tail at the checkpoints T/4, T/2, 3T/4, T.
  std::vector<double> checkpoints = {0.25 * T, 0.5 * T, 0.75 * T, T};
  ComplexField prev;
  bool have_prev = false;
  double prev_t = 0.0;
  for (double tc : checkpoints) {
    int idx = traj.index_of(tc);
    if (idx < 0) {
      // Snap to the nearest node (strides may not divide T/4 exactly).
      idx = static_cast<int>(
          std::lround((tc - traj.t0()) / traj.dt()));
      idx = std::min(std::max(idx, 0), traj.nodes() - 1);
    }
    const double t_node = traj.times()[idx];
    ComplexField pullback = apply_U(prop, -t_node, traj.at(idx));
    if (have_prev && t_node > prev_t) {
      ComplexField diff = pullback;
      diff -= prev;
      res.cauchy_tail.emplace_back(t_node, d_norm(diff));
    }
    prev = std::move(pullback);
    prev_t = t_node;
    have_prev = true;
  }

  res.u_plus = apply_U(prop, -T, traj.at(traj.nodes() - 1));
  res.norm_table = f_norms_full(traj, exps);

  // Strict decrease is required only above the noise floor: a linear run
  // (lambda = 0) leaves round-off-sized samples in arbitrary order.
  const double scale = d_norm(u_minus);
  const double floor_abs = thresholds.noise_floor * scale;
  bool decreasing = true;
  for (size_t i = 1; i < res.cauchy_tail.size(); ++i) {
    const double prev_s = res.cauchy_tail[i - 1].second;
    const double cur_s = res.cauchy_tail[i].second;
    if (cur_s <= floor_abs && prev_s <= floor_abs) continue;
    if (!(cur_s < prev_s)) decreasing = false;
  }
  const double final_tail =
      res.cauchy_tail.empty() ? 0.0 : res.cauchy_tail.back().second;
  res.converged = decreasing && final_tail <= thresholds.tail * scale;
  if (u_minus.zero()) res.converged = true;  // zero data: all tails are zero
  return res;
}

ComplexField linearized_scatter(const PropagatorSpec& prop,
                                const NonlinearitySpec& nl,
                                const ScatteringResult& background,
                                const ComplexField& v_minus) {
  if (!background.converged)
    throw std::invalid_argument("linearized_scatter: background not converged");
  ensure_finite(v_minus, "linearized_scatter");
  const double T = background.horizon;
  const ComplexField w_start = apply_U(prop, -T, v_minus);
  const ComplexField w_end = solve_tangent_final(
      prop, nl, background.trajectory, w_start, background.trajectory.t0());
  return apply_U(prop, -T, w_end);
}

std::vector<Interval> partition_intervals(const Trajectory& background,
                                          const StrichartzExponents& exps,
                                          double c_emp) {
  if (!(c_emp > 0.0))
    throw std::invalid_argument("partition_intervals: C_emp must be positive");
  const NormReport full = f_norms_full(background, exps);
  const double f_full = full.f_norm;
  const double delta = exps.delta.value();
  const double q = exps.q.value();
  const double r = exps.r.value();
  const double h = background.dt();
  const int nodes = background.nodes();

  // Prefix trapezoid sums of the weighted |X-norm|^q integrand, so the
  // restricted F2 norm over any node range is an O(1) lookup.
  std::vector<double> g(nodes), prefix(nodes, 0.0);
  for (int i = 0; i < nodes; ++i)
    g[i] = exps.weight_at(background.times()[i]) *
           std::pow(x_norm(background.at(i), r), q);
  for (int i = 1; i < nodes; ++i)
    prefix[i] = prefix[i - 1] + 0.5 * h * (g[i - 1] + g[i]);
  auto restricted_f2 = [&](int a, int b) {
    return std::pow(prefix[b] - prefix[a], 1.0 / q);
  };
  const double fpow = std::pow(f_full, exps.p - 1 - delta);
  auto bound = [&](int a, int b) {
    return c_emp * std::pow(restricted_f2(a, b), delta) * fpow;
  };

  std::vector<Interval> intervals;
  int a = 0;
  while (a < nodes - 1) {
    if (bound(a, a + 1) > 0.5) {
      std::ostringstream msg;
      msg << "partition_intervals: single-step interval at t = "
          << background.times()[a]
          << " already violates the 1/2 bound (C_emp too coarse or "
             "background too large)";
      throw PartitionInfeasibleError(msg.str());
    }
    int b = a + 1;
    while (b + 1 < nodes && bound(a, b + 1) <= 0.5) ++b;
    intervals.push_back({background.times()[a], background.times()[b]});
    a = b;
  }
  if (intervals.empty())
    intervals.push_back({background.t0(), background.t1()});
  return intervals;
}

double measure_h2_constant(const PropagatorSpec& prop,
                           const NonlinearitySpec& nl,
                           const Trajectory& background,
                           const StrichartzExponents& exps, int probes,
                           uint64_t seed) {
  if (probes < 1)
    throw std::invalid_argument("measure_h2_constant: probes < 1");
  const NormReport full = f_norms_full(background, exps);
  const double delta = exps.delta.value();
  const double x_base =
      std::pow(full.f2_norm, delta) * std::pow(full.f_norm, exps.p - 1 - delta);

  auto grid = background.at(0).grid_ptr();
  const int components = background.components();
  const Trajectory zero_bg = Trajectory::zero(
      grid, components, background.t0(), background.t1(), background.nodes());

  double sxy = 0.0, sxx = 0.0;
  Rng rng(seed);
  for (int k = 0; k < probes; ++k) {
    ComplexField gfield;
    if (grid->kind() == GridKind::ToyVector)
      gfield = random_toy_field(grid, rng, 1.0);
    else if (components == 2)
      gfield = random_pair_field(grid, rng, 1.0);
    else
      gfield = random_h1_field(grid, rng, 1.0);

    // Free-flow probe v(t) = U(t) g and the source Phi'(ubar)[v].
    std::vector<double> times = background.times();
    std::vector<ComplexField> vsnaps, ssnaps;
    vsnaps.reserve(background.nodes());
    ssnaps.reserve(background.nodes());
    for (int i = 0; i < background.nodes(); ++i) {
      ComplexField v = apply_U(prop, times[i], gfield);
      ssnaps.push_back(phi_linearized(nl, times[i], background.at(i), v));
      vsnaps.push_back(std::move(v));
    }
    Trajectory vtraj(times, std::move(vsnaps));
    Trajectory src(times, std::move(ssnaps));

    // N_1(ubar, v) is the Duhamel integral of the source: the solution of
    // dz/dt = L z + source with z(-T) = 0 (tangent coupling vanishes on a
    // zero background).
    ComplexField zinit(grid, components);
    Trajectory z =
        solve_tangent(prop, nl, zero_bg, zinit, background.t0(), &src);
    const double y = f_norms_full(z, exps).f_norm;
    const double x = x_base * f_norms_full(vtraj, exps).f_norm;
    sxy += x * y;
    sxx += x * x;
  }
  if (sxx == 0.0) return 0.0;
  return sxy / sxx;
}

}  // namespace scatlab
