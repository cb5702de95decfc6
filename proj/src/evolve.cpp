#include "scatlab/evolve.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <iostream>
#include <limits>
#include <stdexcept>

#include "scatlab/errors.hpp"
#include "scatlab/fft.hpp"
#include "scatlab/norms.hpp"

namespace scatlab {

namespace {

// Precomputed tables for U(dt) applications inside the steppers.
class GroupStepper {
 public:
  GroupStepper(const PropagatorSpec& spec, double dt) : spec_(spec) {
    const int n = spec.grid->size();
    switch (spec.kind) {
      case PropagatorKind::SchrodingerFree: {
        phase_.resize(n);
        const auto& xi = spec.grid->wavenumbers();
        for (int m = 0; m < n; ++m) {
          const double ph = -0.5 * dt * xi[m] * xi[m];
          phase_[m] = Complex(std::cos(ph), std::sin(ph));
        }
        break;
      }
      case PropagatorKind::KleinGordon: {
        cos_.resize(n);
        sin_over_w_.resize(n);
        minus_w_sin_.resize(n);
        const auto& xi = spec.grid->wavenumbers();
        const double m2 = spec.kg_mass * spec.kg_mass;
        for (int m = 0; m < n; ++m) {
          const double w = std::sqrt(xi[m] * xi[m] + m2);
          if (w == 0.0) {
            cos_[m] = 1.0;
            sin_over_w_[m] = dt;
            minus_w_sin_[m] = 0.0;
          } else {
            cos_[m] = std::cos(w * dt);
            sin_over_w_[m] = std::sin(w * dt) / w;
            minus_w_sin_[m] = -w * std::sin(w * dt);
          }
        }
        break;
      }
      case PropagatorKind::ToyDiagonal: {
        phase_.resize(n);
        for (int m = 0; m < n; ++m) {
          const double ph = spec.toy_frequencies[m] * dt;
          phase_[m] = Complex(std::cos(ph), std::sin(ph));
        }
        break;
      }
    }
  }

  void apply(ComplexField& f) const {
    const int n = spec_.grid->size();
    switch (spec_.kind) {
      case PropagatorKind::SchrodingerFree: {
        Complex* u = f.component(0);
        spectral::forward_inplace(n, u);
        for (int m = 0; m < n; ++m) u[m] *= phase_[m];
        spectral::inverse_inplace(n, u);
        break;
      }
      case PropagatorKind::KleinGordon: {
        Complex* u = f.component(0);
        Complex* v = f.component(1);
        spectral::forward_inplace(n, u);
        spectral::forward_inplace(n, v);
        for (int m = 0; m < n; ++m) {
          const Complex a = u[m], b = v[m];
          u[m] = cos_[m] * a + sin_over_w_[m] * b;
          v[m] = minus_w_sin_[m] * a + cos_[m] * b;
        }
        spectral::inverse_inplace(n, u);
        spectral::inverse_inplace(n, v);
        break;
      }
      case PropagatorKind::ToyDiagonal: {
        Complex* u = f.component(0);
        for (int m = 0; m < n; ++m) u[m] *= phase_[m];
        break;
      }
    }
  }

 private:
  PropagatorSpec spec_;
  std::vector<Complex> phase_;
  std::vector<double> cos_, sin_over_w_, minus_w_sin_;
};

bool quick_finite(const ComplexField& f) {
  Complex s(0.0, 0.0);
  for (const Complex& v : f.values()) s += v;
  return std::isfinite(s.real()) && std::isfinite(s.imag());
}

int checked_steps(double span, double dt) {
  const double raw = span / dt;
  const long n = std::lround(raw);
  if (n < 1 || std::abs(n * dt - span) > 1e-12 * std::max(1.0, span))
    throw std::invalid_argument(
        "IntegratorConfig: dt does not divide the time span");
  return static_cast<int>(n);
}

double lp_power_integral(const ComplexField& u, int component, double power) {
  const double dx = u.grid().dx();
  double s = 0.0;
  const Complex* a = u.component(component);
  for (int j = 0; j < u.points(); ++j) s += std::pow(std::abs(a[j]), power);
  return dx * s;
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(dt > 0.0) || !(T > 0.0))
    throw std::invalid_argument("IntegratorConfig: dt and T must be positive");
  checked_steps(2.0 * T, dt);
  if (snapshot_stride < 1)
    throw std::invalid_argument("IntegratorConfig: snapshot_stride < 1");
  if (conservation_check_every < 0)
    throw std::invalid_argument("IntegratorConfig: negative check interval");
}

double mass_functional(const PropagatorSpec& prop, const ComplexField& u) {
  switch (prop.kind) {
    case PropagatorKind::SchrodingerFree: {
      const double l2 = l2_norm(u);
      return l2 * l2;
    }
    case PropagatorKind::ToyDiagonal: {
      const double e = euclidean_norm(u);
      return e * e;
    }
    case PropagatorKind::KleinGordon:
      return std::numeric_limits<double>::quiet_NaN();
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double energy_functional(const PropagatorSpec& prop,
                         const NonlinearitySpec& nl, const ComplexField& u) {
  switch (prop.kind) {
    case PropagatorKind::SchrodingerFree: {
      // Conserved energy of i du/dt + (1/2) Laplacian u = lambda |u|^{p-1} u:
      // (1/4) int |grad u|^2 + (lambda/(p+1)) int |u|^{p+1}.
      const ComplexField du = spectral::derivative(u);
      const double kin = l2_norm(du);
      return 0.25 * kin * kin +
             nl.lambda / (nl.p + 1) * lp_power_integral(u, 0, nl.p + 1);
    }
    case PropagatorKind::KleinGordon: {
      const ComplexField dxu = spectral::derivative(u);
      const double dx = u.grid().dx();
      double quad = 0.0, pot = 0.0;
      const double m2 = prop.kg_mass * prop.kg_mass;
      for (int j = 0; j < u.points(); ++j) {
        quad += std::norm(u.component(1)[j]) + std::norm(dxu.component(0)[j]) +
                m2 * std::norm(u.component(0)[j]);
        pot += std::pow(u.component(0)[j].real(), nl.p + 1);
      }
      return 0.5 * dx * quad + nl.lambda / (nl.p + 1) * dx * pot;
    }
    case PropagatorKind::ToyDiagonal:
      return std::numeric_limits<double>::quiet_NaN();
  }
  return std::numeric_limits<double>::quiet_NaN();
}

Trajectory solve_nonlinear(const PropagatorSpec& prop,
                           const NonlinearitySpec& nl,
                           const IntegratorConfig& cfg,
                           const ComplexField& u_init, double t_init,
                           ConservationLog* log) {
  cfg.validate();
  if (!u_init.grid().same_as(*prop.grid))
    throw std::invalid_argument("solve_nonlinear: grid mismatch");
  ensure_components(u_init, prop.components(), "solve_nonlinear");
  ensure_finite(u_init, "solve_nonlinear");
  if (nl.components() != prop.components())
    throw std::invalid_argument(
        "solve_nonlinear: nonlinearity/propagator component mismatch");
  if (cfg.scheme == Scheme::StrangSplit &&
      (prop.kind != PropagatorKind::SchrodingerFree ||
       nl.kind != NonlinearityKind::GaugePower))
    throw std::invalid_argument(
        "solve_nonlinear: StrangSplit applies to the gauge-invariant "
        "Schroedinger equation only; use LawsonRK4");
  if (t_init < -cfg.T - 1e-12 * cfg.T || t_init >= cfg.T)
    throw std::invalid_argument("solve_nonlinear: t_init outside [-T, T)");

  const int steps = checked_steps(cfg.T - t_init, cfg.dt);
  if (steps % cfg.snapshot_stride != 0)
    throw std::invalid_argument(
        "solve_nonlinear: snapshot_stride does not divide the step count");

  if (cfg.scheme == Scheme::LawsonRK4) {
    const double phase = max_phase_per_step(prop, cfg.dt);
    if (phase > cfg.stability_phase_threshold)
      std::cerr << "solve_nonlinear: warning: per-step linear phase " << phase
                << " exceeds threshold " << cfg.stability_phase_threshold
                << "\n";
  }

  std::vector<double> times;
  std::vector<ComplexField> snaps;
  times.reserve(steps / cfg.snapshot_stride + 1);
  snaps.reserve(steps / cfg.snapshot_stride + 1);

  ComplexField u = u_init;
  double t = t_init;
  times.push_back(t);
  snaps.push_back(u);
  auto log_state = [&](double tt, const ComplexField& f) {
    if (!log) return;
    log->times.push_back(tt);
    log->mass.push_back(mass_functional(prop, f));
    log->energy.push_back(energy_functional(prop, nl, f));
  };
  log_state(t, u);

  const double dt = cfg.dt;
  if (cfg.scheme == Scheme::StrangSplit) {
    const GroupStepper half(prop, 0.5 * dt);
    const int m = (nl.p - 1) / 2;
    for (int s = 1; s <= steps; ++s) {
      half.apply(u);
      Complex* a = u.component(0);
      for (int j = 0; j < u.points(); ++j) {
        double r2 = 1.0, base = std::norm(a[j]);
        for (int i = 0; i < m; ++i) r2 *= base;
        const double ph = -nl.lambda * r2 * dt;
        a[j] *= Complex(std::cos(ph), std::sin(ph));
      }
      half.apply(u);
      const double t_new = t_init + s * dt;
      if (!quick_finite(u))
        throw DivergedError(t, "solve_nonlinear: non-finite state (blow-up?)");
      t = t_new;
      if (s % cfg.snapshot_stride == 0) {
        times.push_back(t);
        snaps.push_back(u);
      }
      if (log && cfg.conservation_check_every > 0 &&
          s % cfg.conservation_check_every == 0)
        log_state(t, u);
    }
  } else {
    const GroupStepper half(prop, 0.5 * dt);
    auto stage_check = [&](const ComplexField& f, double tt) {
      if (!quick_finite(f))
        throw DivergedError(tt,
                            "solve_nonlinear: non-finite state (blow-up?)");
    };
    for (int s = 1; s <= steps; ++s) {
      const ComplexField k1 = phi(nl, t, u);
      ComplexField s2 = u;
      axpy(0.5 * dt, k1, s2);
      half.apply(s2);
      stage_check(s2, t);
      const ComplexField k2 = phi(nl, t + 0.5 * dt, s2);
      ComplexField x = u;
      half.apply(x);  // E_{1/2} u
      ComplexField s3 = x;
      axpy(0.5 * dt, k2, s3);
      stage_check(s3, t);
      const ComplexField k3 = phi(nl, t + 0.5 * dt, s3);
      ComplexField y = x;
      half.apply(y);  // E_1 u
      ComplexField z = k3;
      half.apply(z);  // E_{1/2} k3
      ComplexField s4 = y;
      axpy(dt, z, s4);
      stage_check(s4, t);
      const ComplexField k4 = phi(nl, t + dt, s4);
      ComplexField e1k1 = k1;
      half.apply(e1k1);
      half.apply(e1k1);
      ComplexField ehk2 = k2;
      half.apply(ehk2);
      ComplexField next = y;
      axpy(dt / 6.0, e1k1, next);
      axpy(dt / 3.0, ehk2, next);
      axpy(dt / 3.0, z, next);
      axpy(dt / 6.0, k4, next);
      const double t_new = t_init + s * dt;
      if (!quick_finite(next))
        throw DivergedError(t, "solve_nonlinear: non-finite state (blow-up?)");
      u = std::move(next);
      t = t_new;
      if (s % cfg.snapshot_stride == 0) {
        times.push_back(t);
        snaps.push_back(u);
      }
      if (log && cfg.conservation_check_every > 0 &&
          s % cfg.conservation_check_every == 0)
        log_state(t, u);
    }
  }
  return Trajectory(std::move(times), std::move(snaps));
}

// ---------------------------------------------------------------------------
// Tangent solver.

namespace {

// Cubic interpolation of a trajectory at the midpoint of cell n.
ComplexField cell_midpoint(const Trajectory& traj, int n) {
  const int last = traj.nodes() - 1;
  int base;
  std::array<double, 4> w;
  if (n == 0) {
    base = 0;
    w = {0.3125, 0.9375, -0.3125, 0.0625};
  } else if (n == last - 1) {
    base = last - 3;
    w = {0.0625, -0.3125, 0.9375, 0.3125};
  } else {
    base = n - 1;
    w = {-0.0625, 0.5625, 0.5625, -0.0625};
  }
  ComplexField out(traj.at(0).grid_ptr(), traj.components());
  for (int i = 0; i < 4; ++i) axpy(w[i], traj.at(base + i), out);
  return out;
}

void tangent_walk(const PropagatorSpec& prop, const NonlinearitySpec& nl,
                  const Trajectory& background, const ComplexField& w_init,
                  double t_init, const Trajectory* source,
                  const std::function<void(int, const ComplexField&)>& emit) {
  if (!w_init.grid().same_as(*prop.grid) ||
      !background.grid().same_as(*prop.grid))
    throw std::invalid_argument("solve_tangent: grid mismatch");
  ensure_components(w_init, prop.components(), "solve_tangent");
  ensure_finite(w_init, "solve_tangent");
  if (background.components() != prop.components())
    throw std::invalid_argument("solve_tangent: background component mismatch");
  if (background.nodes() < 4)
    throw std::invalid_argument("solve_tangent: background too short");
  if (source && !source->compatible_with(background))
    throw std::invalid_argument(
        "solve_tangent: source not aligned with background");
  const int i0 = background.index_of(t_init);
  if (i0 < 0)
    throw std::invalid_argument("solve_tangent: t_init is not a background node");

  const double h = background.dt();
  const GroupStepper half(prop, 0.5 * h);

  ComplexField w = w_init;
  emit(i0, w);
  for (int n = i0; n + 1 < background.nodes(); ++n) {
    const double t = background.times()[n];
    const ComplexField& bg0 = background.at(n);
    const ComplexField& bg1 = background.at(n + 1);
    const ComplexField bgh = cell_midpoint(background, n);
    ComplexField srch;
    const ComplexField* src0 = nullptr;
    const ComplexField* src1 = nullptr;
    if (source) {
      src0 = &source->at(n);
      src1 = &source->at(n + 1);
      srch = cell_midpoint(*source, n);
    }
    auto rhs = [&](double tt, const ComplexField& f, const ComplexField& bg,
                   const ComplexField* src) {
      ComplexField r = phi_linearized(nl, tt, bg, f);
      if (src) r += *src;
      return r;
    };

    const ComplexField k1 = rhs(t, w, bg0, src0);
    ComplexField s2 = w;
    axpy(0.5 * h, k1, s2);
    half.apply(s2);
    const ComplexField k2 = rhs(t + 0.5 * h, s2, bgh, source ? &srch : nullptr);
    ComplexField x = w;
    half.apply(x);
    ComplexField s3 = x;
    axpy(0.5 * h, k2, s3);
    const ComplexField k3 = rhs(t + 0.5 * h, s3, bgh, source ? &srch : nullptr);
    ComplexField y = x;
    half.apply(y);
    ComplexField z = k3;
    half.apply(z);
    ComplexField s4 = y;
    axpy(h, z, s4);
    const ComplexField k4 = rhs(background.times()[n + 1], s4, bg1, src1);
    ComplexField e1k1 = k1;
    half.apply(e1k1);
    half.apply(e1k1);
    ComplexField ehk2 = k2;
    half.apply(ehk2);
    ComplexField next = y;
    axpy(h / 6.0, e1k1, next);
    axpy(h / 3.0, ehk2, next);
    axpy(h / 3.0, z, next);
    axpy(h / 6.0, k4, next);
    if (!quick_finite(next))
      throw DivergedError(t, "solve_tangent: non-finite state");
    w = std::move(next);
    emit(n + 1, w);
  }
}

}  // namespace

Trajectory solve_tangent(const PropagatorSpec& prop, const NonlinearitySpec& nl,
                         const Trajectory& background,
                         const ComplexField& w_init, double t_init,
                         const Trajectory* source) {
  std::vector<double> times;
  std::vector<ComplexField> snaps;
  tangent_walk(prop, nl, background, w_init, t_init, source,
               [&](int node, const ComplexField& f) {
                 times.push_back(background.times()[node]);
                 snaps.push_back(f);
               });
  return Trajectory(std::move(times), std::move(snaps));
}

ComplexField solve_tangent_final(const PropagatorSpec& prop,
                                 const NonlinearitySpec& nl,
                                 const Trajectory& background,
                                 const ComplexField& w_init, double t_init,
                                 const Trajectory* source) {
  ComplexField last;
  tangent_walk(prop, nl, background, w_init, t_init, source,
               [&](int, const ComplexField& f) { last = f; });
  return last;
}

}  // namespace scatlab
