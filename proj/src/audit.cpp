#include "scatlab/audit.hpp"

#include <stdexcept>

#include "scatlab/rng.hpp"

namespace scatlab {

Trajectory free_flow(const PropagatorSpec& prop, const IntegratorConfig& cfg,
                     const ComplexField& g) {
  cfg.validate();
  const double h = cfg.dt * cfg.snapshot_stride;
  const int nodes = static_cast<int>(std::lround(2.0 * cfg.T / h)) + 1;
  std::vector<double> times(nodes);
  std::vector<ComplexField> snaps;
  snaps.reserve(nodes);
  for (int i = 0; i < nodes; ++i) {
    times[i] = -cfg.T + i * h;
    snaps.push_back(apply_U(prop, times[i], g));
  }
  return Trajectory(std::move(times), std::move(snaps));
}

LinearBoundAudit measure_linear_bound(const PropagatorSpec& prop,
                                      const StrichartzExponents& exps,
                                      const IntegratorConfig& cfg, int corpus,
                                      uint64_t seed, bool with_J) {
  if (corpus < 1) throw std::invalid_argument("measure_linear_bound: corpus < 1");
  LinearBoundAudit audit;
  Rng rng(seed);
  for (int k = 0; k < corpus; ++k) {
    ComplexField g;
    if (prop.grid->kind() == GridKind::ToyVector)
      g = random_toy_field(prop.grid, rng, 1.0);
    else if (prop.components() == 2)
      g = random_pair_field(prop.grid, rng, 1.0);
    else
      g = random_h1_field(prop.grid, rng, 1.0);
    const Trajectory traj = free_flow(prop, cfg, g);
    // The J-augmented bound is measured against the weighted data norm.
    const double data_norm = with_J ? sigma_norm(g) : d_norm(g);
    const double ratio = f_norms_full(traj, exps, with_J).f_norm / data_norm;
    audit.ratios.push_back(ratio);
    audit.c0 = std::max(audit.c0, ratio);
  }
  return audit;
}

}  // namespace scatlab
