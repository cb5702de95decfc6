#include "scatlab/trajectory.hpp"

#include <cmath>
#include <stdexcept>

namespace scatlab {

Trajectory::Trajectory(std::vector<double> times,
                       std::vector<ComplexField> snapshots)
    : times_(std::move(times)), snapshots_(std::move(snapshots)) {
  if (times_.empty() || times_.size() != snapshots_.size())
    throw std::invalid_argument("Trajectory: times/snapshots size mismatch");
  if (times_.size() >= 2) {
    const double h = times_[1] - times_[0];
    if (!(h > 0.0)) throw std::invalid_argument("Trajectory: non-increasing times");
    const double span = times_.back() - times_.front();
    for (size_t i = 1; i < times_.size(); ++i) {
      const double step = times_[i] - times_[i - 1];
      if (std::abs(step - h) > 1e-12 * std::max(1.0, span))
        throw std::invalid_argument("Trajectory: non-uniform time grid");
    }
  }
  for (const auto& s : snapshots_)
    ensure_same_shape(s, snapshots_.front(), "Trajectory");
}

Trajectory Trajectory::zero(std::shared_ptr<const SpatialGrid> grid,
                            int components, double t0, double t1, int nodes) {
  if (nodes < 1) throw std::invalid_argument("Trajectory::zero: nodes < 1");
  std::vector<double> times(nodes);
  std::vector<ComplexField> snaps;
  snaps.reserve(nodes);
  const double h = nodes > 1 ? (t1 - t0) / (nodes - 1) : 0.0;
  for (int i = 0; i < nodes; ++i) {
    times[i] = t0 + i * h;
    snaps.emplace_back(grid, components);
  }
  if (nodes > 1) times.back() = t1;
  return Trajectory(std::move(times), std::move(snaps));
}

int Trajectory::index_of(double t, double rel_tol) const {
  if (nodes() == 1)
    return std::abs(times_[0] - t) <= rel_tol * std::max(1.0, std::abs(t)) ? 0
                                                                           : -1;
  const double h = dt();
  const double x = (t - times_.front()) / h;
  const int i = static_cast<int>(std::lround(x));
  if (i < 0 || i >= nodes()) return -1;
  if (std::abs(times_[i] - t) > rel_tol * std::max(1.0, times_.back() - times_.front()))
    return -1;
  return i;
}

bool Trajectory::compatible_with(const Trajectory& other) const {
  if (nodes() != other.nodes()) return false;
  if (!grid().same_as(other.grid()) || components() != other.components())
    return false;
  const double span = std::max(1.0, t1() - t0());
  for (int i = 0; i < nodes(); ++i)
    if (std::abs(times_[i] - other.times_[i]) > 1e-9 * span) return false;
  return true;
}

}  // namespace scatlab
