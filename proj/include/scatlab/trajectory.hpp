#pragma once

#include <vector>

#include "scatlab/field.hpp"

namespace scatlab {

// A time-indexed sequence of fields on a uniform time grid. Times must be
// uniform to relative 1e-12 and all snapshots must share grid and
// component count.
class Trajectory {
public:
  Trajectory() = default;
  Trajectory(std::vector<double> times, std::vector<ComplexField> snapshots);

  static Trajectory zero(std::shared_ptr<const SpatialGrid> grid,
                         int components, double t0, double t1, int nodes);

  int nodes() const { return static_cast<int>(times_.size()); }
  double t0() const { return times_.front(); }
  double t1() const { return times_.back(); }
  double dt() const { return nodes() > 1 ? times_[1] - times_[0] : 0.0; }
  const std::vector<double>& times() const { return times_; }

  const ComplexField& at(int i) const { return snapshots_[i]; }
  ComplexField& at(int i) { return snapshots_[i]; }

  const SpatialGrid& grid() const { return snapshots_.front().grid(); }
  int components() const { return snapshots_.front().components(); }

  // Index of the node at time t, or -1 if t is not a node.
  int index_of(double t, double rel_tol = 1e-9) const;

  bool compatible_with(const Trajectory& other) const;

private:
  std::vector<double> times_;
  std::vector<ComplexField> snapshots_;
};

}  // namespace scatlab
