#pragma once

#include <memory>
#include <vector>

#include "scatlab/grid.hpp"

namespace scatlab {

// A complex-valued function sampled on a grid. Storage is
// component-major: values[c * n + j] is component c at point j.
// Schroedinger fields have one component, Klein-Gordon pairs
// (u, du/dt) have two.
class ComplexField {
public:
  ComplexField() = default;
  ComplexField(std::shared_ptr<const SpatialGrid> grid, int components = 1);

  const SpatialGrid& grid() const { return *grid_; }
  const std::shared_ptr<const SpatialGrid>& grid_ptr() const { return grid_; }
  int components() const { return components_; }
  int points() const { return grid_ ? grid_->size() : 0; }

  std::vector<Complex>& values() { return values_; }
  const std::vector<Complex>& values() const { return values_; }
  Complex* component(int c) { return values_.data() + c * points(); }
  const Complex* component(int c) const { return values_.data() + c * points(); }

  bool finite() const;
  bool zero() const;  // exactly zero in every entry

  ComplexField& operator+=(const ComplexField& other);
  ComplexField& operator-=(const ComplexField& other);
  ComplexField& operator*=(Complex a);

  friend ComplexField operator+(ComplexField a, const ComplexField& b) {
    a += b;
    return a;
  }
  friend ComplexField operator-(ComplexField a, const ComplexField& b) {
    a -= b;
    return a;
  }
  friend ComplexField operator*(Complex a, ComplexField f) {
    f *= a;
    return f;
  }

private:
  std::shared_ptr<const SpatialGrid> grid_;
  int components_ = 0;
  std::vector<Complex> values_;
};

// y += a x
void axpy(Complex a, const ComplexField& x, ComplexField& y);

double max_abs(const ComplexField& f);

// Hard errors on contract violations.
void ensure_finite(const ComplexField& f, const char* where);
void ensure_same_shape(const ComplexField& a, const ComplexField& b,
                       const char* where);
void ensure_components(const ComplexField& f, int components, const char* where);

}  // namespace scatlab
