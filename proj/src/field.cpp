#include "scatlab/field.hpp"

#include <cmath>
#include <stdexcept>

namespace scatlab {

ComplexField::ComplexField(std::shared_ptr<const SpatialGrid> grid,
                           int components)
    : grid_(std::move(grid)), components_(components) {
  if (!grid_) throw std::invalid_argument("ComplexField: null grid");
  if (components_ < 1 || components_ > 2)
    throw std::invalid_argument("ComplexField: components must be 1 or 2");
  values_.assign(static_cast<size_t>(components_) * grid_->size(),
                 Complex(0.0, 0.0));
}

bool ComplexField::finite() const {
  for (const Complex& v : values_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

bool ComplexField::zero() const {
  for (const Complex& v : values_)
    if (v.real() != 0.0 || v.imag() != 0.0) return false;
  return true;
}

ComplexField& ComplexField::operator+=(const ComplexField& other) {
  ensure_same_shape(*this, other, "ComplexField::operator+=");
  for (size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

ComplexField& ComplexField::operator-=(const ComplexField& other) {
  ensure_same_shape(*this, other, "ComplexField::operator-=");
  for (size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

ComplexField& ComplexField::operator*=(Complex a) {
  for (Complex& v : values_) v *= a;
  return *this;
}

void axpy(Complex a, const ComplexField& x, ComplexField& y) {
  ensure_same_shape(x, y, "axpy");
  const auto& xs = x.values();
  auto& ys = y.values();
  for (size_t i = 0; i < ys.size(); ++i) ys[i] += a * xs[i];
}

double max_abs(const ComplexField& f) {
  double m = 0.0;
  for (const Complex& v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

void ensure_finite(const ComplexField& f, const char* where) {
  if (!f.finite())
    throw std::invalid_argument(std::string(where) +
                                ": field contains non-finite values");
}

void ensure_same_shape(const ComplexField& a, const ComplexField& b,
                       const char* where) {
  if (!a.grid().same_as(b.grid()) || a.components() != b.components())
    throw std::invalid_argument(std::string(where) +
                                ": fields live on different grids");
}

void ensure_components(const ComplexField& f, int components,
                       const char* where) {
  if (f.components() != components)
    throw std::invalid_argument(std::string(where) +
                                ": field has wrong component count");
}

}  // namespace scatlab
