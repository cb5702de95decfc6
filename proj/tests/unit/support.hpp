#pragma once

#include <cmath>
#include <functional>

#include "scatlab/field.hpp"

namespace scatlab::test {

// Independent quadrature oracle: adaptive Simpson with absolute tolerance.
inline double adaptive_simpson(const std::function<double(double)>& f,
                               double a, double b, double tol, int depth = 24) {
  const double c = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fc = f(c);
  std::function<double(double, double, double, double, double, double, int)>
      rec = [&](double x0, double x2, double f0, double f1, double f2,
                double eps, int d) -> double {
    const double x1l = 0.5 * (x0 + 0.5 * (x0 + x2));
    const double x1r = 0.5 * (0.5 * (x0 + x2) + x2);
    const double fl = f(x1l), fr = f(x1r);
    const double h = x2 - x0;
    const double whole = h / 6.0 * (f0 + 4.0 * f1 + f2);
    const double left = h / 12.0 * (f0 + 4.0 * fl + f1);
    const double right = h / 12.0 * (f1 + 4.0 * fr + f2);
    if (d <= 0 || std::abs(left + right - whole) < 15.0 * eps)
      return left + right + (left + right - whole) / 15.0;
    const double xm = 0.5 * (x0 + x2);
    return rec(x0, xm, f0, fl, f1, eps / 2.0, d - 1) +
           rec(xm, x2, f1, fr, f2, eps / 2.0, d - 1);
  };
  return rec(a, b, fa, fc, fb, tol, depth);
}

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

inline double rel_field_diff(const ComplexField& a, const ComplexField& b) {
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < a.values().size(); ++i) {
    num += std::norm(a.values()[i] - b.values()[i]);
    den += std::norm(b.values()[i]);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace scatlab::test
