#include "scatlab/nonlinearity.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace scatlab {

namespace {

double default_coupling(double t) { return 1.0 / (1.0 + t * t); }

double ipow(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

Complex cipow(Complex x, int k) {
  Complex r(1.0, 0.0);
  for (int i = 0; i < k; ++i) r *= x;
  return r;
}

void check_field(const NonlinearitySpec& spec, const ComplexField& u,
                 const char* where) {
  ensure_components(u, spec.components(), where);
  ensure_finite(u, where);
  if (spec.kind == NonlinearityKind::ToyConvolutionCubic &&
      static_cast<size_t>(u.points()) * u.points() != spec.conv_kernel.size())
    throw std::invalid_argument(std::string(where) +
                                ": kernel size does not match dimension");
}

}  // namespace

NonlinearitySpec NonlinearitySpec::gauge_power(int p, double lambda) {
  if (p < 3 || p % 2 == 0)
    throw std::invalid_argument("gauge_power: p must be an odd integer >= 3");
  NonlinearitySpec s;
  s.kind = NonlinearityKind::GaugePower;
  s.p = p;
  s.lambda = lambda;
  return s;
}

NonlinearitySpec NonlinearitySpec::real_odd_power(int p, double lambda) {
  if (p < 3 || p % 2 == 0)
    throw std::invalid_argument("real_odd_power: p must be an odd integer >= 3");
  NonlinearitySpec s;
  s.kind = NonlinearityKind::RealOddPower;
  s.p = p;
  s.lambda = lambda;
  return s;
}

NonlinearitySpec NonlinearitySpec::toy_gauge_power(
    int p, double lambda, std::function<double(double)> coupling) {
  if (p < 3 || p % 2 == 0)
    throw std::invalid_argument("toy_gauge_power: p must be an odd integer >= 3");
  NonlinearitySpec s;
  s.kind = NonlinearityKind::ToyGaugePower;
  s.p = p;
  s.lambda = lambda;
  s.coupling = coupling ? std::move(coupling) : default_coupling;
  return s;
}

NonlinearitySpec NonlinearitySpec::toy_convolution_cubic(
    double lambda, int dimension, std::vector<double> kernel,
    std::function<double(double)> coupling) {
  if (dimension < 1)
    throw std::invalid_argument("toy_convolution_cubic: dimension < 1");
  if (kernel.empty()) {
    kernel.resize(static_cast<size_t>(dimension) * dimension);
    for (int m = 0; m < dimension; ++m)
      for (int k = 0; k < dimension; ++k)
        kernel[m * dimension + k] = 1.0 / (1.0 + std::abs(m - k));
  }
  if (kernel.size() != static_cast<size_t>(dimension) * dimension)
    throw std::invalid_argument("toy_convolution_cubic: kernel is not d x d");
  for (int m = 0; m < dimension; ++m)
    for (int k = 0; k < m; ++k)
      if (kernel[m * dimension + k] != kernel[k * dimension + m])
        throw std::invalid_argument("toy_convolution_cubic: kernel not symmetric");
  NonlinearitySpec s;
  s.kind = NonlinearityKind::ToyConvolutionCubic;
  s.p = 3;
  s.lambda = lambda;
  s.conv_kernel = std::move(kernel);
  s.coupling = coupling ? std::move(coupling) : default_coupling;
  return s;
}

double NonlinearitySpec::coupling_at(double t) const {
  return time_dependent() ? coupling(t) : 1.0;
}

ComplexField phi(const NonlinearitySpec& spec, double t,
                 const ComplexField& u) {
  check_field(spec, u, "phi");
  ComplexField out(u.grid_ptr(), u.components());
  const int n = u.points();
  switch (spec.kind) {
    case NonlinearityKind::GaugePower:
    case NonlinearityKind::ToyGaugePower: {
      const Complex factor =
          Complex(0.0, -spec.lambda * spec.coupling_at(t));
      const int m = (spec.p - 1) / 2;
      const Complex* a = u.component(0);
      Complex* o = out.component(0);
      for (int j = 0; j < n; ++j) o[j] = factor * ipow(std::norm(a[j]), m) * a[j];
      break;
    }
    case NonlinearityKind::RealOddPower: {
      const Complex* a = u.component(0);
      Complex* o1 = out.component(1);
      for (int j = 0; j < n; ++j) o1[j] = -spec.lambda * cipow(a[j], spec.p);
      break;
    }
    case NonlinearityKind::ToyConvolutionCubic: {
      const Complex factor = Complex(0.0, -spec.lambda * spec.coupling_at(t));
      const Complex* a = u.component(0);
      Complex* o = out.component(0);
      for (int m = 0; m < n; ++m) {
        double conv = 0.0;
        for (int k = 0; k < n; ++k)
          conv += spec.conv_kernel[m * n + k] * std::norm(a[k]);
        o[m] = factor * conv * a[m];
      }
      break;
    }
  }
  return out;
}

ComplexField phi_linearized(const NonlinearitySpec& spec, double t,
                            const ComplexField& u, const ComplexField& w) {
  check_field(spec, u, "phi_linearized");
  ensure_same_shape(u, w, "phi_linearized");
  ComplexField out(u.grid_ptr(), u.components());
  const int n = u.points();
  switch (spec.kind) {
    case NonlinearityKind::GaugePower:
    case NonlinearityKind::ToyGaugePower: {
      const Complex factor = Complex(0.0, -spec.lambda * spec.coupling_at(t));
      const int p = spec.p;
      const Complex* a = u.component(0);
      const Complex* b = w.component(0);
      Complex* o = out.component(0);
      const double ch = 0.5 * (p + 1), cs = 0.5 * (p - 1);
      for (int j = 0; j < n; ++j) {
        const double r2 = std::norm(a[j]);
        const Complex holo = ch * ipow(r2, (p - 1) / 2) * b[j];
        const Complex anti =
            cs * ipow(r2, (p - 3) / 2) * a[j] * a[j] * std::conj(b[j]);
        o[j] = factor * (holo + anti);
      }
      break;
    }
    case NonlinearityKind::RealOddPower: {
      const Complex* a = u.component(0);
      const Complex* b = w.component(0);
      Complex* o1 = out.component(1);
      for (int j = 0; j < n; ++j)
        o1[j] = -spec.lambda * static_cast<double>(spec.p) *
                cipow(a[j], spec.p - 1) * b[j];
      break;
    }
    case NonlinearityKind::ToyConvolutionCubic: {
      const Complex factor = Complex(0.0, -spec.lambda * spec.coupling_at(t));
      const Complex* a = u.component(0);
      const Complex* b = w.component(0);
      Complex* o = out.component(0);
      for (int m = 0; m < n; ++m) {
        double conv = 0.0, dconv = 0.0;
        for (int k = 0; k < n; ++k) {
          const double kk = spec.conv_kernel[m * n + k];
          conv += kk * std::norm(a[k]);
          dconv += kk * 2.0 * (std::conj(a[k]) * b[k]).real();
        }
        o[m] = factor * (conv * b[m] + dconv * a[m]);
      }
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Degree extraction on interpolation nodes {0, +-1, ..., +-(p-1)/2, (p+1)/2}.

namespace {

std::vector<double> extraction_nodes(int p) {
  std::vector<double> nodes;
  nodes.push_back(0.0);
  for (int k = 1; k <= (p - 1) / 2; ++k) {
    nodes.push_back(static_cast<double>(k));
    nodes.push_back(static_cast<double>(-k));
  }
  nodes.push_back(static_cast<double>((p + 1) / 2));
  return nodes;
}

// Rows of the inverse Vandermonde: coefficient_j = sum_i inv[j][i] g(node_i).
const std::vector<std::vector<double>>& vandermonde_inverse(int p) {
  static std::map<int, std::vector<std::vector<double>>> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(p);
  if (it != cache.end()) return it->second;

  const std::vector<double> nodes = extraction_nodes(p);
  const int n = static_cast<int>(nodes.size());
  // Gauss-Jordan in long double on [V | I].
  std::vector<std::vector<long double>> a(
      n, std::vector<long double>(2 * n, 0.0L));
  for (int i = 0; i < n; ++i) {
    long double pw = 1.0L;
    for (int j = 0; j < n; ++j) {
      a[i][j] = pw;
      pw *= nodes[i];
    }
    a[i][n + i] = 1.0L;
  }
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int i = col + 1; i < n; ++i)
      if (std::abs((double)a[i][col]) > std::abs((double)a[pivot][col]))
        pivot = i;
    std::swap(a[col], a[pivot]);
    const long double d = a[col][col];
    for (int j = 0; j < 2 * n; ++j) a[col][j] /= d;
    for (int i = 0; i < n; ++i) {
      if (i == col) continue;
      const long double f = a[i][col];
      if (f == 0.0L) continue;
      for (int j = 0; j < 2 * n; ++j) a[i][j] -= f * a[col][j];
    }
  }
  std::vector<std::vector<double>> inv(n, std::vector<double>(n));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) inv[j][i] = static_cast<double>(a[j][n + i]);
  return cache.emplace(p, std::move(inv)).first->second;
}

// Coefficient of eps^j in Phi(t, base + eps v): the diagonal Phi_j(u; v..v).
ComplexField extract_diagonal(const NonlinearitySpec& spec, double t,
                              const ComplexField& base, const ComplexField& v,
                              int j) {
  const std::vector<double> nodes = extraction_nodes(spec.p);
  const auto& inv = vandermonde_inverse(spec.p);
  ComplexField out(base.grid_ptr(), base.components());
  for (size_t i = 0; i < nodes.size(); ++i) {
    const double w = inv[j][i];
    if (w == 0.0) continue;
    ComplexField shifted = base;
    axpy(Complex(nodes[i], 0.0), v, shifted);
    axpy(Complex(w, 0.0), phi(spec, t, shifted), out);
  }
  return out;
}

}  // namespace

ComplexField n_j_integrand(const NonlinearitySpec& spec, double t,
                           const ComplexField& background,
                           std::span<const ComplexField* const> ws, int j) {
  if (j < 1 || j > spec.p)
    throw std::invalid_argument("n_j_integrand: j must lie in [1, p]");
  if (static_cast<int>(ws.size()) != j)
    throw std::invalid_argument("n_j_integrand: need exactly j arguments");
  check_field(spec, background, "n_j_integrand");
  for (const ComplexField* w : ws)
    ensure_same_shape(background, *w, "n_j_integrand");

  // Phi_j is (p-j)-linear in the background and linear in each w, so it
  // vanishes identically in these cases; return exact zeros.
  if (j < spec.p && background.zero())
    return ComplexField(background.grid_ptr(), background.components());
  for (const ComplexField* w : ws)
    if (w->zero())
      return ComplexField(background.grid_ptr(), background.components());

  bool all_equal = true;
  for (int i = 1; i < j; ++i) {
    if (ws[i] == ws[0]) continue;
    if (ws[i]->values() != ws[0]->values()) {
      all_equal = false;
      break;
    }
  }
  if (all_equal) return extract_diagonal(spec, t, background, *ws[0], j);

  // Real polarization of the symmetric j-linear form.
  ComplexField out(background.grid_ptr(), background.components());
  const double scale = 1.0 / (std::ldexp(1.0, j) * std::tgamma(j + 1.0));
  for (int mask = 0; mask < (1 << j); ++mask) {
    ComplexField combo(background.grid_ptr(), background.components());
    int sign = 1;
    for (int i = 0; i < j; ++i) {
      const double s = (mask >> i) & 1 ? -1.0 : 1.0;
      if (s < 0) sign = -sign;
      axpy(Complex(s, 0.0), *ws[i], combo);
    }
    axpy(Complex(sign * scale, 0.0),
         extract_diagonal(spec, t, background, combo, j), out);
  }
  return out;
}

ComplexField n_j_integrand(const NonlinearitySpec& spec, double t,
                           const ComplexField& background,
                           const ComplexField& w, int j) {
  std::vector<const ComplexField*> ws(j, &w);
  return n_j_integrand(spec, t, background,
                       std::span<const ComplexField* const>(ws), j);
}

// ---------------------------------------------------------------------------
// Truncated power-series arithmetic for the hierarchy sources.

namespace {

constexpr int kMaxJet = 24;

struct Jet {
  int len = 0;
  std::array<Complex, kMaxJet> c{};
};

Jet jet_mul(const Jet& a, const Jet& b) {
  Jet r;
  r.len = a.len;
  for (int k = 0; k < r.len; ++k) {
    Complex s(0.0, 0.0);
    for (int i = 0; i <= k; ++i) s += a.c[i] * b.c[k - i];
    r.c[k] = s;
  }
  return r;
}

Jet jet_conj(const Jet& a) {
  Jet r;
  r.len = a.len;
  for (int k = 0; k < r.len; ++k) r.c[k] = std::conj(a.c[k]);
  return r;
}

Jet jet_pow(const Jet& a, int k) {
  Jet r;
  r.len = a.len;
  r.c[0] = Complex(1.0, 0.0);
  for (int i = 0; i < k; ++i) r = jet_mul(r, a);
  return r;
}

Jet load_jet(const ComplexField& base,
             std::span<const ComplexField* const> terms, int component,
             int point, int order) {
  Jet z;
  z.len = order + 1;
  z.c[0] = base.component(component)[point];
  for (size_t k = 0; k < terms.size() && static_cast<int>(k) + 1 <= order; ++k)
    z.c[k + 1] = terms[k]->component(component)[point];
  return z;
}

}  // namespace

ComplexField phi_series_coefficient(const NonlinearitySpec& spec, double t,
                                    const ComplexField& base,
                                    std::span<const ComplexField* const> terms,
                                    int order) {
  if (order < 0 || order + 1 > kMaxJet)
    throw std::invalid_argument("phi_series_coefficient: order out of range");
  check_field(spec, base, "phi_series_coefficient");
  for (const ComplexField* w : terms)
    ensure_same_shape(base, *w, "phi_series_coefficient");

  ComplexField out(base.grid_ptr(), base.components());
  const int n = base.points();
  switch (spec.kind) {
    case NonlinearityKind::GaugePower:
    case NonlinearityKind::ToyGaugePower: {
      const Complex factor = Complex(0.0, -spec.lambda * spec.coupling_at(t));
      const int m = (spec.p - 1) / 2;
      Complex* o = out.component(0);
      for (int j = 0; j < n; ++j) {
        const Jet z = load_jet(base, terms, 0, j, order);
        const Jet s = jet_mul(z, jet_conj(z));
        const Jet w = jet_mul(jet_pow(s, m), z);
        o[j] = factor * w.c[order];
      }
      break;
    }
    case NonlinearityKind::RealOddPower: {
      Complex* o1 = out.component(1);
      for (int j = 0; j < n; ++j) {
        const Jet z = load_jet(base, terms, 0, j, order);
        const Jet w = jet_pow(z, spec.p);
        o1[j] = -spec.lambda * w.c[order];
      }
      break;
    }
    case NonlinearityKind::ToyConvolutionCubic: {
      const Complex factor = Complex(0.0, -spec.lambda * spec.coupling_at(t));
      Complex* o = out.component(0);
      std::vector<Jet> z(n), s(n);
      for (int k = 0; k < n; ++k) {
        z[k] = load_jet(base, terms, 0, k, order);
        s[k] = jet_mul(z[k], jet_conj(z[k]));
      }
      for (int m = 0; m < n; ++m) {
        Jet conv;
        conv.len = order + 1;
        for (int k = 0; k < n; ++k) {
          const double kk = spec.conv_kernel[m * n + k];
          for (int i = 0; i <= order; ++i) conv.c[i] += kk * s[k].c[i];
        }
        const Jet w = jet_mul(conv, z[m]);
        o[m] = factor * w.c[order];
      }
      break;
    }
  }
  return out;
}

}  // namespace scatlab
