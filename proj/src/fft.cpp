#include "scatlab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace scatlab::spectral {

namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

// Plans are created once per size with FFTW_ESTIMATE (deterministic) and
// FFTW_UNALIGNED (safe for std::vector storage), then executed on caller
// buffers via the new-array interface, which is thread-safe.
const PlanPair& plans_for(int n) {
  static std::map<int, PlanPair> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<Complex> scratch(n);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  PlanPair p;
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  p.forward = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, flags);
  p.inverse = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, flags);
  if (!p.forward || !p.inverse)
    throw std::runtime_error("fft: plan creation failed");
  return cache.emplace(n, p).first->second;
}

}  // namespace

void forward_inplace(int n, Complex* data) {
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plans_for(n).forward, buf, buf);
}

void inverse_inplace(int n, Complex* data) {
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plans_for(n).inverse, buf, buf);
  const double scale = 1.0 / n;
  for (int j = 0; j < n; ++j) data[j] *= scale;
}

void derivative_inplace(const SpatialGrid& grid, Complex* component) {
  if (grid.kind() != GridKind::Periodic1D)
    throw std::invalid_argument("spectral derivative needs a periodic grid");
  const int n = grid.size();
  forward_inplace(n, component);
  const auto& xi = grid.wavenumbers();
  for (int m = 0; m < n; ++m) component[m] *= Complex(0.0, xi[m]);
  inverse_inplace(n, component);
}

ComplexField derivative(const ComplexField& f) {
  ComplexField out = f;
  for (int c = 0; c < f.components(); ++c)
    derivative_inplace(f.grid(), out.component(c));
  return out;
}

}  // namespace scatlab::spectral
