#include "fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <new>

namespace tcyl::detail {

namespace {
// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Fft2d::Fft2d(int n0, int n1) : size_(static_cast<std::size_t>(n0) * static_cast<std::size_t>(n1)) {
  std::lock_guard lock(planner_mutex());
  auto* raw = fftw_alloc_complex(size_);
  if (raw == nullptr) throw std::bad_alloc();
  buffer_ = reinterpret_cast<std::complex<double>*>(raw);
  plan_forward_ = fftw_plan_dft_2d(n0, n1, raw, raw, FFTW_FORWARD, FFTW_ESTIMATE);
  plan_backward_ = fftw_plan_dft_2d(n0, n1, raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft2d::~Fft2d() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_forward_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_backward_));
  fftw_free(buffer_);
}

void Fft2d::forward() { fftw_execute(static_cast<fftw_plan>(plan_forward_)); }
void Fft2d::backward() { fftw_execute(static_cast<fftw_plan>(plan_backward_)); }

}  // namespace tcyl::detail
