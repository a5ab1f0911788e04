#pragma once

// Thin RAII wrapper over a pair of FFTW plans for a 2-D complex transform.

#include <complex>
#include <cstddef>
#include <span>

namespace tcyl::detail {

class Fft2d {
 public:
  Fft2d(int n0, int n1);
  ~Fft2d();
  Fft2d(const Fft2d&) = delete;
  Fft2d& operator=(const Fft2d&) = delete;

  std::span<std::complex<double>> data() { return {buffer_, size_}; }

  /// In-place unnormalized transforms on data(): forward uses e^{-i k x}.
  void forward();
  void backward();

 private:
  std::size_t size_;
  std::complex<double>* buffer_;
  void* plan_forward_;
  void* plan_backward_;
};

}  // namespace tcyl::detail
