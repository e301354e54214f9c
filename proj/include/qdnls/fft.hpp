#pragma once

#include <complex>
#include <vector>

namespace qdnls {

using Complex = std::complex<double>;

// Thin wrapper over FFTW plans. Plans are created once per shape and shared;
// execution is thread-safe (new-array execute on caller buffers).
// Transforms are unnormalized: forward uses e^{-2pi i k j/n}, backward e^{+...}.
class Fft {
 public:
  // Row-major shape, last index fastest. 1 to 3 dimensions.
  explicit Fft(std::vector<int> shape);

  void forward(Complex* data) const;
  void backward(Complex* data) const;
  std::size_t size() const { return size_; }

 private:
  const void* forward_plan_;
  const void* backward_plan_;
  std::size_t size_;
};

}  // namespace qdnls
