#include "qdnls/fft.hpp"

#include <fftw3.h>

#include <functional>
#include <map>
#include <mutex>
#include <numeric>

#include "qdnls/error.hpp"

namespace qdnls {
namespace {

struct PlanPair {
  fftw_plan forward;
  fftw_plan backward;
};

// FFTW's planner is not thread-safe; execution of an existing plan on new
// arrays is. Plans live for the lifetime of the process.
std::mutex planner_mutex;

const PlanPair& plans_for(const std::vector<int>& shape) {
  static std::map<std::vector<int>, PlanPair> cache;
  std::lock_guard lock(planner_mutex);
  auto it = cache.find(shape);
  if (it != cache.end()) return it->second;

  const std::size_t total =
      std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
  auto* scratch = fftw_alloc_complex(total);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  const int rank = static_cast<int>(shape.size());
  PlanPair p{
      fftw_plan_dft(rank, shape.data(), scratch, scratch, FFTW_FORWARD, flags),
      fftw_plan_dft(rank, shape.data(), scratch, scratch, FFTW_BACKWARD, flags)};
  fftw_free(scratch);
  if (!p.forward || !p.backward) throw NumericalError("FFTW planning failed");
  return cache.emplace(shape, p).first->second;
}

}  // namespace

Fft::Fft(std::vector<int> shape) {
  if (shape.empty() || shape.size() > 3) throw ValidationError("FFT rank must be 1, 2 or 3");
  size_ = 1;
  for (int d : shape) {
    if (d <= 0) throw ValidationError("FFT extent must be positive");
    size_ *= static_cast<std::size_t>(d);
  }
  const auto& p = plans_for(shape);
  forward_plan_ = p.forward;
  backward_plan_ = p.backward;
}

void Fft::forward(Complex* data) const {
  auto* d = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(static_cast<fftw_plan>(const_cast<void*>(forward_plan_)), d, d);
}

void Fft::backward(Complex* data) const {
  auto* d = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(static_cast<fftw_plan>(const_cast<void*>(backward_plan_)), d, d);
}

}  // namespace qdnls
