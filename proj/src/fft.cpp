#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <new>
#include <stdexcept>

namespace chigrid::detail {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
} // namespace

void ComplexBuffer::Free::operator()(std::complex<double>* p) const noexcept { fftw_free(p); }

ComplexBuffer::ComplexBuffer(std::size_t n) : size_(n) {
  auto* raw = static_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * n));
  if (raw == nullptr && n > 0) {
    throw std::bad_alloc();
  }
  data_.reset(raw);
}

ForwardDft::ForwardDft(std::size_t n) : n_(n), plan_(nullptr) {
  ComplexBuffer in(n), out(n);
  std::lock_guard lock(planner_mutex());
  plan_ = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(in.data()),
                           reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD,
                           FFTW_ESTIMATE);
  if (plan_ == nullptr) {
    throw std::runtime_error("fftw: plan creation failed");
  }
}

ForwardDft::~ForwardDft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_));
}

void ForwardDft::execute(ComplexBuffer& in, ComplexBuffer& out) const {
  if (in.size() != n_ || out.size() != n_) {
    throw std::invalid_argument("fft: buffer size mismatch");
  }
  fftw_execute_dft(static_cast<fftw_plan>(plan_), reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

std::shared_ptr<const ForwardDft> forward_dft(std::size_t n) {
  static std::mutex cache_mutex;
  static std::map<std::size_t, std::weak_ptr<const ForwardDft>> cache;
  std::lock_guard lock(cache_mutex);
  if (auto hit = cache[n].lock()) {
    return hit;
  }
  auto plan = std::make_shared<const ForwardDft>(n);
  cache[n] = plan;
  return plan;
}

} // namespace chigrid::detail
