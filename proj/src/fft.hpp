#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

namespace chigrid::detail {

// Aligned complex buffer owned through fftw_malloc.
class ComplexBuffer {
public:
  explicit ComplexBuffer(std::size_t n);
  ComplexBuffer(ComplexBuffer&&) noexcept = default;
  ComplexBuffer& operator=(ComplexBuffer&&) noexcept = default;

  std::complex<double>* data() { return data_.get(); }
  const std::complex<double>* data() const { return data_.get(); }
  std::size_t size() const { return size_; }
  std::complex<double>& operator[](std::size_t i) { return data_[i]; }
  const std::complex<double>& operator[](std::size_t i) const { return data_[i]; }

private:
  struct Free {
    void operator()(std::complex<double>* p) const noexcept;
  };
  std::unique_ptr<std::complex<double>[], Free> data_;
  std::size_t size_;
};

// Forward complex DFT of fixed size, out of place:
//   out[k] = sum_j in[j] exp(-2 pi i j k / n).
// Plans are created under a global lock; execute() is safe to call
// concurrently from several threads on distinct buffers.
class ForwardDft {
public:
  explicit ForwardDft(std::size_t n);
  ~ForwardDft();
  ForwardDft(const ForwardDft&) = delete;
  ForwardDft& operator=(const ForwardDft&) = delete;

  std::size_t size() const { return n_; }
  void execute(ComplexBuffer& in, ComplexBuffer& out) const;

private:
  std::size_t n_;
  void* plan_;
};

std::shared_ptr<const ForwardDft> forward_dft(std::size_t n);

} // namespace chigrid::detail
