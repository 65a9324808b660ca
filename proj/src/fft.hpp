#pragma once

#include <fftw3.h>

#include <cstddef>
#include <memory>
#include <optional>

#include "tfloc/grid.hpp"

namespace tfloc::detail {

/// Aligned scratch array for FFTW.
class FftBuffer {
 public:
  explicit FftBuffer(std::size_t n)
      : n_(n), data_(reinterpret_cast<cplx*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (!data_) throw std::bad_alloc();
  }
  ~FftBuffer() { fftw_free(data_); }
  FftBuffer(const FftBuffer&) = delete;
  FftBuffer& operator=(const FftBuffer&) = delete;

  cplx* data() { return data_; }
  std::size_t size() const { return n_; }
  cplx& operator[](std::size_t i) { return data_[i]; }

 private:
  std::size_t n_;
  cplx* data_;
};

/// Complex DFT of fixed length: out_k = sum_m in_m e^{sign 2 pi i k m / n}.
/// Executing on distinct buffers is safe from several threads.
class DftPlan {
 public:
  DftPlan(std::size_t n, int sign);
  ~DftPlan();
  DftPlan(const DftPlan&) = delete;
  DftPlan& operator=(const DftPlan&) = delete;

  std::size_t size() const { return n_; }
  void execute(FftBuffer& in, FftBuffer& out) const;

 private:
  std::size_t n_;
  fftw_plan plan_;
};

/// Period length M = 1/(dxi*dt) when it is an integer, so that DFT bins of a
/// folded signal land exactly on the xi lattice.
std::optional<std::size_t> folding_period(double dxi, double dt);

}  // namespace tfloc::detail
