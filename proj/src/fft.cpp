#include "fft.hpp"

#include <cmath>
#include <mutex>

namespace tfloc::detail {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

DftPlan::DftPlan(std::size_t n, int sign) : n_(n) {
  FftBuffer a(n), b(n);
  std::lock_guard<std::mutex> lock(planner_mutex());
  plan_ = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(a.data()),
                           reinterpret_cast<fftw_complex*>(b.data()), sign, FFTW_ESTIMATE);
  if (!plan_) throw std::runtime_error("fftw planning failed");
}

DftPlan::~DftPlan() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(plan_);
}

void DftPlan::execute(FftBuffer& in, FftBuffer& out) const {
  fftw_execute_dft(plan_, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

std::optional<std::size_t> folding_period(double dxi, double dt) {
  const double m = 1.0 / (dxi * dt);
  const double r = std::round(m);
  if (r < 1.0 || std::abs(m - r) > 1e-9 * r) return std::nullopt;
  return static_cast<std::size_t>(r);
}

}  // namespace tfloc::detail
