#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tfloc/grid.hpp"

namespace tfloc {

enum class WindowKind { gaussian, hermite, tabulated };

/// A window g sampled on a SignalGrid and normalized to unit discrete norm
/// (sum |g(t_i)|^2 dt = 1). Gaussian and Hermite windows keep their closed form
/// so translated copies are evaluated exactly; tabulated windows translate by
/// whole samples.
class Window {
 public:
  const SignalGrid& grid() const { return grid_; }
  const std::vector<cplx>& samples() const { return samples_; }
  const std::string& label() const { return label_; }
  WindowKind kind() const { return kind_; }
  bool analytic() const { return kind_ != WindowKind::tabulated; }
  /// Width for Gaussian windows, order k for Hermite windows, 0 otherwise.
  double parameter() const { return parameter_; }

  /// Ratio of the time (resp. frequency) spread of |g|^2 to that of the standard
  /// Gaussian 2^{1/4} e^{-pi t^2}; used to size grid margins.
  double time_scale() const { return time_scale_; }
  double freq_scale() const { return freq_scale_; }

  /// True when g is real-valued and even about t = 0.
  bool real_even() const { return real_even_; }

  /// g(t) with the discrete normalization applied. Tabulated windows return the
  /// nearest sample (zero off the grid).
  cplx value(double t) const;

  /// Samples of the translate g(t_i - shift) on this window's grid.
  std::vector<cplx> translated(double shift) const;

  /// Whole-sample shift used for tabulated windows.
  long sample_shift(double shift) const;

  friend Window gaussian_window(const SignalGrid& grid, double width);
  friend Window hermite_window(const SignalGrid& grid, unsigned k);
  friend Window tabulated_window(const SignalGrid& grid, std::vector<cplx> samples, std::string label);

 private:
  Window(SignalGrid grid, WindowKind kind, double parameter, std::string label)
      : grid_(grid), kind_(kind), parameter_(parameter), label_(std::move(label)) {}

  cplx profile(double t) const;
  void finish();

  SignalGrid grid_;
  WindowKind kind_;
  double parameter_;
  std::string label_;
  double scale_ = 1.0;
  std::vector<cplx> samples_;
  double time_scale_ = 1.0;
  double freq_scale_ = 1.0;
  bool real_even_ = false;
};

/// Tail mass above which a window is rejected as truncated by its grid.
inline constexpr double kWindowTailLimit = 1e-12;

/// Samples of c*exp(-pi (t/width)^2) normalized to unit discrete norm.
/// Throws TruncationError when more than kWindowTailLimit of the mass lies off the grid.
Window gaussian_window(const SignalGrid& grid, double width);

/// The k-th Hermite function (k = 0 is 2^{1/4} e^{-pi t^2}), evaluated by the
/// normalized three-term recurrence. Throws ResolutionError when its shortest
/// oscillation is below 4 samples and TruncationError when it does not decay
/// inside the grid.
Window hermite_window(const SignalGrid& grid, unsigned k);

/// Hermite function value h_{k+1}(t) in continuum normalization.
double hermite_function(unsigned k, double t);

/// Arbitrary sampled window; rescaled to unit discrete norm.
Window tabulated_window(const SignalGrid& grid, std::vector<cplx> samples, std::string label);

/// Discrete inner product sum_i a_i conj(b_i) dt.
cplx inner(std::span<const cplx> a, std::span<const cplx> b, double dt);
double norm(std::span<const cplx> a, double dt);

/// Atom phi_z(t_i) = g(t_i - x) e^{2 pi i xi t_i}.
/// Throws TruncationError when the discrete norm differs from that of g by more than 1e-8.
std::vector<cplx> atom(const Window& g, PlanePoint z);

/// Discrete STFT V_g f(z) = sum_i f(t_i) conj(phi_z(t_i)) dt at every plane point.
ComplexPlaneField stft(std::span<const cplx> f, const Window& g, const PlaneGrid& plane);

/// Theta(z) = |V_g g(z)|^2. Throws CoverageError when its discrete integral deviates
/// from 1 by more than 1e-4.
PlaneField theta(const Window& g, const PlaneGrid& plane);

/// Discretized squared M* norm sum |z| Theta(z) cell_area. Missing Theta mass above
/// 1e-8 is reported through diag together with a tail bound.
double mstar_norm(const Window& g, const PlaneGrid& plane, Diagnostics* diag = nullptr);

namespace detail {

/// Calls emit(j, s, column) for each time column j of the plane and each signal s,
/// where column[k] = V_g signals[s](x_j, xi_k). Columns run in parallel; emit may only
/// write storage owned by column j.
void for_each_stft_column(
    const Window& g, const PlaneGrid& plane, const std::vector<std::span<const cplx>>& signals,
    const std::function<void(std::size_t j, std::size_t s, std::span<const cplx> column)>& emit);

}  // namespace detail

}  // namespace tfloc
