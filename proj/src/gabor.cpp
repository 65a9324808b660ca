#include "tfloc/gabor.hpp"

#include <algorithm>
#include <numbers>
#include <sstream>

#include "fft.hpp"
#include "tfloc/parallel.hpp"

namespace tfloc {

namespace {

constexpr double kPi = std::numbers::pi;

double gaussian_profile(double width, double t) {
  const double u = t / width;
  return std::pow(2.0, 0.25) / std::sqrt(width) * std::exp(-kPi * u * u);
}

double discrete_energy(const std::vector<cplx>& v, double dt) {
  double s = 0.0;
  for (const cplx& c : v) s += std::norm(c);
  return s * dt;
}

// Spread of |g|^2 about its mean, relative to the standard Gaussian variance 1/(4 pi).
double sampled_time_scale(const std::vector<cplx>& v, const SignalGrid& grid) {
  double mass = 0.0, first = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    mass += std::norm(v[i]);
    first += std::norm(v[i]) * grid.coord(i);
  }
  const double mean = first / mass;
  double second = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double d = grid.coord(i) - mean;
    second += std::norm(v[i]) * d * d;
  }
  return std::sqrt(second / mass * 4.0 * kPi);
}

// Frequency spread from the derivative: int |g'|^2 = 4 pi^2 int nu^2 |g^(nu)|^2.
double sampled_freq_scale(const std::vector<cplx>& v, double dt) {
  double mass = 0.0, slope = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    mass += std::norm(v[i]);
    if (i + 1 < v.size()) slope += std::norm((v[i + 1] - v[i]) / dt);
  }
  const double variance = slope / mass / (4.0 * kPi * kPi);
  return std::sqrt(variance * 4.0 * kPi);
}

}  // namespace

double hermite_function(unsigned k, double t) {
  // Orthonormal Hermite functions psi_k(u) with u = sqrt(2 pi) t, rescaled to unit L2 norm in t.
  const double u = std::sqrt(2.0 * kPi) * t;
  double prev = 0.0;
  double cur = std::pow(kPi, -0.25) * std::exp(-0.5 * u * u);
  for (unsigned m = 0; m < k; ++m) {
    const double next = std::sqrt(2.0 / (m + 1.0)) * u * cur - std::sqrt(m / (m + 1.0)) * prev;
    prev = cur;
    cur = next;
  }
  return std::pow(2.0 * kPi, 0.25) * cur;
}

cplx Window::profile(double t) const {
  switch (kind_) {
    case WindowKind::gaussian:
      return gaussian_profile(parameter_, t);
    case WindowKind::hermite:
      return hermite_function(static_cast<unsigned>(parameter_), t);
    case WindowKind::tabulated:
      break;
  }
  return value(t);
}

void Window::finish() {
  if (analytic()) {
    samples_.resize(grid_.size());
    for (std::size_t i = 0; i < grid_.size(); ++i) samples_[i] = profile(grid_.coord(i));
  }
  const double energy = discrete_energy(samples_, grid_.dt());
  if (!(energy > 0.0)) throw ContractViolation("window '" + label_ + "' has zero norm");
  scale_ = 1.0 / std::sqrt(energy);
  for (cplx& c : samples_) c *= scale_;
}

cplx Window::value(double t) const {
  if (analytic()) return profile(t) * scale_;
  const double pos = (t - grid_.t0()) / grid_.dt();
  const long i = std::lround(pos);
  if (i < 0 || i >= static_cast<long>(grid_.size())) return 0.0;
  return samples_[static_cast<std::size_t>(i)];
}

long Window::sample_shift(double shift) const { return std::lround(shift / grid_.dt()); }

std::vector<cplx> Window::translated(double shift) const {
  std::vector<cplx> out(grid_.size());
  if (analytic()) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = profile(grid_.coord(i) - shift) * scale_;
    return out;
  }
  const long s = sample_shift(shift);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const long src = static_cast<long>(i) - s;
    if (src >= 0 && src < static_cast<long>(out.size())) out[i] = samples_[static_cast<std::size_t>(src)];
  }
  return out;
}

Window gaussian_window(const SignalGrid& grid, double width) {
  if (!(width > 0.0)) throw ContractViolation("gaussian window width must be positive");
  // |g|^2 is a normal density with standard deviation width / (2 sqrt(pi)).
  const double sigma = width / (2.0 * std::sqrt(kPi));
  const double tail = 0.5 * std::erfc(-grid.t0() / (sigma * std::sqrt(2.0))) +
                      0.5 * std::erfc(grid.end() / (sigma * std::sqrt(2.0)));
  if (tail > kWindowTailLimit) {
    std::ostringstream msg;
    msg << "gaussian window of width " << width << " loses mass " << tail << " outside the grid";
    throw TruncationError(msg.str());
  }
  std::ostringstream label;
  label << "gaussian(width=" << width << ")";
  Window w(grid, WindowKind::gaussian, width, label.str());
  w.finish();
  w.time_scale_ = width;
  w.freq_scale_ = 1.0 / width;
  w.real_even_ = true;
  return w;
}

Window hermite_window(const SignalGrid& grid, unsigned k) {
  const double spread = std::sqrt(2.0 * k + 1.0);
  const double wavelength = std::sqrt(2.0 * kPi) / spread;
  if (wavelength < 4.0 * grid.dt())
    throw ResolutionError("hermite window of order " + std::to_string(k) + " is not resolved by dt");

  const double dt = grid.dt();
  double inside = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) inside += std::pow(hermite_function(k, grid.coord(i)), 2);
  inside *= dt;
  double outside = 0.0;
  for (int side = 0; side < 2; ++side) {
    for (std::size_t m = 1;; ++m) {
      const double t = side == 0 ? grid.t0() - static_cast<double>(m) * dt
                                 : grid.end() + static_cast<double>(m - 1) * dt;
      const double v = std::pow(hermite_function(k, t), 2) * dt;
      outside += v;
      if ((v < 1e-30 && std::abs(t) > spread) || m > 1000000) break;
    }
  }
  const double tail = outside / (inside + outside);
  if (tail > kWindowTailLimit) {
    std::ostringstream msg;
    msg << "hermite window of order " << k << " loses mass " << tail << " outside the grid";
    throw TruncationError(msg.str());
  }
  Window w(grid, WindowKind::hermite, k, "hermite(k=" + std::to_string(k) + ")");
  w.finish();
  w.time_scale_ = spread;
  w.freq_scale_ = spread;
  w.real_even_ = (k % 2 == 0);
  return w;
}

Window tabulated_window(const SignalGrid& grid, std::vector<cplx> samples, std::string label) {
  if (samples.size() != grid.size())
    throw ContractViolation("tabulated window: sample count does not match grid");
  Window w(grid, WindowKind::tabulated, 0.0, std::move(label));
  w.samples_ = std::move(samples);
  w.finish();
  w.time_scale_ = sampled_time_scale(w.samples_, grid);
  w.freq_scale_ = sampled_freq_scale(w.samples_, grid.dt());
  bool even = true;
  for (std::size_t i = 0; i < grid.size() && even; ++i) {
    const cplx a = w.samples_[i];
    const cplx b = w.value(-grid.coord(i));
    even = std::abs(a.imag()) <= 1e-14 && std::abs(a - b) <= 1e-12;
  }
  w.real_even_ = even;
  return w;
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b, double dt) {
  if (a.size() != b.size()) throw ContractViolation("inner product of vectors with different lengths");
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
  return s * dt;
}

double norm(std::span<const cplx> a, double dt) { return std::sqrt(std::real(inner(a, a, dt))); }

std::vector<cplx> atom(const Window& g, PlanePoint z) {
  const SignalGrid& grid = g.grid();
  std::vector<cplx> phi = g.translated(z.x);
  for (std::size_t i = 0; i < phi.size(); ++i) phi[i] *= std::polar(1.0, 2.0 * kPi * z.xi * grid.coord(i));
  const double defect = std::abs(discrete_energy(phi, grid.dt()) - discrete_energy(g.samples(), grid.dt()));
  if (defect > 1e-8) {
    std::ostringstream msg;
    msg << "atom at (" << z.x << ", " << z.xi << ") loses mass " << defect << " outside the signal grid";
    throw TruncationError(msg.str());
  }
  return phi;
}

namespace detail {

void for_each_stft_column(
    const Window& g, const PlaneGrid& plane, const std::vector<std::span<const cplx>>& signals,
    const std::function<void(std::size_t, std::size_t, std::span<const cplx>)>& emit) {
  const SignalGrid& grid = g.grid();
  const std::size_t n = grid.size();
  const double dt = grid.dt();
  for (const auto& f : signals)
    if (f.size() != n) throw ContractViolation("stft: signal and window grids differ");

  const auto period = folding_period(plane.dxi(), dt);
  const bool folded = period && *period >= plane.nxi();
  std::unique_ptr<DftPlan> plan;
  std::vector<cplx> pre(n), post(plane.nxi());
  if (folded) {
    plan = std::make_unique<DftPlan>(*period, FFTW_FORWARD);
    for (std::size_t i = 0; i < n; ++i) pre[i] = std::polar(1.0, -2.0 * kPi * plane.xi0() * grid.coord(i));
    for (std::size_t k = 0; k < plane.nxi(); ++k)
      post[k] = dt * std::polar(1.0, -2.0 * kPi * static_cast<double>(k) * plane.dxi() * grid.t0());
  }

  parallel_for(0, plane.nx(), [&](std::size_t j) {
    std::vector<cplx> window = g.translated(plane.x(j));
    std::size_t lo = 0, hi = n;
    while (lo < hi && window[lo] == 0.0) ++lo;
    while (hi > lo && window[hi - 1] == 0.0) --hi;
    for (cplx& c : window) c = std::conj(c);

    std::vector<cplx> column(plane.nxi());
    if (folded) {
      const std::size_t m = *period;
      FftBuffer in(m), out(m);
      for (std::size_t s = 0; s < signals.size(); ++s) {
        const auto& f = signals[s];
        std::fill(in.data(), in.data() + m, cplx{});
        for (std::size_t i = lo; i < hi; ++i) in[i % m] += f[i] * window[i] * pre[i];
        plan->execute(in, out);
        for (std::size_t k = 0; k < plane.nxi(); ++k) column[k] = post[k] * out[k];
        emit(j, s, column);
      }
    } else {
      std::vector<cplx> weighted(n);
      for (std::size_t s = 0; s < signals.size(); ++s) {
        const auto& f = signals[s];
        for (std::size_t i = lo; i < hi; ++i) weighted[i] = f[i] * window[i];
        for (std::size_t k = 0; k < plane.nxi(); ++k) {
          cplx acc = 0.0;
          for (std::size_t i = lo; i < hi; ++i)
            acc += weighted[i] * std::polar(1.0, -2.0 * kPi * plane.xi(k) * grid.coord(i));
          column[k] = acc * dt;
        }
        emit(j, s, column);
      }
    }
  });
}

}  // namespace detail

ComplexPlaneField stft(std::span<const cplx> f, const Window& g, const PlaneGrid& plane) {
  ComplexPlaneField out(plane);
  detail::for_each_stft_column(g, plane, {f}, [&](std::size_t j, std::size_t, std::span<const cplx> col) {
    for (std::size_t k = 0; k < col.size(); ++k) out.at(j, k) = col[k];
  });
  return out;
}

namespace {
PlaneField theta_unchecked(const Window& g, const PlaneGrid& plane) {
  return squared_modulus(stft(g.samples(), g, plane));
}
}  // namespace

PlaneField theta(const Window& g, const PlaneGrid& plane) {
  PlaneField th = theta_unchecked(g, plane);
  const double mass = integral(th);
  if (std::abs(mass - 1.0) > 1e-4) {
    std::ostringstream msg;
    msg << "theta: plane grid captures mass " << mass << " instead of 1";
    throw CoverageError(msg.str());
  }
  return th;
}

double mstar_norm(const Window& g, const PlaneGrid& plane, Diagnostics* diag) {
  const PlaneField th = theta_unchecked(g, plane);
  double acc = 0.0;
  for (std::size_t j = 0; j < plane.nx(); ++j)
    for (std::size_t k = 0; k < plane.nxi(); ++k) acc += plane.point(j, k).norm() * th.at(j, k);
  acc *= plane.cell_area();

  const double missing = 1.0 - integral(th);
  if (diag && std::abs(missing) > 1e-8) {
    const double edge = std::min({std::abs(plane.x(0)), std::abs(plane.x(plane.nx() - 1)),
                                  std::abs(plane.xi(0)), std::abs(plane.xi(plane.nxi() - 1))});
    std::ostringstream msg;
    msg << "mstar_norm: theta mass " << missing << " outside the plane grid; the neglected tail adds at least "
        << std::max(0.0, missing) * edge;
    diag->warn(msg.str());
  }
  return acc;
}

}  // namespace tfloc
