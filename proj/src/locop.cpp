#include "tfloc/locop.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fft.hpp"
#include "tfloc/parallel.hpp"

namespace tfloc {

namespace {

constexpr double kPi = std::numbers::pi;

bool on_lattice(double value, double step) {
  const double r = value / step;
  return std::abs(r - std::round(r)) <= 1e-9 * std::max(1.0, std::abs(r));
}

// Per time column of the mask: translated window (restricted to its numerical
// support) and the Toeplitz factor S(d) = sum_{k inside} e^{2 pi i xi_k d dt}, d >= 0.
struct ColumnFactor {
  std::vector<cplx> window;
  std::vector<cplx> toeplitz;
  std::size_t lo = 0;
  std::size_t hi = 0;
  double weight = 0.0;  // inside cell count
};

}  // namespace

std::size_t a_omega(double measure) {
  if (measure <= 0.0) return 0;
  return static_cast<std::size_t>(std::ceil(measure - 1e-9 * std::max(1.0, measure)));
}

LocalizationOperator build_operator(const Window& g, const DomainMask& mask) {
  const SignalGrid& sg = g.grid();
  const PlaneGrid& pg = mask.grid();
  const std::size_t n = sg.size();
  const double dt = sg.dt();

  if (!g.analytic() && (!on_lattice(pg.dx(), dt) || !on_lattice(pg.x0() - sg.t0(), dt)))
    throw ContractViolation("build_operator: tabulated windows need plane x points on the sample lattice");

  std::vector<std::size_t> columns;
  for (std::size_t j = 0; j < pg.nx(); ++j)
    for (std::size_t k = 0; k < pg.nxi(); ++k)
      if (mask.inside(j, k)) {
        columns.push_back(j);
        break;
      }

  const auto period = detail::folding_period(pg.dxi(), dt);
  const bool folded = period && *period >= pg.nxi();
  std::unique_ptr<detail::DftPlan> plan;
  std::vector<cplx> chirp(n);
  if (folded) {
    plan = std::make_unique<detail::DftPlan>(*period, FFTW_BACKWARD);
    for (std::size_t d = 0; d < n; ++d)
      chirp[d] = std::polar(1.0, 2.0 * kPi * pg.xi0() * static_cast<double>(d) * dt);
  }

  std::vector<ColumnFactor> factors(columns.size());
  parallel_for(0, columns.size(), [&](std::size_t c) {
    const std::size_t j = columns[c];
    ColumnFactor& f = factors[c];
    f.window = g.translated(pg.x(j));
    double peak = 0.0;
    for (const cplx& v : f.window) peak = std::max(peak, std::abs(v));
    const double cut = 1e-18 * peak;
    f.lo = 0;
    f.hi = n;
    while (f.lo < f.hi && std::abs(f.window[f.lo]) <= cut) ++f.lo;
    while (f.hi > f.lo && std::abs(f.window[f.hi - 1]) <= cut) --f.hi;

    f.toeplitz.assign(n, cplx{});
    std::vector<std::size_t> rows;
    for (std::size_t k = 0; k < pg.nxi(); ++k)
      if (mask.inside(j, k)) rows.push_back(k);
    f.weight = static_cast<double>(rows.size());
    if (folded) {
      const std::size_t m = *period;
      detail::FftBuffer in(m), out(m);
      std::fill(in.data(), in.data() + m, cplx{});
      for (std::size_t k : rows) in[k] = 1.0;
      plan->execute(in, out);
      for (std::size_t d = 0; d < n; ++d) f.toeplitz[d] = chirp[d] * out[d % m];
    } else {
      for (std::size_t d = 0; d < n; ++d) {
        cplx acc = 0.0;
        for (std::size_t k : rows) acc += std::polar(1.0, 2.0 * kPi * pg.xi(k) * static_cast<double>(d) * dt);
        f.toeplitz[d] = acc;
      }
    }
  });

  // Upper triangle, column by column: A(l, i) = w sum_j G_j(l) conj(G_j(i)) conj(S_j(i - l)).
  const double w = pg.cell_area() * dt;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  parallel_for(0, n, [&](std::size_t i) {
    cplx* col = a.col(static_cast<Eigen::Index>(i)).data();
    for (const ColumnFactor& f : factors) {
      if (i < f.lo || i >= f.hi) continue;
      const cplx gi = std::conj(f.window[i]) * w;
      for (std::size_t l = f.lo; l <= i; ++l) col[l] += f.window[l] * gi * std::conj(f.toeplitz[i - l]);
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    a(ii, ii) = a(ii, ii).real();
    for (std::size_t l = 0; l < i; ++l) a(ii, static_cast<Eigen::Index>(l)) = std::conj(a(static_cast<Eigen::Index>(l), ii));
  }

  double trace = 0.0;
  for (std::size_t i = 0; i < n; ++i) trace += a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
  const double mes = measure(mask);
  const double tail = mes > 0.0 ? std::abs(trace - mes) / mes : 0.0;
  if (tail > 1e-8) {
    std::ostringstream msg;
    msg << "build_operator: atoms lose relative mass " << tail << " outside the signal grid";
    throw TruncationError(msg.str());
  }
  return LocalizationOperator{std::move(a), g, mask, tail};
}

SpectralDecomposition eigendecompose(const LocalizationOperator& op, std::optional<std::size_t> count) {
  const auto n = op.matrix.rows();
  const double herm = (op.matrix - op.matrix.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-12) throw ContractViolation("eigendecompose: matrix is not Hermitian");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(op.matrix);
  if (solver.info() != Eigen::Success) throw SolverFailure("eigendecompose: eigensolver did not converge");

  const auto keep = static_cast<Eigen::Index>(count ? std::min<std::size_t>(*count, static_cast<std::size_t>(n))
                                                    : static_cast<std::size_t>(n));
  SpectralDecomposition dec;
  dec.dt = op.window.grid().dt();
  dec.dimension = static_cast<std::size_t>(n);
  dec.measure = measure(op.mask);
  dec.a_omega = a_omega(dec.measure);
  dec.eigenvalues.resize(static_cast<std::size_t>(keep));
  Eigen::MatrixXcd unit(n, keep);
  for (Eigen::Index k = 0; k < keep; ++k) {
    dec.eigenvalues[static_cast<std::size_t>(k)] = solver.eigenvalues()(n - 1 - k);
    unit.col(k) = solver.eigenvectors().col(n - 1 - k);
  }

  const double scale = std::max(std::abs(solver.eigenvalues()(0)), std::abs(solver.eigenvalues()(n - 1)));
  const Eigen::MatrixXcd image = op.matrix * unit;
  dec.residuals.resize(static_cast<std::size_t>(keep));
  for (Eigen::Index k = 0; k < keep; ++k) {
    const double r = (image.col(k) - dec.eigenvalues[static_cast<std::size_t>(k)] * unit.col(k)).norm();
    dec.residuals[static_cast<std::size_t>(k)] = r;
    if (r > 1e-9 * scale) {
      std::ostringstream msg;
      msg << "eigendecompose: residual " << r << " of pair " << k + 1 << " exceeds 1e-9 * ||H|| = " << 1e-9 * scale;
      throw SolverFailure(msg.str());
    }
  }
  const double ortho =
      (unit.adjoint() * unit - Eigen::MatrixXcd::Identity(keep, keep)).cwiseAbs().maxCoeff();
  if (ortho > 1e-8) throw SolverFailure("eigendecompose: eigenvectors are not orthonormal");

  dec.eigenvectors = unit / std::sqrt(dec.dt);
  if (dec.a_omega >= 1 && dec.a_omega <= dec.eigenvalues.size()) {
    const double below = dec.a_omega < dec.eigenvalues.size() ? dec.eigenvalues[dec.a_omega] : 0.0;
    dec.gap_at_cut = dec.eigenvalues[dec.a_omega - 1] - below;
  }
  return dec;
}

std::size_t count_above(const SpectralDecomposition& dec, double threshold) {
  return static_cast<std::size_t>(
      std::count_if(dec.eigenvalues.begin(), dec.eigenvalues.end(), [&](double l) { return l > threshold; }));
}

TracePair trace_pair(const LocalizationOperator& op, const PlaneField& theta, const SpectralDecomposition* dec) {
  TracePair tp;
  if (dec && dec->complete()) {
    for (double l : dec->eigenvalues) {
      tp.trace1 += l;
      tp.trace2 += l * l;
    }
  } else {
    tp.trace1 = op.matrix.trace().real();
    tp.trace2 = op.matrix.squaredNorm();
  }
  if (op.mask.empty()) return tp;
  const PlaneField conv = convolve_indicator(op.mask, theta);
  double s = 0.0;
  for (std::size_t i = 0; i < conv.size(); ++i)
    if (op.mask.cells()[i]) s += conv[i];
  tp.rhs2 = s * op.mask.grid().cell_area();
  return tp;
}

double eigen_tail(const SpectralDecomposition& dec, double measure) {
  if (!(measure > 0.0)) throw ContractViolation("eigen_tail: measure must be positive");
  const std::size_t a = a_omega(measure);
  if (dec.size() < a) throw ContractViolation("eigen_tail: fewer than A_Omega eigenvalues available");
  double s = 0.0;
  for (std::size_t k = 0; k < a; ++k) s += dec.eigenvalues[k];
  return 1.0 - s / measure;
}

}  // namespace tfloc
