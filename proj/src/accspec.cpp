#include "tfloc/accspec.hpp"

#include <sstream>

namespace tfloc {

PlaneField eigen_spectrogram(const Window& g, std::span<const cplx> h, const PlaneGrid& plane) {
  if (std::abs(norm(h, g.grid().dt()) - 1.0) > 1e-8)
    throw ContractViolation("eigen_spectrogram: signal is not normalized");
  return squared_modulus(stft(h, g, plane));
}

PlaneField spectrogram_sum(const SpectralDecomposition& dec, const Window& g, const PlaneGrid& plane,
                           std::span<const double> weights) {
  if (weights.size() > dec.size()) throw ContractViolation("spectrogram_sum: more weights than eigenpairs");
  std::vector<std::span<const cplx>> signals;
  std::vector<double> used;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] == 0.0) continue;
    signals.push_back(dec.eigenvector(k));
    used.push_back(weights[k]);
  }
  PlaneField out(plane);
  detail::for_each_stft_column(g, plane, signals, [&](std::size_t j, std::size_t s, std::span<const cplx> col) {
    for (std::size_t k = 0; k < col.size(); ++k) out.at(j, k) += used[s] * std::norm(col[k]);
  });
  return out;
}

AccumulatedSpectrogram accumulated(const SpectralDecomposition& dec, const Window& g, const PlaneGrid& plane,
                                   double measure) {
  const std::size_t a = a_omega(measure);
  if (dec.size() < a) {
    std::ostringstream msg;
    msg << "accumulated: " << a << " eigenpairs required, " << dec.size() << " available";
    throw ContractViolation(msg.str());
  }
  const std::vector<double> ones(a, 1.0);
  AccumulatedSpectrogram rho{spectrogram_sum(dec, g, plane, ones), a, 0.0, false};
  if (a >= 1) {
    const double below = a < dec.size() ? dec.eigenvalues[a] : 0.0;
    rho.gap_at_cut = dec.eigenvalues[a - 1] - below;
    rho.basis_dependent = rho.gap_at_cut < kDegenerateGap;
  }
  return rho;
}

WeightedSpectrogram weighted_sum(const SpectralDecomposition& dec, const Window& g, const PlaneGrid& plane,
                                 Diagnostics* diag, double cutoff) {
  std::vector<double> weights(dec.size(), 0.0);
  double dropped = 0.0;
  for (std::size_t k = 0; k < dec.size(); ++k) {
    if (std::abs(dec.eigenvalues[k]) > cutoff)
      weights[k] = dec.eigenvalues[k];
    else
      dropped += std::abs(dec.eigenvalues[k]);
  }
  if (!dec.complete()) {
    double kept = 0.0;
    for (double l : dec.eigenvalues) kept += l;
    const double missing = std::max(0.0, dec.measure - kept);
    dropped += missing;
    if (diag) {
      std::ostringstream msg;
      msg << "weighted_sum: decomposition truncated to " << dec.size() << " of " << dec.dimension
          << " pairs; pointwise identity defect bounded by " << missing;
      diag->warn(msg.str());
    }
  }
  return {spectrogram_sum(dec, g, plane, weights), dropped};
}

}  // namespace tfloc
