#pragma once

#include <span>

#include "tfloc/locop.hpp"

namespace tfloc {

/// rho_Omega: sum of the spectrograms of the first A_Omega eigenfunctions.
struct AccumulatedSpectrogram {
  PlaneField field;
  std::size_t a_omega = 0;
  double gap_at_cut = 0.0;
  /// Set when gap_at_cut < kDegenerateGap: the summed eigenspace is not unique and
  /// the field depends on the eigensolver's choice of basis.
  bool basis_dependent = false;
};

/// |V_g h|^2 for a unit-norm signal h. Throws ContractViolation when ||h|| differs from 1 by more than 1e-8.
PlaneField eigen_spectrogram(const Window& g, std::span<const cplx> h, const PlaneGrid& plane);

/// sum_k weights[k] |V_g h_k|^2 over the first weights.size() eigenvectors; zero weights are skipped.
PlaneField spectrogram_sum(const SpectralDecomposition& dec, const Window& g, const PlaneGrid& plane,
                           std::span<const double> weights);

/// rho_Omega with A_Omega = ceil(measure). Throws ContractViolation when fewer eigenpairs are available.
AccumulatedSpectrogram accumulated(const SpectralDecomposition& dec, const Window& g, const PlaneGrid& plane,
                                   double measure);

struct WeightedSpectrogram {
  PlaneField field;
  /// Sum of eigenvalues left out of the sum; bounds the pointwise defect.
  double truncated_mass = 0.0;
};

/// sum_k lambda_k |V_g h_k|^2, which reproduces 1_Omega * Theta. Pairs with
/// |lambda_k| <= cutoff are dropped and accounted for in truncated_mass; an
/// incomplete decomposition adds a warning with the missing trace.
WeightedSpectrogram weighted_sum(const SpectralDecomposition& dec, const Window& g, const PlaneGrid& plane,
                                 Diagnostics* diag = nullptr, double cutoff = 1e-14);

}  // namespace tfloc
