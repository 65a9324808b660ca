#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

#include "tfloc/domain.hpp"
#include "tfloc/gabor.hpp"

namespace tfloc {

/// Signal-domain matrix of the localization operator
///   H f = sum over inside cells z of cell_area * <f, phi_z> phi_z,
/// acting on samples with the inner product sum_i a_i conj(b_i) dt.
struct LocalizationOperator {
  Eigen::MatrixXcd matrix;
  Window window;
  DomainMask mask;
  /// Relative deviation |trace - measure| / measure caused by atoms leaving the grid.
  double assembly_tail = 0.0;
};

/// Eigenpairs of a localization operator, eigenvalues non-increasing.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  /// Columns are eigenvectors with unit discrete norm.
  Eigen::MatrixXcd eigenvectors;
  /// ||H h_k - lambda_k h_k|| per pair.
  std::vector<double> residuals;
  double dt = 1.0;
  /// Matrix dimension; eigenvalues.size() < dimension for a leading-count solve.
  std::size_t dimension = 0;
  double measure = 0.0;
  std::size_t a_omega = 0;
  /// lambda_{A} - lambda_{A+1} at A = a_omega.
  double gap_at_cut = 0.0;

  std::size_t size() const { return eigenvalues.size(); }
  bool complete() const { return eigenvalues.size() == dimension; }
  std::span<const cplx> eigenvector(std::size_t k) const {
    return {eigenvectors.col(static_cast<Eigen::Index>(k)).data(), static_cast<std::size_t>(eigenvectors.rows())};
  }
};

/// Smallest integer >= measure, robust to rounding of cell_area products.
std::size_t a_omega(double measure);

/// Threshold for flagging degenerate eigenvalues at the cut index.
inline constexpr double kDegenerateGap = 1e-6;

/// Assembles H_Omega. Atoms of every inside cell are summed column by column:
/// for a fixed time x_j the frequency sum collapses to a Toeplitz factor, which is
/// an inverse DFT of the mask column when 1/(dxi*dt) is an integer.
/// Throws ContractViolation for tabulated windows whose plane lattice is not a
/// sample lattice, TruncationError when atoms leave the signal grid.
LocalizationOperator build_operator(const Window& g, const DomainMask& mask);

/// Dense Hermitian eigendecomposition. count limits the stored leading pairs.
/// Throws SolverFailure when a residual exceeds 1e-9 ||H|| or eigenvectors are not
/// orthonormal within 1e-8.
SpectralDecomposition eigendecompose(const LocalizationOperator& op, std::optional<std::size_t> count = {});

std::size_t count_above(const SpectralDecomposition& dec, double threshold);

struct TracePair {
  double trace1 = 0.0;
  double trace2 = 0.0;
  /// sum over inside z, z' of theta(z - z') * cell_area^2.
  double rhs2 = 0.0;
};

/// trace(H) and trace(H^2) (from the eigenvalues when a complete decomposition is
/// given, from the matrix otherwise) next to the double sum of theta over Omega.
TracePair trace_pair(const LocalizationOperator& op, const PlaneField& theta,
                     const SpectralDecomposition* dec = nullptr);

/// 1 - (sum of the first A_Omega eigenvalues) / measure.
double eigen_tail(const SpectralDecomposition& dec, double measure);

}  // namespace tfloc
