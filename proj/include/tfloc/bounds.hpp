#pragma once

#include <map>
#include <optional>
#include <span>

#include "tfloc/accspec.hpp"
#include "tfloc/domain.hpp"

namespace tfloc {

/// sum |a - b| * cell_area. Throws ContractViolation on grid mismatch.
double l1_error(const PlaneField& a, const PlaneField& b);

/// (sum |a - b|^p * cell_area)^{1/p}; p = infinity gives the sup norm.
/// Throws ContractViolation for p < 1 or grid mismatch.
double lp_error(const PlaneField& a, const PlaneField& b, double p);

/// cell_area times the number of cells with |a - b| > delta.
double level_measure(const PlaneField& a, const PlaneField& b, double delta);

// Right-hand sides of the error bounds. mstar is the squared M* norm as returned
// by mstar_norm, so ||g||_{M*} = sqrt(mstar).

/// 1/|Omega| + 4 ||g||_{M*} sqrt(P/|Omega|): bound on ||rho - 1_Omega * Theta||_1 / |Omega|.
double mollified_error_bound(double measure, double perimeter, double mstar);

/// 1/|Omega| + mstar P/|Omega| + 4 ||g||_{M*} sqrt(P/|Omega|): bound on ||rho - 1_Omega||_1 / |Omega|.
double indicator_error_bound(double measure, double perimeter, double mstar);

/// max(1/delta, 1/(1-delta)) * mstar * P: bound on |#{lambda > 1 - delta} - |Omega||.
double eigen_count_bound(double delta, double mstar, double perimeter);

/// max(1/delta, 1/(1-delta)) * |double_integral - |Omega||, with the double
/// integral of Theta(z - z') over Omega x Omega.
double trace_defect_bound(double delta, double double_integral, double measure);

/// P * mstar: bound on ||1_Omega * Theta - 1_Omega||_1.
double mollification_bound(double perimeter, double mstar);

/// 2 ||g||_{M*} sqrt(P/|Omega|): bound on E(Omega).
double eigen_tail_bound(double measure, double perimeter, double mstar);

/// 1/|Omega| + 2 E(Omega): bound on ||rho - 1_Omega * Theta||_1 / |Omega| in terms of the tail.
double tail_error_bound(double measure, double e_omega);

/// level * delta^2 / (mstar * P), the measured constant of the weak-L2 estimate.
double weak_l2_constant(double level, double delta, double mstar, double perimeter);

/// The weak-L2 estimate is stated for mstar * P >= 1 only.
bool weak_l2_applicable(double mstar, double perimeter);

/// {rho > 1/2} as a raster-only mask on the field's grid.
DomainMask recover_domain(const PlaneField& rho);
DomainMask recover_domain(const AccumulatedSpectrogram& rho);

/// Measure of the cells where exactly one mask is set. Throws ContractViolation on grid mismatch.
double symmetric_difference(const DomainMask& a, const DomainMask& b);

/// Every quantity compared against the bounds for one domain and window.
struct ErrorReport {
  double measure = 0.0;
  double perimeter = 0.0;
  double mstar = 0.0;
  std::size_t a_omega = 0;
  /// ||rho - 1_Omega||_1 and its value divided by |Omega|.
  double l1_raw = 0.0;
  double l1_normalized = 0.0;
  /// ||rho - 1_Omega * Theta||_1 / |Omega|.
  double l1_mollified = 0.0;
  /// ||rho - 1_Omega||_p keyed by p; infinity is the sup norm.
  std::map<double, double> lp;
  /// |{|rho - 1_Omega| > delta}| keyed by delta.
  std::map<double, double> level_measures;
  std::map<double, double> weak_l2_constants;
  bool weak_l2_applicable = false;
  double e_omega = 0.0;
  double bound_mollified = 0.0;
  double bound_indicator = 0.0;
  double bound_tail = 0.0;
  /// l1_normalized / sqrt(P/|Omega|).
  double eqc_ratio = 0.0;
  /// eigen_count_bound at delta = 1/2.
  double bound_count = 0.0;
  double recovery_symdiff = 0.0;
  double gap_at_cut = 0.0;
  bool basis_dependent = false;
};

struct ReportInputs {
  const AccumulatedSpectrogram* rho = nullptr;
  const PlaneField* mollified = nullptr;  // 1_Omega * Theta
  const DomainMask* mask = nullptr;
  const SpectralDecomposition* dec = nullptr;
  double mstar = 0.0;
  std::span<const double> deltas;
  std::span<const double> exponents;
};

ErrorReport error_report(const ReportInputs& in);

}  // namespace tfloc
