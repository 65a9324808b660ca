#include "tfloc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tfloc {

namespace {

void require_same_grid(const PlaneGrid& a, const PlaneGrid& b, const char* what) {
  if (!(a == b)) throw ContractViolation(std::string(what) + ": grid mismatch");
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) throw ContractViolation(std::string(what) + ": arguments must be positive");
}

void require_nonnegative(double v, const char* what) {
  if (!(v >= 0.0)) throw ContractViolation(std::string(what) + ": arguments must be nonnegative");
}

double count_factor(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ContractViolation("delta must lie in (0, 1)");
  return std::max(1.0 / delta, 1.0 / (1.0 - delta));
}

}  // namespace

double l1_error(const PlaneField& a, const PlaneField& b) { return lp_error(a, b, 1.0); }

double lp_error(const PlaneField& a, const PlaneField& b, double p) {
  require_same_grid(a.grid(), b.grid(), "lp_error");
  if (!(p >= 1.0)) throw ContractViolation("lp_error: p must be at least 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::pow(std::abs(a[i] - b[i]), p);
  return std::pow(s * a.grid().cell_area(), 1.0 / p);
}

double level_measure(const PlaneField& a, const PlaneField& b, double delta) {
  require_same_grid(a.grid(), b.grid(), "level_measure");
  std::size_t count = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > delta) ++count;
  return static_cast<double>(count) * a.grid().cell_area();
}

double mollified_error_bound(double measure, double perimeter, double mstar) {
  require_positive(measure, "mollified_error_bound");
  require_nonnegative(perimeter, "mollified_error_bound");
  require_nonnegative(mstar, "mollified_error_bound");
  return 1.0 / measure + 4.0 * std::sqrt(mstar) * std::sqrt(perimeter / measure);
}

double indicator_error_bound(double measure, double perimeter, double mstar) {
  return mollified_error_bound(measure, perimeter, mstar) + mstar * perimeter / measure;
}

double eigen_count_bound(double delta, double mstar, double perimeter) {
  return count_factor(delta) * mstar * perimeter;
}

double trace_defect_bound(double delta, double double_integral, double measure) {
  return count_factor(delta) * std::abs(double_integral - measure);
}

double mollification_bound(double perimeter, double mstar) { return perimeter * mstar; }

double eigen_tail_bound(double measure, double perimeter, double mstar) {
  require_positive(measure, "eigen_tail_bound");
  return 2.0 * std::sqrt(mstar) * std::sqrt(perimeter / measure);
}

double tail_error_bound(double measure, double e_omega) {
  require_positive(measure, "tail_error_bound");
  return 1.0 / measure + 2.0 * e_omega;
}

double weak_l2_constant(double level, double delta, double mstar, double perimeter) {
  require_positive(mstar, "weak_l2_constant");
  require_positive(perimeter, "weak_l2_constant");
  return level * delta * delta / (mstar * perimeter);
}

bool weak_l2_applicable(double mstar, double perimeter) { return mstar * perimeter >= 1.0; }

DomainMask recover_domain(const PlaneField& rho) {
  std::vector<std::uint8_t> inside(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) inside[i] = rho[i] > 0.5 ? 1 : 0;
  return DomainMask(rho.grid(), std::move(inside), {}, Margins{0.0, 0.0});
}

DomainMask recover_domain(const AccumulatedSpectrogram& rho) { return recover_domain(rho.field); }

double symmetric_difference(const DomainMask& a, const DomainMask& b) {
  require_same_grid(a.grid(), b.grid(), "symmetric_difference");
  std::size_t count = 0;
  for (std::size_t i = 0; i < a.cells().size(); ++i)
    if ((a.cells()[i] != 0) != (b.cells()[i] != 0)) ++count;
  return static_cast<double>(count) * a.grid().cell_area();
}

ErrorReport error_report(const ReportInputs& in) {
  if (!in.rho || !in.mollified || !in.mask || !in.dec) throw ContractViolation("error_report: missing input");
  const DomainMask& mask = *in.mask;
  const PlaneField& rho = in.rho->field;
  const PlaneField ind = indicator_field(mask);

  ErrorReport r;
  r.measure = measure(mask);
  r.perimeter = perimeter(mask);
  r.mstar = in.mstar;
  r.a_omega = in.rho->a_omega;
  r.l1_raw = l1_error(rho, ind);
  r.l1_normalized = r.l1_raw / r.measure;
  r.l1_mollified = l1_error(rho, *in.mollified) / r.measure;
  for (double p : in.exponents) r.lp[p] = lp_error(rho, ind, p);
  r.weak_l2_applicable = weak_l2_applicable(r.mstar, r.perimeter);
  for (double d : in.deltas) {
    if (!(d > 0.0)) throw ContractViolation("error_report: deltas must be positive");
    r.level_measures[d] = level_measure(rho, ind, d);
    r.weak_l2_constants[d] = weak_l2_constant(r.level_measures[d], d, r.mstar, r.perimeter);
  }
  r.e_omega = eigen_tail(*in.dec, r.measure);
  r.bound_mollified = mollified_error_bound(r.measure, r.perimeter, r.mstar);
  r.bound_indicator = indicator_error_bound(r.measure, r.perimeter, r.mstar);
  r.bound_tail = tail_error_bound(r.measure, r.e_omega);
  r.eqc_ratio = r.l1_normalized / std::sqrt(r.perimeter / r.measure);
  r.bound_count = eigen_count_bound(0.5, r.mstar, r.perimeter);
  r.recovery_symdiff = symmetric_difference(mask, recover_domain(rho));
  r.gap_at_cut = in.rho->gap_at_cut;
  r.basis_dependent = in.rho->basis_dependent;
  return r;
}

}  // namespace tfloc
