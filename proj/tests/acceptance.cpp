// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "tfloc/accspec.hpp"
#include "tfloc/bounds.hpp"
#include "tfloc/experiment.hpp"
#include "tfloc/ginibre.hpp"

using namespace tfloc;

namespace {

constexpr double kPi = std::numbers::pi;

Resolution reference() { return Resolution{}; }

Resolution halved() {
  Resolution r;
  r.dx = r.dxi = r.dt_max = 1.0 / 32;
  return r;
}

Resolution shared_margins() {
  Resolution r;
  r.margins = Margins{6.0, 3.0};
  return r;
}

const StarShape kStarBase = StarShape::with_area(5, 23.0 / 4.0, 0.6);  // R = 2 gives area 23

Run make_run(double width, const ShapeDescriptor& shape, double factor, const Resolution& res) {
  return run(make_setup(WindowSpec::gaussian(width), DomainSpec::of(shape), factor, res));
}

double headroom(const Run& r) { return std::max(0.0, r.dec.eigenvalues.front() - 1.0); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct Shape {
  const char* name;
  ShapeDescriptor base;
};

const std::vector<Shape>& shipped_shapes() {
  static const std::vector<Shape> s{{"disk", DiskShape{{}, std::sqrt(23.0 / 4.0 / kPi)}},
                                    {"square", RectShape{{}, std::sqrt(23.0 / 4.0), std::sqrt(23.0 / 4.0)}},
                                    {"star", kStarBase}};
  return s;
}

// Runs shared between criteria, built on first use.
struct Cache {
  std::map<std::string, Run> runs;

  const Run& get(const std::string& key, const std::function<Run()>& make) {
    auto it = runs.find(key);
    if (it == runs.end()) it = runs.emplace(key, make()).first;
    return it->second;
  }

  const Run& disk9() {
    return get("disk9", [] { return make_run(1.0, DiskShape{{}, disk_radius_for_area(9.0)}, 1.0, reference()); });
  }
  const Run& star23() { return get("star23", [] { return make_run(1.0, kStarBase, 2.0, reference()); }); }
  const Run& sweep(std::size_t shape, double width, double factor) {
    std::ostringstream k;
    k << "sweep/" << shape << "/" << width << "/" << factor;
    return get(k.str(), [&] { return make_run(width, shipped_shapes()[shape].base, factor, reference()); });
  }
};

Outcome ginibre_eigenvalues(Cache& c) {
  const Run& r = c.disk9();
  const double radius = disk_radius_for_area(9.0);
  double err = 0.0;
  std::size_t worst = 0;
  for (std::size_t k = 1; k <= 18; ++k) {
    const double e = std::abs(r.dec.eigenvalues[k - 1] - oracle_eigenvalue(k, radius));
    if (e > err) {
      err = e;
      worst = k;
    }
  }
  double overlap = 1.0;
  const SignalGrid& g = r.setup.window.grid();
  for (unsigned k = 0; k < 6; ++k)
    overlap = std::min(overlap, std::abs(inner(r.dec.eigenvector(k), hermite_window(g, k).samples(), g.dt())));
  return {err < 1e-2 && overlap >= 0.99, "max |lambda_k - P(k,9)| = " + fmt(err) + " (k=" + std::to_string(worst) +
                                             "), min Hermite overlap k<=6 = " + fmt(overlap)};
}

Outcome trace_identities(Cache& c) {
  double d1 = 0.0, d2 = 0.0;
  bool pass = true;
  const std::vector<const Run*> runs{&c.disk9(),
                                     &c.get("square9", [] { return make_run(1.0, RectShape{{}, 3.0, 3.0}, 1.0, reference()); }),
                                     &c.star23()};
  for (const Run* r : runs) {
    const double mes = measure(r->setup.mask);
    const TracePair t = trace_pair(r->op, r->setup.theta, &r->dec);
    const double e1 = std::abs(t.trace1 - mes), e2 = std::abs(t.trace2 - t.rhs2);
    pass = pass && e1 <= 1e-8 && e2 <= 1e-8 * mes;
    d1 = std::max(d1, e1);
    d2 = std::max(d2, e2 / mes);
  }
  return {pass, "disk, square, star: max |sum lambda - |Omega|| = " + fmt(d1) +
                    ", max |sum lambda^2 - rhs| / |Omega| = " + fmt(d2)};
}

Outcome weighted_identity(Cache& c) {
  const Run& r = c.star23();
  const WeightedSpectrogram ws = weighted_sum(r.dec, r.setup.window, r.setup.mask.grid());
  double sup = 0.0;
  for (std::size_t i = 0; i < ws.field.size(); ++i) sup = std::max(sup, std::abs(ws.field[i] - r.mollified[i]));
  return {sup <= 1e-6, "star area 23: sup |sum lambda_k |V h_k|^2 - 1_Omega * Theta| = " + fmt(sup)};
}

Outcome spectral_range(Cache& c) {
  // Headroom below this floor is eigensolver roundoff and cannot be halved further.
  constexpr double floor = 1e-12;
  bool pass = true;
  std::ostringstream d;
  const std::vector<std::pair<const Run*, const Run*>> pairs{
      {&c.disk9(), &c.get("disk9/fine",
                          [] { return make_run(1.0, DiskShape{{}, disk_radius_for_area(9.0)}, 1.0, halved()); })},
      {&c.star23(), &c.get("star23/fine", [] { return make_run(1.0, kStarBase, 2.0, halved()); })}};
  const char* names[] = {"disk", "star"};
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const Run& coarse = *pairs[i].first;
    const Run& fine = *pairs[i].second;
    for (const Run* r : {&coarse, &fine})
      pass = pass && r->dec.eigenvalues.back() >= -1e-10 && r->dec.eigenvalues.front() <= 1.0 + 1e-3;
    const double h0 = headroom(coarse), h1 = headroom(fine);
    pass = pass && h1 <= std::max(h0 / 2.0, floor);
    d << names[i] << ": range [" << fmt(std::min(coarse.dec.eigenvalues.back(), fine.dec.eigenvalues.back())) << ", 1+"
      << fmt(std::max(h0, h1)) << "], headroom " << fmt(h0) << " -> " << fmt(h1) << " at half cells; ";
  }
  return {pass, d.str() + "roundoff floor " + fmt(floor)};
}

Outcome rho_bounds(Cache& c) {
  bool pass = true;
  double lo = 0.0, hi = 0.0, mass = 0.0;
  for (const Run* r : {&c.disk9(), &c.star23()}) {
    const double mn = min_value(r->rho.field), mx = max_value(r->rho.field);
    const double dm = std::abs(integral(r->rho.field) - static_cast<double>(r->rho.a_omega));
    pass = pass && mn >= 0.0 && mx <= 1.0 + 1e-6 && dm <= 1e-2;
    lo = std::min(lo, mn);
    hi = std::max(hi, mx);
    mass = std::max(mass, dm);
  }
  return {pass, "disk, star: rho in [" + fmt(lo) + ", " + fmt(hi) + "], max |int rho - A_Omega| = " + fmt(mass)};
}

std::vector<SweepRow> star_sweep() {
  const std::vector<double> factors{1.0, 2.0, 3.0};
  const std::vector<double> deltas{0.1, 0.2, 0.5};
  return dilation_sweep(DomainSpec::of(kStarBase), WindowSpec::gaussian(1.0), factors, reference(), deltas);
}

Outcome dilation_limit(const std::vector<SweepRow>& rows) {
  bool pass = true;
  std::string d = "star R=1,2,3: rescaled L1 =";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    pass = pass && !rows[i].skipped;
    if (i) pass = pass && rows[i].l1_rescaled < rows[i - 1].l1_rescaled;
    d += " " + fmt(rows[i].l1_rescaled);
  }
  const double ratio = rows.back().l1_rescaled / rows.front().l1_rescaled;
  pass = pass && ratio < 0.6;
  return {pass, d + ", final/initial = " + fmt(ratio)};
}

Outcome error_inequalities(Cache& c) {
  bool pass = true;
  double worst13 = 0.0, worst51 = 0.0;
  for (std::size_t s = 0; s < shipped_shapes().size(); ++s)
    for (double w : {1.0, 2.0})
      for (double f : {1.0, 2.0}) {
        const ErrorReport e = report(c.sweep(s, w, f), {});
        const double r13 = e.l1_mollified / e.bound_mollified;
        const double r51 = e.l1_normalized / e.bound_indicator;
        pass = pass && r13 <= 1.05 && r51 <= 1.05;
        worst13 = std::max(worst13, r13);
        worst51 = std::max(worst51, r51);
      }
  return {pass, "12 runs: max lhs/rhs = " + fmt(worst13) + " (mollified), " + fmt(worst51) + " (indicator)"};
}

Outcome count_inequality(Cache& c) {
  bool pass = true;
  double worst = 0.0;
  for (std::size_t s = 0; s < shipped_shapes().size(); ++s)
    for (double w : {1.0, 2.0})
      for (double f : {1.0, 2.0}) {
        const Run& r = c.sweep(s, w, f);
        const double mes = measure(r.setup.mask), per = perimeter(r.setup.mask);
        for (double d : {0.1, 0.25, 0.5}) {
          const double lhs = std::abs(static_cast<double>(count_above(r.dec, 1.0 - d)) - mes);
          const double rhs = eigen_count_bound(d, r.setup.mstar, per) + 1.0;
          pass = pass && lhs <= rhs;
          worst = std::max(worst, lhs / rhs);
        }
      }
  return {pass, "12 runs x 3 deltas: max lhs/rhs = " + fmt(worst)};
}

Outcome weak_l2(const std::vector<SweepRow>& rows) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  bool pass = true;
  for (const SweepRow& r : rows)
    for (const auto& [d, v] : r.weak_l2_constants) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  pass = lo > 0.0 && hi / lo < 4.0 && hi <= 10.0;
  return {pass, "star, 3 deltas x R=1,2,3: constants in [" + fmt(lo) + ", " + fmt(hi) + "], spread " + fmt(hi / lo)};
}

Outcome recovery(Cache& c) {
  bool pass = true;
  double worst = 0.0;
  for (std::size_t s = 0; s < shipped_shapes().size(); ++s)
    for (double f : {1.0, 2.0}) {
      const ErrorReport e = report(c.sweep(s, 1.0, f), {});
      const double ratio = e.recovery_symdiff / (e.mstar * e.perimeter);
      pass = pass && ratio <= 5.0;
      worst = std::max(worst, ratio);
    }
  std::string d = "max symdiff/(mstar P) = " + fmt(worst) + "; disk symdiff/|Omega| at area 4, 9, 16 =";
  double prev = std::numeric_limits<double>::infinity();
  for (double area : {4.0, 9.0, 16.0}) {
    const Run& r = area == 9.0 ? c.disk9()
                               : c.get("disk" + fmt(area), [area] {
                                   return make_run(1.0, DiskShape{{}, disk_radius_for_area(area)}, 1.0, reference());
                                 });
    const double v = symmetric_difference(r.setup.mask, recover_domain(r.rho)) / measure(r.setup.mask);
    pass = pass && v < prev;
    prev = v;
    d += " " + fmt(v);
  }
  return {pass, d};
}

Outcome mstar_gaussian(Cache& c) {
  const double m = c.disk9().setup.mstar;
  return {std::abs(m - 0.5) <= 1e-3, "width 1: mstar = " + fmt(m)};
}

Outcome star_plateau(Cache& c) {
  const Run& r = c.star23();
  const auto& l = r.dec.eigenvalues;
  const std::size_t n = count_above(r.dec, 0.5);
  bool monotone = true;
  for (std::size_t k = 1; k < l.size(); ++k) monotone = monotone && l[k] <= l[k - 1];
  const double plateau = l[14];
  return {n >= 20.7 && n <= 25.3 && monotone && plateau >= 0.9,
          "star area 23: count_above(0.5) = " + std::to_string(n) + ", lambda_15 = " + fmt(plateau) +
              (monotone ? ", nonincreasing" : ", NOT monotone")};
}

Outcome universality(Cache& c) {
  const Run& a = c.get("star/w1/R3", [] { return make_run(1.0, kStarBase, 3.0, shared_margins()); });
  const Run& b = c.get("star/w2/R3", [] { return make_run(2.0, kStarBase, 3.0, shared_margins()); });
  const double diff = l1_error(a.rho.field, b.rho.field) / measure(a.setup.mask);
  const double e1 = report(c.sweep(2, 1.0, 1.0), {}).l1_normalized;
  const double e2 = report(c.sweep(2, 2.0, 1.0), {}).l1_normalized;
  return {diff < std::min(e1, e2), "||rho_w1 - rho_w2||_1/|Omega| at R=3 = " + fmt(diff) +
                                       "; R=1 normalized errors " + fmt(e1) + " (w=1), " + fmt(e2) + " (w=2)"};
}

}  // namespace

int main() {
  Cache cache;
  std::vector<SweepRow> sweep;
  const auto sweep_rows = [&]() -> const std::vector<SweepRow>& {
    if (sweep.empty()) sweep = star_sweep();
    return sweep;
  };

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Ginibre eigenvalues", [&] { return ginibre_eigenvalues(cache); }},
      {"Trace identities", [&] { return trace_identities(cache); }},
      {"Weighted spectrogram identity", [&] { return weighted_identity(cache); }},
      {"Spectral range", [&] { return spectral_range(cache); }},
      {"Accumulated spectrogram bounds", [&] { return rho_bounds(cache); }},
      {"Dilation convergence", [&] { return dilation_limit(sweep_rows()); }},
      {"L1 error inequalities", [&] { return error_inequalities(cache); }},
      {"Eigenvalue count inequality", [&] { return count_inequality(cache); }},
      {"Weak-L2 constant stability", [&] { return weak_l2(sweep_rows()); }},
      {"Domain recovery", [&] { return recovery(cache); }},
      {"M* norm", [&] { return mstar_gaussian(cache); }},
      {"Area-23 star spectrum", [&] { return star_plateau(cache); }},
      {"Window universality", [&] { return universality(cache); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2zu %-32s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
