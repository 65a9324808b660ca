#include "support.hpp"

#include <random>

#include "tfloc/locop.hpp"

using namespace tfloc;
using tfloc::testing::kPi;
using tfloc::testing::symmetric_grid;

namespace {

struct Small {
  Window g;
  DomainMask mask;
};

Small small_problem(double dxi, ShapeDescriptor shape) {
  const SignalGrid sg = symmetric_grid(5.0, 1.0 / 8);
  const PlaneGrid pg(17, 19, 0.25, dxi, -2.0, -9 * dxi);
  return {gaussian_window(sg, 1.0), rasterize(pg, shape, {0.5, 0.5})};
}

// H f = sum over inside cells of cell_area <f, phi_z> phi_z, summed atom by atom.
std::vector<cplx> apply_brute(const Small& p, const std::vector<cplx>& f) {
  const PlaneGrid& pg = p.mask.grid();
  const double dt = p.g.grid().dt();
  std::vector<cplx> out(f.size());
  for (std::size_t j = 0; j < pg.nx(); ++j)
    for (std::size_t k = 0; k < pg.nxi(); ++k) {
      if (!p.mask.inside(j, k)) continue;
      const auto a = atom(p.g, pg.point(j, k));
      const cplx c = inner(f, a, dt) * pg.cell_area();
      for (std::size_t i = 0; i < f.size(); ++i) out[i] += c * a[i];
    }
  return out;
}

PlaneField discrete_theta(const Window& g, const PlaneGrid& pg) {
  return theta(g, PlaneGrid::centered(3.0, 3.0 + pg.dxi(), pg.dx(), pg.dxi()));
}

}  // namespace

TEST_CASE("assembled operator matches the atom sum") {
  // 1/(dxi dt) = 32 folds through a DFT; 0.3 takes the direct path.
  for (double dxi : {0.25, 0.3}) {
    const Small p = small_problem(dxi, DiskShape{{0.1, 0.0}, 1.3});
    const LocalizationOperator op = build_operator(p.g, p.mask);
    const auto n = static_cast<std::size_t>(op.matrix.rows());
    REQUIRE(n == p.g.grid().size());
    std::mt19937 rng(11);
    std::normal_distribution<double> d(0.0, 1.0);
    std::vector<cplx> f(n);
    for (auto& v : f) v = {d(rng), d(rng)};
    const auto ref = apply_brute(p, f);
    Eigen::VectorXcd fv(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) fv(static_cast<Eigen::Index>(i)) = f[i];
    const Eigen::VectorXcd hv = op.matrix * fv;
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      err = std::max(err, std::abs(hv(static_cast<Eigen::Index>(i)) - ref[i]));
      scale = std::max(scale, std::abs(ref[i]));
    }
    CHECK(err < 1e-12 * scale);
    CHECK((op.matrix - op.matrix.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("trace identities and spectral range") {
  const Small p = small_problem(0.25, StarShape{5, 0.8, 1.6, {}});
  const LocalizationOperator op = build_operator(p.g, p.mask);
  const SpectralDecomposition dec = eigendecompose(op);
  const double mes = measure(p.mask);
  CHECK(dec.complete());
  CHECK(dec.measure == doctest::Approx(mes));
  const TracePair t = trace_pair(op, discrete_theta(p.g, p.mask.grid()), &dec);
  CHECK(std::abs(t.trace1 - mes) < 1e-8 * mes);
  CHECK(std::abs(t.trace2 - t.rhs2) < 1e-8 * mes);
  const TracePair tm = trace_pair(op, discrete_theta(p.g, p.mask.grid()));
  CHECK(tm.trace2 == doctest::Approx(t.trace2).epsilon(1e-10));
  for (std::size_t k = 0; k < dec.size(); ++k) {
    CHECK(dec.eigenvalues[k] <= 1.0 + 1e-12);
    CHECK(dec.eigenvalues[k] >= -1e-12);
    if (k > 0) CHECK(dec.eigenvalues[k] <= dec.eigenvalues[k - 1]);
    CHECK(dec.residuals[k] < 1e-10);
  }
}

TEST_CASE("eigenvectors are orthonormal in the discrete inner product") {
  const Small p = small_problem(0.25, RectShape{{0.1, 0.1}, 2.0, 1.5});
  const SpectralDecomposition dec = eigendecompose(build_operator(p.g, p.mask));
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t b = 0; b < 6; ++b)
      CHECK(std::abs(inner(dec.eigenvector(a), dec.eigenvector(b), dec.dt) - (a == b ? 1.0 : 0.0)) < 1e-10);
}

TEST_CASE("leading-count decomposition") {
  const Small p = small_problem(0.25, DiskShape{{}, 1.5});
  const LocalizationOperator op = build_operator(p.g, p.mask);
  const SpectralDecomposition full = eigendecompose(op);
  const SpectralDecomposition part = eigendecompose(op, 5);
  CHECK(part.size() == 5);
  CHECK_FALSE(part.complete());
  for (std::size_t k = 0; k < 5; ++k) CHECK(part.eigenvalues[k] == doctest::Approx(full.eigenvalues[k]));
}

TEST_CASE("eigenvalues grow with the domain") {
  // Min-max: Omega inside Omega' gives lambda_k(Omega) <= lambda_k(Omega').
  const Small a = small_problem(0.25, DiskShape{{}, 1.0});
  const Small b = small_problem(0.25, DiskShape{{}, 1.5});
  const auto la = eigendecompose(build_operator(a.g, a.mask)).eigenvalues;
  const auto lb = eigendecompose(build_operator(b.g, b.mask)).eigenvalues;
  for (std::size_t k = 0; k < la.size(); ++k) CHECK(la[k] <= lb[k] + 1e-12);
}

TEST_CASE("A_Omega and counts") {
  CHECK(a_omega(0.0) == 0);
  CHECK(a_omega(9.0) == 9);
  CHECK(a_omega(9.0 + 1e-13) == 9);
  CHECK(a_omega(9.035) == 10);
  CHECK(a_omega(0.2) == 1);

  SpectralDecomposition dec;
  dec.eigenvalues = {0.99, 0.9, 0.6, 0.5, 0.2, 0.01};
  dec.dimension = 6;
  CHECK(count_above(dec, 0.5) == 3);
  CHECK(count_above(dec, 0.0) == 6);
  CHECK(count_above(dec, 1.0) == 0);
  CHECK(eigen_tail(dec, 2.5) == doctest::Approx(1.0 - (0.99 + 0.9 + 0.6) / 2.5));
}

TEST_CASE("empty domain gives the zero operator") {
  const SignalGrid sg = symmetric_grid(5.0, 1.0 / 8);
  const PlaneGrid pg = PlaneGrid::centered(2.0, 2.0, 0.25, 0.25);
  const DomainMask empty(pg, std::vector<std::uint8_t>(pg.size(), 0));
  const LocalizationOperator op = build_operator(gaussian_window(sg, 1.0), empty);
  CHECK(op.matrix.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("atoms leaving the signal grid are rejected") {
  const SignalGrid sg = symmetric_grid(3.0, 1.0 / 8);
  const PlaneGrid pg = PlaneGrid::centered(4.0, 2.0, 0.25, 0.25);
  const DomainMask m = disk(pg, {2.5, 0.0}, 1.0, {0.25, 0.25});
  CHECK_THROWS_AS(build_operator(gaussian_window(sg, 1.0), m), TruncationError);
}
