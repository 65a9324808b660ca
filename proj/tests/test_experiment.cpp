#include "support.hpp"

#include "tfloc/experiment.hpp"

using namespace tfloc;
using tfloc::testing::kPi;

namespace {

const DomainSpec kUnitDisk = DomainSpec::of(DiskShape{{}, 1.0});

}  // namespace

TEST_CASE("default margins follow the window spread") {
  const Margins g1 = default_margins(WindowSpec::gaussian(1.0));
  CHECK(g1.x == 3.0);
  CHECK(g1.xi == 3.0);
  const Margins g2 = default_margins(WindowSpec::gaussian(2.0));
  CHECK(g2.x == 6.0);
  CHECK(g2.xi == 3.0);
  const Margins h2 = default_margins(WindowSpec::hermite(2));
  CHECK(h2.x == doctest::Approx(3.0 * std::sqrt(5.0)));
  CHECK(h2.xi == doctest::Approx(3.0 * std::sqrt(5.0)));
}

TEST_CASE("planned signal dimension") {
  // [-4, 4] in steps of 1/16.
  CHECK(planned_dimension(WindowSpec::gaussian(1.0), kUnitDisk, 1.0, {}) == 129);
  // Finer signal than plane: two samples per cell.
  Resolution r;
  r.dx = r.dxi = 1.0 / 8;
  CHECK(planned_dimension(WindowSpec::gaussian(1.0), kUnitDisk, 1.0, r) == 129);
  // Coarse cells: the frequency period 1/dt must cover 33 cells of 1/4, so m = 3.
  r.dx = r.dxi = 0.25;
  r.dt_max = 1.0;
  CHECK(planned_dimension(WindowSpec::gaussian(1.0), kUnitDisk, 1.0, r) == 97);
  // Dilation grows the plane.
  CHECK(planned_dimension(WindowSpec::gaussian(1.0), kUnitDisk, 2.0, {}) == 161);
}

TEST_CASE("setup geometry") {
  const Setup s = make_setup(WindowSpec::gaussian(1.0), kUnitDisk, 1.5, {});
  const PlaneGrid& pg = s.mask.grid();
  const SignalGrid& sg = s.window.grid();
  CHECK(sg.t0() == doctest::Approx(pg.x0()));
  CHECK(pg.dx() / sg.dt() == doctest::Approx(std::round(pg.dx() / sg.dt())));
  CHECK(1.0 / sg.dt() >= static_cast<double>(pg.nxi()) * pg.dxi() - 1e-12);
  const double j0 = -pg.x0() / pg.dx(), k0 = -pg.xi0() / pg.dxi();
  CHECK(j0 == doctest::Approx(std::round(j0)));
  CHECK(k0 == doctest::Approx(std::round(k0)));
  CHECK(measure(s.mask) == doctest::Approx(kPi * 2.25).epsilon(1e-2));
  CHECK(s.mstar == doctest::Approx(0.5).epsilon(2e-3));
  CHECK(s.theta.grid().same_cells(pg));
  CHECK(integral(s.theta) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(s.diag.empty());
}

TEST_CASE("resource cap and invalid inputs") {
  Resolution r;
  r.cap = 100;
  CHECK_THROWS_AS(make_setup(WindowSpec::gaussian(1.0), kUnitDisk, 1.0, r), ResourceLimit);
  CHECK_THROWS_AS(make_setup(WindowSpec::gaussian(1.0), kUnitDisk, 0.0, {}), ContractViolation);
  CHECK_THROWS_AS(make_setup(WindowSpec::gaussian(1.0), DomainSpec{}, 1.0, {}), ContractViolation);
  Resolution bad;
  bad.dx = 0.0;
  CHECK_THROWS_AS(make_setup(WindowSpec::gaussian(1.0), kUnitDisk, 1.0, bad), ContractViolation);
}

TEST_CASE("tabulated windows are placed on the signal lattice") {
  const double dt = 1.0 / 32;
  std::vector<cplx> samples;
  for (int i = -160; i <= 160; ++i) samples.emplace_back(std::exp(-kPi * (i * dt) * (i * dt)));
  Resolution r;
  r.dt_max = dt;
  const Setup s = make_setup(WindowSpec::tabulated(samples, dt, -5.0, "table"), kUnitDisk, 1.0, r);
  CHECK_FALSE(s.window.analytic());
  CHECK(s.window.grid().dt() == doctest::Approx(dt));
  CHECK(s.mstar == doctest::Approx(0.5).epsilon(2e-3));
  const Run run_t = run(s);
  const Run run_g = run(make_setup(WindowSpec::gaussian(1.0), kUnitDisk, 1.0, r));
  for (std::size_t k = 0; k < 5; ++k) CHECK(run_t.dec.eigenvalues[k] == doctest::Approx(run_g.dec.eigenvalues[k]).epsilon(1e-9));

  CHECK_THROWS_AS(make_setup(WindowSpec::tabulated(samples, dt, -5.0 + dt / 2, "off"), kUnitDisk, 1.0, r),
                  ContractViolation);
  Resolution coarse;
  coarse.dx = coarse.dxi = 1.0 / 16;
  CHECK_THROWS_AS(make_setup(WindowSpec::tabulated(samples, 0.03, -4.8, "odd"), kUnitDisk, 1.0, coarse),
                  ContractViolation);
}

TEST_CASE("hermite windows size their own plane") {
  const Setup s = make_setup(WindowSpec::hermite(1), kUnitDisk, 1.0, {});
  CHECK(s.mask.grid().x0() <= -1.0 - 3.0 * std::sqrt(3.0) + 1e-9);
  CHECK(s.diag.empty());
  CHECK(s.mstar > 0.5);
}

TEST_CASE("dilation sweep") {
  Resolution r;
  r.cap = 180;
  const std::vector<double> factors{1.0, 1.5, 3.0};
  const std::vector<double> deltas{0.5};
  const auto rows = dilation_sweep(kUnitDisk, WindowSpec::gaussian(1.0), factors, r, deltas);
  REQUIRE(rows.size() == 3);
  CHECK_FALSE(rows[0].skipped);
  CHECK_FALSE(rows[1].skipped);
  CHECK(rows[2].skipped);
  CHECK_FALSE(rows[2].note.empty());
  CHECK(rows[2].dimension > 180);
  CHECK(rows[1].measure == doctest::Approx(2.25 * rows[0].measure).epsilon(2e-2));
  CHECK(rows[1].perimeter == doctest::Approx(1.5 * rows[0].perimeter));
  CHECK(rows[1].l1_rescaled < rows[0].l1_rescaled);
  CHECK(rows[1].l1_rescaled == doctest::Approx(rows[1].l1_normalized * rows[1].measure / 2.25));
  CHECK(rows[0].weak_l2_constants.count(0.5) == 1);
  CHECK(rows[0].a_omega == a_omega(rows[0].measure));
}

TEST_CASE("raster domains dilate like their shapes") {
  const PlaneGrid own = PlaneGrid::centered(2.0, 2.0, 1.0 / 16, 1.0 / 16);
  const DomainSpec raster = DomainSpec::of(disk(own, {}, 1.0, {0.5, 0.5}).raster_only());
  const BoundingBox bb = raster.bounds(2.0);
  CHECK(bb.x_max == doctest::Approx(2.0 + 1.0 / 16).epsilon(1e-2));
  const Setup a = make_setup(WindowSpec::gaussian(1.0), raster, 1.5, {});
  const Setup b = make_setup(WindowSpec::gaussian(1.0), kUnitDisk, 1.5, {});
  CHECK_FALSE(a.mask.has_shape());
  CHECK(measure(a.mask) == doctest::Approx(measure(b.mask)).epsilon(2e-2));
}
