#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "sbm/dynamics.hpp"
#include "sbm/mapper.hpp"

using namespace sbm;

namespace {

// underdamped moderate-coupling reference point
const BathParameters kRef{1.0, 0.25, 0.5, 2.0, 1.0, 1.0};
// slow oscillator, strong coupling: the adiabatic corner
const BathParameters kAdiabatic{0.1, 1.0, 10.0, 1.0, 1.0, 1.0};
// uncoupled system, P(t) = cos(vt)
const BathParameters kFree{1.0, 0.25, 0.0, 2.0, 1.0, 1.0};

PopulationTrace solve(CorrelationModel::Variant v, const BathParameters& p,
                      double t_f, double h) {
  KernelSpec k;
  k.model.variant = v;
  k.v = p.v;
  return dynamics::solve_volterra(k, p, t_f, h);
}

bool has_flag(const ValidityCell& cell, const std::string& needle) {
  for (const auto& f : cell.flags)
    if (f.find(needle) != std::string::npos) return true;
  return false;
}

bool same_eps(const std::optional<double>& a, const std::optional<double>& b) {
  if (a.has_value() != b.has_value()) return false;
  return !a.has_value() || *a == *b;
}

bool cells_equal(const ValidityCell& a, const ValidityCell& b) {
  return a.gamma == b.gamma && a.kappa == b.kappa && a.beta == b.beta &&
         a.label == b.label && a.t_f == b.t_f && a.flags == b.flags &&
         same_eps(a.eps.markov, b.eps.markov) && same_eps(a.eps.st, b.eps.st) &&
         same_eps(a.eps.f3b, b.eps.f3b) && same_eps(a.eps.f3, b.eps.f3);
}

}  // namespace

TEST_CASE("final time selection") {
  // an uncoupled cosine never settles, so the ladder saturates
  const TfChoice undamped = mapper::choose_tf(kFree);
  CHECK(undamped.saturated);
  CHECK(undamped.t_f == 1280.0);

  // the adiabatic strong-coupling corner flattens within the first window
  const TfChoice corner = mapper::choose_tf(kAdiabatic);
  CHECK(!corner.saturated);
  CHECK(corner.t_f == 20.0);

  // a weaker settledness demand can only accept an earlier rung
  const TfChoice strict = mapper::choose_tf(kRef, 0.01);
  const TfChoice loose = mapper::choose_tf(kRef, 0.02);
  CHECK(!strict.saturated);
  CHECK(loose.t_f <= strict.t_f);

  CHECK_THROWS_AS(mapper::choose_tf(kRef, 0.0), DomainError);
  CHECK_THROWS_AS(mapper::choose_tf(kRef, -0.5), DomainError);
}

TEST_CASE("relative error by uniform resampling") {
  const PopulationTrace full =
      solve(CorrelationModel::Variant::Full, kRef, 5.0, 0.01);

  CHECK(mapper::relative_error(full, full) == 0.0);

  PopulationTrace scaled = full;
  for (auto& v : scaled.values) v *= 1.01;
  CHECK(std::abs(mapper::relative_error(scaled, full) - 0.01) < 1e-12);

  // a trace solved at another step still covers the same interval
  const PopulationTrace coarse =
      solve(CorrelationModel::Variant::Full, kRef, 5.0, 0.02);
  CHECK(mapper::relative_error(coarse, full) < 1e-3);

  const PopulationTrace longer =
      solve(CorrelationModel::Variant::Full, kRef, 6.0, 0.01);
  CHECK_THROWS_AS(mapper::relative_error(longer, full), MismatchError);

  PopulationTrace stub;
  stub.times = {0.0};
  stub.values = {1.0};
  CHECK_THROWS_AS(mapper::relative_error(stub, full), MismatchError);
  CHECK_THROWS_AS(mapper::relative_error(full, full, 1), DomainError);

  // zero against zero reads as no deviation, not as 0/0
  PopulationTrace za = full, zb = full;
  for (auto& v : za.values) v = 0.0;
  for (auto& v : zb.values) v = 0.0;
  CHECK(mapper::relative_error(za, zb) == 0.0);
}

TEST_CASE("cold windows separate the pole-only kernel from the reference") {
  BathParameters cold = kRef;
  cold.beta = 100.0;
  const double h = dynamics::default_step(cold, 20.0);
  const PopulationTrace full =
      solve(CorrelationModel::Variant::Full, cold, 20.0, h);
  const PopulationTrace f3 = solve(CorrelationModel::Variant::F3, cold, 20.0, h);

  const double e1000 = mapper::relative_error(f3, full, 1000);
  CHECK(e1000 > 0.01);

  // the reading is stable under resampling refinement
  const double e2000 = mapper::relative_error(f3, full, 2000);
  CHECK(std::abs(e2000 - e1000) < 0.05 * e1000);
}

TEST_CASE("cell classification") {
  SweepGrid grid;
  grid.w0 = 1.0;
  grid.gamma_axis = {0.25};
  grid.kappa_axis = {0.5};
  grid.beta_axis = {2.0};

  SUBCASE("uncoupled cell short-circuits to the quadratic model") {
    const ValidityCell cell = mapper::classify_cell(kFree, grid);
    CHECK(cell.label == "ShortTime");
    REQUIRE(cell.eps.st.has_value());
    CHECK(*cell.eps.st == 0.0);
    CHECK(*cell.eps.f3b == 0.0);
    CHECK(*cell.eps.f3 == 0.0);
    CHECK(!cell.eps.markov.has_value());
    CHECK(cell.t_f == 1280.0);
    CHECK(has_flag(cell, "saturated"));
  }

  SUBCASE("adiabatic strong-coupling cell accepts an early model") {
    const ValidityCell cell = mapper::classify_cell(kAdiabatic, grid);
    const bool early = cell.label == "Markov" || cell.label == "ShortTime";
    CHECK(early);
    CHECK(cell.t_f == 20.0);
  }

  SUBCASE("weak-coupling cell needs a pole kernel") {
    BathParameters weak = kRef;
    weak.kappa = 0.05;
    const ValidityCell cell = mapper::classify_cell(weak, grid);
    const bool pole = cell.label == "F3b" || cell.label == "F3";
    CHECK(pole);
    // the quadratic kernel freezes long before the trace does
    REQUIRE(cell.eps.st.has_value());
    CHECK(*cell.eps.st >= grid.eps_fine);
  }

  SUBCASE("near-critical width reroutes the reference") {
    BathParameters near = kRef;
    near.gamma = 1.0 + 1e-8;
    const ValidityCell cell = mapper::classify_cell(near, grid);
    CHECK(has_flag(cell, "near-critical"));
    CHECK(!cell.label.empty());
  }

  SUBCASE("critical width cannot be classified directly") {
    BathParameters crit = kRef;
    crit.gamma = 1.0;
    CHECK_THROWS_AS(mapper::classify_cell(crit, grid), DomainError);
  }

  SUBCASE("degenerate tolerance configuration is rejected") {
    SweepGrid bad = grid;
    bad.eps_fine = bad.eps_coarse;
    CHECK_THROWS_AS(mapper::classify_cell(kRef, bad), DomainError);
  }
}

TEST_CASE("sweep drivers") {
  SweepGrid grid;
  grid.w0 = 1.0;
  grid.gamma_axis = {0.8, 2.0};
  grid.kappa_axis = {1.5, 2.5};
  grid.beta_axis = {0.8, 1.2};

  SUBCASE("parallel, serial and repeated sweeps agree cell by cell") {
    std::size_t events = 0;
    std::size_t last_total = 0;
    const ValidityMap par =
        mapper::sweep(grid, [&](std::size_t, std::size_t total) {
          ++events;
          last_total = total;
        });
    const ValidityMap ser = mapper::sweep_serial(grid);
    const ValidityMap again = mapper::sweep(grid);
    REQUIRE(par.cells.size() == 8);
    REQUIRE(ser.cells.size() == 8);
    CHECK(events == 8);
    CHECK(last_total == 8);
    for (std::size_t i = 0; i < par.cells.size(); ++i) {
      CHECK(cells_equal(par.cells[i], ser.cells[i]));
      CHECK(cells_equal(par.cells[i], again.cells[i]));
    }
  }

  SUBCASE("single-cell sweep equals direct classification") {
    SweepGrid g1;
    g1.w0 = 1.0;
    g1.gamma_axis = {2.0};
    g1.kappa_axis = {2.0};
    g1.beta_axis = {1.0};
    const ValidityMap m = mapper::sweep_serial(g1);
    REQUIRE(m.cells.size() == 1);
    BathParameters p;
    p.w0 = 1.0;
    p.gamma = 2.0;
    p.kappa = 2.0;
    p.beta = 1.0;
    CHECK(cells_equal(m.cells[0], mapper::classify_cell(p, g1)));
    CHECK(m.cells[0].gamma == 2.0);
    CHECK(m.cells[0].kappa == 2.0);
    CHECK(m.cells[0].beta == 1.0);
  }

  SUBCASE("a failing cell is recorded, not fatal") {
    SweepGrid bad;
    bad.w0 = 1.0;
    bad.gamma_axis = {1.0};  // exactly at the critical width
    bad.kappa_axis = {0.5};
    bad.beta_axis = {2.0};
    const ValidityMap m = mapper::sweep_serial(bad);
    REQUIRE(m.cells.size() == 1);
    CHECK(m.cells[0].label == "FullRequired");
    REQUIRE(!m.cells[0].flags.empty());
    CHECK(m.cells[0].flags[0].rfind("error:", 0) == 0);
  }

  SUBCASE("grid validation") {
    SweepGrid g = grid;
    g.gamma_axis.clear();
    CHECK_THROWS_AS(mapper::sweep_serial(g), DomainError);
    g = grid;
    g.kappa_axis = {1.0, 1.0};
    CHECK_THROWS_AS(mapper::sweep_serial(g), DomainError);
    g = grid;
    g.beta_axis = {-1.0, 2.0};
    CHECK_THROWS_AS(mapper::sweep_serial(g), DomainError);
    g = grid;
    g.eps_coarse = 0.005;
    CHECK_THROWS_AS(mapper::sweep_serial(g), DomainError);
    g = grid;
    g.samples = 1;
    CHECK_THROWS_AS(mapper::sweep_serial(g), DomainError);
  }
}

TEST_CASE("quadratic-kernel error shrinks as coupling grows") {
  SweepGrid grid;
  grid.w0 = 0.1;
  grid.gamma_axis = {1.0};
  grid.kappa_axis = {0.1};
  grid.beta_axis = {1.0};
  double prev = std::numeric_limits<double>::infinity();
  for (double kappa : {0.1, 1.0, 10.0}) {
    BathParameters p;
    p.w0 = 0.1;
    p.gamma = 1.0;
    p.kappa = kappa;
    p.beta = 1.0;
    const ValidityCell cell = mapper::classify_cell(p, grid);
    REQUIRE(cell.eps.st.has_value());
    CHECK(*cell.eps.st <= prev * 1.05 + 1e-12);
    prev = *cell.eps.st;
  }
}
