#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "idep/error.hpp"
#include "idep/field_solver.hpp"
#include "test_support.hpp"

using namespace idep;
using idep::testing::tip_fields;
using idep::testing::tip_spec;
using idep::testing::rel_diff;
using idep::testing::um;

namespace
{
DeviceSpec box(double lx, double ly, double lz, double volts)
{
  DeviceSpec s;
  s.channel_length   = lx;
  s.channel_width    = ly;
  s.domain_height    = lz;
  s.insulator_height = lz;
  s.electrode_mode   = AppliedVoltage{volts};
  return s;
}

MaterialGrid all_medium(const Grid3 &g)
{
  return MaterialGrid(g, std::vector<Material>(g.size(), Material::medium), {1.0, 78.0},
                      {1e-6, 3.0});
}

template <typename F>
ScalarField3 sample(const Grid3 &g, F f)
{
  ScalarField3 s(g, ScalarQuantity::generic);
  for (std::size_t c = 0; c < g.size(); ++c)
    s.values[c] = f(g.center(g.unravel(c)));
  return s;
}
} // namespace

TEST_SUITE("field_solver")
{
  TEST_CASE("uniform box gives the linear potential")
  {
    const double V    = 3.0;
    const auto   spec = box(100 * um, 20 * um, 20 * um, V);
    const Grid3  g(50, 10, 10, {2 * um, 2 * um, 2 * um});
    SolveConfig  cfg;
    cfg.rel_tolerance = 1e-11;
    const auto sol    = solve_potential(all_medium(g), spec, cfg);
    double     worst  = 0.0;
    for (std::size_t c = 0; c < g.size(); ++c)
      {
        const double x = g.center(g.unravel(c)).x;
        worst          = std::max(worst, std::abs(sol.potential.values[c] - V * x / (100 * um)));
      }
    CHECK(worst < 1e-9 * V);
  }

  TEST_CASE("two-layer series conductor splits the voltage by 1/sigma")
  {
    // left half sigma, right half sigma/2: the left layer takes V/3
    const double V = 1.0, L = 100 * um;
    const auto   spec = box(L, 10 * um, 10 * um, V);
    const Grid3  g(100, 10, 10, {1 * um, 1 * um, 1 * um});
    std::vector<Material> labels(g.size(), Material::medium);
    for (std::size_t c = 0; c < g.size(); ++c)
      if (g.unravel(c).i >= 50)
        labels[c] = Material::insulator;
    const MaterialGrid mg(g, labels, {2e-3, 78}, {1e-3, 78});
    SolveConfig        cfg;
    cfg.conductivity_ratio = 0.5;
    cfg.rel_tolerance      = 1e-10;
    const auto fields      = solve_fields(mg, spec, cfg);
    const auto &phi        = fields.potential.potential;

    // extrapolate the left layer's linear profile half a cell to x = L/2
    const double interface = phi(49, 5, 5) + 0.5 * (phi(49, 5, 5) - phi(48, 5, 5));
    CHECK(std::abs(interface - V / 3.0) / (V / 3.0) < 5e-3);
    const double e1 = fields.e_field(25, 5, 5).x;
    const double e2 = fields.e_field(75, 5, 5).x;
    CHECK(std::abs(e1 / e2 - 0.5) / 0.5 < 5e-3);
    CHECK(std::abs(e2 - (-2.0 * V / 3.0) / (L / 2)) < 5e-3 * std::abs(e2));
  }

  TEST_CASE("gradient of a linear field is exact; of a constant is zero")
  {
    const Grid3 g(8, 7, 6, {1 * um, 2 * um, 3 * um});
    const auto  lin = sample(g, [](const Vec3 &p) { return 4.0 * p.x / um; });
    const auto  e   = electric_field(lin);
    for (const auto &v : e.values)
      {
        CHECK(rel_diff(v.x, -4.0 / um) < 1e-9);
        CHECK(std::abs(v.y) < 1e-9 * 4.0 / um);
        CHECK(std::abs(v.z) < 1e-9 * 4.0 / um);
      }
    const auto flat = electric_field(sample(g, [](const Vec3 &) { return 2.5; }));
    CHECK(std::all_of(flat.values.begin(), flat.values.end(),
                      [](const Vec3 &v) { return v == Vec3{}; }));

    const auto uniform_e = e_squared(e);
    const auto grad      = grad_e_squared(uniform_e);
    for (const auto &v : grad.values)
      CHECK(norm(v) < 1e-9 * uniform_e.values[0] / um);
  }

  TEST_CASE("ln(r) potential: E = -r_hat / r away from the axis")
  {
    // axis along z through the origin; box from 20 to 120 um in x and y
    const double h = 2 * um;
    const Grid3  g(50, 50, 4, {h, h, h}, {20 * um, 20 * um, 0.0});
    const auto   phi = sample(g, [](const Vec3 &p) { return std::log(std::hypot(p.x, p.y)); });
    const auto   e   = electric_field(phi);
    double       worst = 0.0;
    for (std::size_t c = 0; c < g.size(); ++c)
      {
        const Vec3   p = g.center(g.unravel(c));
        const double r = std::hypot(p.x, p.y);
        const Vec3   exact{-p.x / (r * r), -p.y / (r * r), 0.0};
        worst = std::max(worst, norm(e.values[c] - exact) / norm(exact));
      }
    CHECK(worst < 0.02);
  }

  TEST_CASE("coaxial field: |grad E^2| = 2 / r^3")
  {
    const double h = 2 * um;
    const Grid3  g(50, 50, 4, {h, h, h}, {20 * um, 20 * um, 0.0});
    // E = r_hat / r, so E^2 = 1 / r^2
    const auto e2 = sample(g, [](const Vec3 &p) { return 1.0 / (p.x * p.x + p.y * p.y); });
    const auto gr = grad_e_squared(e2);
    double     worst = 0.0;
    for (std::size_t c = 0; c < g.size(); ++c)
      {
        const Vec3   p = g.center(g.unravel(c));
        const double r = std::hypot(p.x, p.y);
        worst = std::max(worst, rel_diff(norm(gr.values[c]), 2.0 / (r * r * r)));
      }
    CHECK(worst < 0.05);
  }

  TEST_CASE("single tip pair: symmetry, maximum principle, current conservation")
  {
    const auto spec = tip_spec();
    const auto mg   = rasterize(spec, 5 * um);
    SolveConfig cfg;
    const ConductionSystem sys(mg, spec.electrode_voltage(), cfg.conductivity_ratio);
    const auto &g    = mg.grid();
    std::vector<double> guess(g.size());
    for (std::size_t c = 0; c < g.size(); ++c)
      guess[c] = spec.electrode_voltage() * g.center(g.unravel(c)).x / spec.channel_length;
    const auto  sol = solve_potential(sys, cfg, guess);
    const auto &phi = sol.potential;
    const double V  = spec.electrode_voltage();
    CHECK(sol.stats.relative_residual <= cfg.rel_tolerance);
    CHECK(sys.relative_residual(phi.values) <= cfg.rel_tolerance * 1.0001);

    SUBCASE("y-mirror symmetry")
    {
      double worst = 0.0;
      for (std::size_t k = 0; k < g.nz(); ++k)
        for (std::size_t j = 0; j < g.ny(); ++j)
          for (std::size_t i = 0; i < g.nx(); ++i)
            worst = std::max(worst, std::abs(phi(i, j, k) - phi(i, g.ny() - 1 - j, k)));
      CHECK(worst <= 10 * cfg.rel_tolerance * V);
    }

    SUBCASE("extrema lie between the electrode potentials")
    {
      const auto [lo, hi] = std::minmax_element(phi.values.begin(), phi.values.end());
      CHECK(*lo >= 0.0);
      CHECK(*hi <= V);
      // attained next to the electrode faces
      CHECK(g.unravel(std::size_t(lo - phi.values.begin())).i == 0);
      CHECK(g.unravel(std::size_t(hi - phi.values.begin())).i == g.nx() - 1);
    }

    SUBCASE("the same current crosses every x plane")
    {
      // current flows from the high electrode at x = L towards x = 0
      const double total = sys.current_through_plane(phi.values, -1);
      CHECK(total < 0.0);
      double worst = 0.0;
      for (long i = 0; i < long(g.nx()); ++i)
        worst = std::max(worst, std::abs(sys.current_through_plane(phi.values, i) - total));
      CHECK(worst <= cfg.rel_tolerance * std::abs(total));
      CHECK(sol.stats.current_imbalance <= cfg.rel_tolerance);
      CHECK(rel_diff(sol.stats.electrode_current, total) < 1e-12);
    }
  }

  TEST_CASE("max |E| in the liquid sits beside the apices, inside the insulator layer")
  {
    const auto  spec = tip_spec();
    const auto &fs   = tip_fields(5.0);
    const auto &g    = fs.e2.grid;
    const auto  mg   = rasterize(spec, 5 * um);
    std::size_t best = 0;
    for (std::size_t c = 0; c < g.size(); ++c)
      if (mg.labels()[c] == Material::medium && fs.e2.values[c] > fs.e2.values[best])
        best = c;
    const Vec3   p = g.center(g.unravel(best));
    const double h = g.h(1);
    CHECK(p.z < 60 * um);
    // on the staircased flank just behind the apex
    CHECK(tip_proximity(spec, spec.tip_pairs[0], p).distance < h);
    const auto seg  = apex_segments(spec, 0);
    const double d  = std::min(distance_to_segment(seg[0], p), distance_to_segment(seg[1], p));
    CHECK(d < 4 * h);
  }

  TEST_CASE("centreline |grad E^2| peaks at the gap and decays away from it")
  {
    const auto &fs   = tip_fields(5.0);
    const auto  prof = line_profile(fs.grad_e2, Line{{0, 150 * um, 0}, {600 * um, 150 * um, 0}, 601});
    const auto  best = std::max_element(prof.begin(), prof.end(), [](auto &a, auto &b) {
      return a.value < b.value;
    });
    CHECK(std::abs(best->arc_length - 300 * um) < 40 * um);
    CHECK(prof[100].value < 0.1 * best->value);
    CHECK(prof[500].value < 0.1 * best->value);
  }

  TEST_CASE("doubling the voltage doubles phi and E and quadruples E^2 and grad E^2")
  {
    auto s1 = tip_spec();
    auto s2 = tip_spec();
    s2.electrode_mode = AppliedField{6e4};
    const auto mg = rasterize(s1, 6 * um);
    const auto a  = solve_fields(mg, s1, SolveConfig{});
    const auto b  = solve_fields(mg, s2, SolveConfig{});
    double     worst = 0.0;
    for (std::size_t c = 0; c < a.e2.values.size(); ++c)
      {
        worst = std::max(worst, rel_diff(b.potential.potential.values[c],
                                          2 * a.potential.potential.values[c]));
        worst = std::max(worst, norm(b.e_field.values[c] - 2.0 * a.e_field.values[c]) /
                                  std::max(norm(b.e_field.values[c]), 1e-300));
        worst = std::max(worst, rel_diff(b.e2.values[c], 4 * a.e2.values[c]));
        worst = std::max(worst, norm(b.grad_e2.values[c] - 4.0 * a.grad_e2.values[c]) /
                                  std::max(norm(b.grad_e2.values[c]), 1e-300));
      }
    CHECK(worst < 1e-9);
  }

  TEST_CASE("results do not depend on the thread count")
  {
    const auto  spec = tip_spec();
    const auto  mg   = rasterize(spec, 6 * um);
    SolveConfig one, four;
    four.threads = 4;
    const auto a = solve_fields(mg, spec, one);
    const auto b = solve_fields(mg, spec, four);
    CHECK(a.potential.stats.iterations == b.potential.stats.iterations);
    CHECK(a.potential.potential.values == b.potential.potential.values);
    CHECK(a.e2.values == b.e2.values);
  }

  TEST_CASE("zero voltage returns a zero potential")
  {
    auto spec           = tip_spec();
    spec.electrode_mode = AppliedVoltage{0.0};
    const auto sol      = solve_potential(rasterize(spec, 8 * um), spec, SolveConfig{});
    CHECK(std::all_of(sol.potential.values.begin(), sol.potential.values.end(),
                      [](double v) { return v == 0.0; }));
  }

  TEST_CASE("solver errors")
  {
    const auto  spec = tip_spec();
    const auto  mg   = rasterize(spec, 8 * um);
    SolveConfig cfg;
    cfg.max_iterations = 3;
    try
      {
        solve_potential(mg, spec, cfg);
        FAIL("expected NotConverged");
      }
    catch (const NotConverged &e)
      {
        CHECK(e.iterations() == 3);
        CHECK(e.final_residual() > cfg.rel_tolerance);
      }

    const Grid3 g(4, 4, 4, {1 * um, 1 * um, 1 * um});
    const MaterialGrid solid(g, std::vector<Material>(g.size(), Material::insulator), {1.0, 78},
                             {0.0, 3});
    SolveConfig zero;
    zero.conductivity_ratio = 0.0;
    CHECK_THROWS_AS(solve_potential(solid, box(4 * um, 4 * um, 4 * um, 1.0), zero),
                    SingularSystem);

    SolveConfig bad;
    bad.rel_tolerance = 0.0;
    CHECK_THROWS_AS(validate(bad), InvalidArgument);
  }

  TEST_CASE("line profiles")
  {
    const Grid3 g(6, 6, 6, {1 * um, 1 * um, 1 * um});
    const auto  lin = sample(g, [](const Vec3 &p) { return 3.0 + 2.0 * p.x / um + p.y / um; });
    const auto  prof = line_profile(lin, Line{{0.5 * um, 1 * um, 2 * um}, {5.5 * um, 4 * um, 2 * um}, 11});
    for (const auto &s : prof)
      {
        const double t = s.arc_length / std::hypot(5 * um, 3 * um);
        const double x = 0.5 + 5 * t, y = 1 + 3 * t;
        CHECK(s.value == doctest::Approx(3.0 + 2.0 * x + y).epsilon(1e-12));
      }
    const auto flat = line_profile(sample(g, [](const Vec3 &) { return 7.0; }),
                                   Line{{0, 0, 0}, {6 * um, 6 * um, 6 * um}, 5});
    for (const auto &s : flat)
      CHECK(s.value == 7.0);
    CHECK_THROWS_AS(line_profile(lin, Line{{0, 0, 0}, {7 * um, 0, 0}, 5}), OutOfDomain);
  }
}
