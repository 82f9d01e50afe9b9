// Acceptance run: prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails. Runs at 2 um on the single-tip-pair device.
//
//   acceptance [--report FILE]    run all criteria, optionally saving the lines
//   acceptance --check FILE N     print criterion N from a saved report

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <spdlog/spdlog.h>
#include <string>
#include <vector>

#include "idep/analysis.hpp"
#include "idep/config.hpp"
#include "idep/dep_physics.hpp"
#include "idep/export.hpp"
#include "idep/field_solver.hpp"
#include "idep/particle_dynamics.hpp"
#include "idep/run.hpp"

using namespace idep;
namespace fs = std::filesystem;

namespace
{
constexpr double um   = 1e-6;
constexpr double eps0 = 8.854187817e-12;
constexpr double pi   = std::numbers::pi;
constexpr double res  = 2 * um;

const DielectricProps sucrose{78.0, 1.76e-3};
const ParticleModel   cell{7.5 * um, {60, 0.2}};

struct Verdict
{
  bool        pass = true;
  std::string detail;

  void require(bool ok, const std::string &what)
  {
    if (!ok)
      {
        pass = false;
        detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
      }
  }
  void note(const std::string &s) { detail += (detail.empty() ? "" : "; ") + s; }
};

int           failures = 0;
std::ofstream report;

void criterion(int n, const char *title, const std::function<void(Verdict &)> &body)
{
  const auto t0 = std::chrono::steady_clock::now();
  Verdict    o;
  try
    {
      body(o);
    }
  catch (const std::exception &e)
    {
      o.pass = false;
      o.note(std::string("exception: ") + e.what());
    }
  const double secs =
    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass)
    ++failures;
  const auto line = fmt::format("{} criterion {}: {} [{}] ({:.0f} s)", o.pass ? "PASS" : "FAIL",
                                n, title, o.detail, secs);
  fmt::print("{}\n", line);
  std::fflush(stdout);
  if (report.is_open())
    report << line << std::endl;
}

DeviceSpec tip_spec(double gap_um = 60.0, double field = 3e4)
{
  DeviceSpec  s;
  TipPairSpec t;
  t.center_x   = 300 * um;
  t.gap        = gap_um * um;
  t.tip_angle  = 30.0;
  t.base_depth = 60 * um;
  s.tip_pairs  = {t};
  s.electrode_mode = AppliedField{field};
  return s;
}

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

double rel_diff(double a, double b)
{
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

std::pair<double, double> cm_reference(double ep, double sp, double em, double sm, double w)
{
  const double a = eps0 * (ep - em), b = (sp - sm) / w;
  const double c = eps0 * (ep + 2 * em), d = (sp + 2 * sm) / w;
  const double den = c * c + d * d;
  return {(a * c + b * d) / den, (a * d - b * c) / den};
}

int check(const fs::path &path, int n)
{
  std::ifstream in(path);
  const auto    tag = fmt::format(" criterion {}: ", n);
  for (std::string line; std::getline(in, line);)
    if (line.find(tag) != std::string::npos)
      {
        fmt::print("{}\n", line);
        return line.rfind("PASS", 0) == 0 ? 0 : 1;
      }
  fmt::print("FAIL criterion {}: no result in {}\n", n, path.string());
  return 1;
}

std::string slurp(const fs::path &p)
{
  std::ifstream      in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}
} // namespace

int main(int argc, char **argv)
{
  CLI::App    app{"acceptance criteria"};
  std::string report_path, check_path;
  int         check_n = 0;
  app.add_option("--report", report_path, "also write the result lines to this file");
  auto *chk = app.add_option("--check", check_path, "read results from this file")->excludes("--report");
  app.add_option("criterion", check_n, "criterion to check")->needs(chk)->check(CLI::Range(1, 8));
  CLI11_PARSE(app, argc, argv);
  if (!check_path.empty())
    return check(check_path, check_n);
  if (!report_path.empty())
    {
      report.open(report_path, std::ios::trunc);
      if (!report)
        {
          fmt::print(stderr, "cannot write {}\n", report_path);
          return 1;
        }
    }

  spdlog::set_level(spdlog::level::warn);
  fmt::print("acceptance: single tip pair, gap 60 um, 30 degree tips, insulator 60 um, "
             "3e4 V/m, resolution 2 um\n");
  std::fflush(stdout);

  const auto    spec = tip_spec();
  const auto    mg   = rasterize(spec, res);
  FieldSolution base;
  {
    const auto t0 = std::chrono::steady_clock::now();
    base          = solve_fields(mg, spec, SolveConfig{});
    const auto &g = mg.grid();
    fmt::print("reference solve: {}x{}x{} cells, {} iterations, residual {:.3g}, {:.0f} s\n",
               g.nx(), g.ny(), g.nz(), base.potential.stats.iterations,
               base.potential.stats.relative_residual,
               std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    std::fflush(stdout);
  }

  criterion(1, "height decay of the centreline |grad E^2| peak", [&](Verdict &o) {
    const double zs[] = {0.0, 30 * um, 60 * um};
    const auto   r    = height_decay(base.grad_e2, spec, zs);
    const double r30 = 100 * r.relative_reduction[1], r60 = 100 * r.relative_reduction[2];
    o.note(fmt::format("reductions {:.1f}% at 30 um, {:.1f}% at 60 um", r30, r60));
    o.require(std::abs(r30 - 14) <= 8, "30 um reduction within 14 +/- 8 points");
    o.require(std::abs(r60 - 53) <= 8, "60 um reduction within 53 +/- 8 points");
    o.require(r.relative_reduction[1] > 0 && r.relative_reduction[2] > r.relative_reduction[1],
              "strictly increasing");
  });

  criterion(2, "centreline peak falls as the gap widens", [&](Verdict &o) {
    const double gaps[] = {40 * um, 60 * um, 80 * um, 100 * um};
    const auto   r = gap_sweep(spec, gaps, 0.0, res, {1.76e-3, water_eps_r}, SolveConfig{});
    std::string  peaks;
    for (std::size_t n = 0; n < 4; ++n)
      {
        peaks += fmt::format("{}{:.3e}", n ? ", " : "", r.peak_grad_e2[n]);
        if (n > 0)
          o.require(r.peak_grad_e2[n] < r.peak_grad_e2[n - 1],
                    fmt::format("peak({}) < peak({})", gaps[n] / um, gaps[n - 1] / um));
      }
    o.note("peaks " + peaks + " V^2/m^3");
  });

  criterion(3, "E^2 becomes uniform above the insulator", [&](Verdict &o) {
    const double cv30  = uniformity(base.e2, 30 * um).coefficient_of_variation;
    const double cv160 = uniformity(base.e2, 160 * um).coefficient_of_variation;
    o.note(fmt::format("cv(30 um) = {:.3f}, cv(160 um) = {:.4f}", cv30, cv160));
    o.require(cv160 < cv30, "cv(160) < cv(30)");
    o.require(cv160 < 0.05, "cv(160) < 0.05");
  });

  criterion(4, "solver oracles", [&](Verdict &o) {
    {
      const double V  = 3.0;
      const auto   bs = box(100 * um, 20 * um, 20 * um, V);
      const Grid3  g(50, 10, 10, {2 * um, 2 * um, 2 * um});
      const MaterialGrid uniform(g, std::vector<Material>(g.size(), Material::medium),
                                 {1.0, 78.0}, {1e-6, 3.0});
      SolveConfig cfg;
      cfg.rel_tolerance = 1e-11;
      const auto sol    = solve_potential(uniform, bs, cfg);
      double     worst  = 0.0;
      for (std::size_t c = 0; c < g.size(); ++c)
        worst = std::max(worst, std::abs(sol.potential.values[c] -
                                         V * g.center(g.unravel(c)).x / (100 * um)));
      o.note(fmt::format("(a) uniform box max error {:.2e} V", worst));
      o.require(worst < 1e-9 * V, "(a) error < 1e-9 V");
    }
    {
      const double V = 1.0, L = 100 * um;
      const auto   bs = box(L, 10 * um, 10 * um, V);
      const Grid3  g(100, 10, 10, {1 * um, 1 * um, 1 * um});
      std::vector<Material> labels(g.size(), Material::medium);
      for (std::size_t c = 0; c < g.size(); ++c)
        if (g.unravel(c).i >= 50)
          labels[c] = Material::insulator;
      SolveConfig cfg;
      cfg.conductivity_ratio = 0.5;
      cfg.rel_tolerance      = 1e-10;
      const auto f   = solve_fields(MaterialGrid(g, labels, {2e-3, 78}, {1e-3, 78}), bs, cfg);
      const auto &phi = f.potential.potential;
      // the sigma layer takes V/3, the sigma/2 layer 2V/3
      const double at_interface = phi(49, 5, 5) + 0.5 * (phi(49, 5, 5) - phi(48, 5, 5));
      const double split_err    = std::abs(at_interface - V / 3) / (V / 3);
      const double e1 = f.e_field(25, 5, 5).x, e2 = f.e_field(75, 5, 5).x;
      const double ratio_err = std::abs(e1 / e2 - 0.5) / 0.5;
      o.note(fmt::format("(b) two-layer split error {:.2e}, E ratio error {:.2e}", split_err,
                         ratio_err));
      o.require(split_err < 5e-3 && ratio_err < 5e-3, "(b) two-layer partition within 0.5%");
    }
    {
      const auto  &phi = base.potential.potential;
      const double V   = spec.electrode_voltage();
      const auto [lo, hi] = std::minmax_element(phi.values.begin(), phi.values.end());
      o.require(*lo >= 0.0 && *hi <= V, "(c) potential within electrode values");
      const ConductionSystem sys(mg, V, SolveConfig{}.conductivity_ratio);
      const double           total = sys.current_through_plane(phi.values, -1);
      double                 worst = 0.0;
      for (long i = 0; i < long(mg.grid().nx()); ++i)
        worst = std::max(worst, std::abs(sys.current_through_plane(phi.values, i) - total));
      const double imbalance = worst / std::abs(total);
      o.note(fmt::format("(c) phi in [{:.3g}, {:.6g}] of [0, {:.6g}] V, current imbalance {:.2e}",
                         *lo, *hi, V, imbalance));
      o.require(imbalance <= SolveConfig{}.rel_tolerance, "(c) current conserved to tolerance");
    }
  });

  criterion(5, "Clausius-Mossotti limits, bounds and crossover", [&](Verdict &o) {
    const DielectricProps bead{2.5, 0.01};
    const double low  = cm_factor(bead, sucrose, angular_frequency(1.0)).real();
    const double high = cm_factor(bead, sucrose, angular_frequency(1e12)).real();
    const double low_ref  = (0.01 - 1.76e-3) / (0.01 + 2 * 1.76e-3);
    const double high_ref = (2.5 - 78) / (2.5 + 2 * 78);
    o.note(fmt::format("low {:.4f} (ref {:.4f}), high {:.4f} (ref {:.4f})", low, low_ref, high,
                       high_ref));
    o.require(std::abs(low - low_ref) < 1e-3, "low-frequency limit");
    o.require(std::abs(high - high_ref) < 1e-3, "high-frequency limit");

    std::mt19937_64                        rng(20240601);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double                                 lo = 1, hi = -1, ref_err = 0;
    for (int n = 0; n < 10000; ++n)
      {
        const double ep = 1 + 199 * u(rng), em = 1 + 199 * u(rng);
        const double sp = n % 10 == 0 ? 0.0 : std::pow(10.0, -8 + 9 * u(rng));
        const double sm = std::pow(10.0, -8 + 9 * u(rng));
        const double w  = angular_frequency(std::pow(10.0, 12 * u(rng)));
        const double re = cm_factor({ep, sp}, {em, sm}, w).real();
        lo = std::min(lo, re);
        hi = std::max(hi, re);
        ref_err = std::max(ref_err, std::abs(re - cm_reference(ep, sp, em, sm, w).first));
      }
    o.note(fmt::format("Re K over 10000 inputs in [{:.4f}, {:.4f}]", lo, hi));
    o.require(lo >= -0.5 && hi <= 1.0, "Re K within [-0.5, 1]");
    o.require(ref_err < 1e-12, "Re K matches the real-arithmetic reference");

    const double num = (1.76e-3 - 0.01) * (0.01 + 2 * 1.76e-3);
    const double den = eps0 * eps0 * (2.5 - 78) * (2.5 + 2 * 78);
    const double fc_ref = std::sqrt(num / den) / (2 * pi);
    const auto   fc     = crossover_frequency(bead, sucrose);
    o.require(fc.has_value(), "crossover exists");
    if (fc)
      {
        o.note(fmt::format("crossover {:.4g} Hz (ref {:.4g} Hz)", *fc, fc_ref));
        o.require(rel_diff(*fc, fc_ref) < 0.01, "crossover within 1%");
      }
  });

  criterion(6, "DEP force scaling", [&](Verdict &o) {
    const double w     = angular_frequency(1e6);
    const auto   spec2 = tip_spec(60.0, 6e4);
    const auto   twice = solve_fields(rasterize(spec2, res), spec2, SolveConfig{});
    const auto   fa    = dep_force_field(cell, sucrose, w, base.grad_e2);
    const auto   fb    = dep_force_field(cell, sucrose, w, twice.grad_e2);
    double       vworst = 0.0;
    for (std::size_t c = 0; c < fa.values.size(); ++c)
      if (norm(fa.values[c]) > 0)
        vworst = std::max(vworst, rel_diff(norm(fb.values[c]), 4 * norm(fa.values[c])));
    o.note(fmt::format("voltage x2: max |F| deviation from x4 {:.2e}", vworst));
    o.require(vworst < 1e-9, "voltage x2 gives |F| x4");

    ParticleModel big = cell;
    big.radius *= 2;
    const auto fr     = dep_force_field(big, sucrose, w, base.grad_e2);
    double     rworst = 0.0;
    for (std::size_t c = 0; c < fa.values.size(); ++c)
      rworst = std::max(rworst, rel_diff(norm(fr.values[c]), 8 * norm(fa.values[c])));
    o.note(fmt::format("radius x2: max deviation from x8 {:.2e}", rworst));
    o.require(rworst <= 1e-15, "radius x2 gives |F| x8");

    const auto zero = dep_force_field(cell, sucrose, w,
                                      VectorField3(base.grad_e2.grid, VectorQuantity::grad_e2));
    o.require(std::all_of(zero.values.begin(), zero.values.end(),
                          [](const Vec3 &v) { return v == Vec3{}; }),
              "zero grad E^2 gives zero force");
  });

  criterion(7, "trapping of a positive-DEP cell released upstream", [&](Verdict &o) {
    const double w  = angular_frequency(1e6);
    const double re = cm_factor(cell.props, sucrose, w).real();
    o.require(re > 0, "Re K > 0 at 1 MHz");
    const FluidProps water{1e-3, sucrose};
    const Vec3       release{200 * um, 150 * um, 30 * um};

    const auto            pos = dep_force_field(cell, sucrose, w, base.grad_e2);
    const ParticleTracker tp(pos, spec, cell, water);
    const auto            rp = tp.integrate({release, 0.0}, StepControl{}, StopRules{});

    // the same field with Re K of the opposite sign
    auto neg = pos;
    for (auto &v : neg.values)
      v = -1.0 * v;
    const ParticleTracker tn(neg, spec, cell, water);
    const auto            rn = tn.integrate({release, 0.0}, StepControl{}, StopRules{});

    o.note(fmt::format("Re K = {:.3f}: {} at t = {:.2f} s; flipped: {} at t = {:.2f} s", re,
                       rp.outcome_label(), rp.samples.back().time, rn.outcome_label(),
                       rn.samples.back().time));
    o.require(rp.outcome == Outcome::trapped, "positive DEP trapped");
    o.require(rn.outcome != Outcome::trapped, "flipped sign not trapped");
  });

  criterion(8, "determinism and round trips", [&](Verdict &o) {
    const fs::path tmp =
      fs::temp_directory_path() / fmt::format("idep_acceptance_{}", std::random_device{}());
    fs::create_directories(tmp);
    const fs::path cfg = fs::path(IDEP_SOURCE_DIR) / "configs" / "paper_fig4a.ini";

    std::size_t files = 0, differing = 0;
    {
      Invocation a;
      a.command       = Command::solve;
      a.config_path   = cfg.string();
      a.resolution_um = 4.0;
      a.threads       = 1;
      a.out_dir       = tmp / "a";
      Invocation b    = a;
      b.out_dir       = tmp / "b";
      o.require(execute(a) == ExitCode::ok && execute(b) == ExitCode::ok, "two solve runs");
      for (const auto &entry : fs::directory_iterator(tmp / "a"))
        if (entry.path().extension() == ".csv")
          {
            ++files;
            if (slurp(entry.path()) != slurp(tmp / "b" / entry.path().filename()))
              ++differing;
          }
      o.note(fmt::format("{} CSVs from two runs, {} differ", files, differing));
      o.require(files >= 5 && differing == 0, "byte-identical CSVs");
    }

    bool config_ok = true;
    for (const char *name : {"paper_fig4a.ini", "paper_fig3.ini", "paper_experiment.ini"})
      {
        const auto c = load_config((fs::path(IDEP_SOURCE_DIR) / "configs" / name).string());
        config_ok    = config_ok && parse_config(serialize(c)) == c;
      }
    o.require(config_ok, "config round trip");

    const auto e2 = import_scalar_csv(tmp / "a" / "e2.csv", ScalarQuantity::e_squared);
    const auto ge = import_vector_csv(tmp / "a" / "grad_e2.csv", VectorQuantity::grad_e2);
    export_scalar_field(e2, tmp / "e2_again.csv");
    export_vector_field(ge, tmp / "grad_e2_again.csv");
    const bool fields_ok = slurp(tmp / "e2_again.csv") == slurp(tmp / "a" / "e2.csv") &&
                           slurp(tmp / "grad_e2_again.csv") == slurp(tmp / "a" / "grad_e2.csv");
    o.note(fmt::format("e2 and grad_e2 CSVs ({} cells) re-export {}", e2.values.size(),
                       fields_ok ? "identically" : "with differences"));
    o.require(fields_ok, "field CSV round trip");
    fs::remove_all(tmp);
  });

  fmt::print("{} of 8 criteria passed\n", 8 - failures);
  // with a report the per-criterion checks carry the verdicts
  if (report.is_open())
    return 0;
  return failures == 0 ? 0 : 1;
}
