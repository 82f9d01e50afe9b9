#include "idep/run.hpp"

#include <chrono>
#include <fmt/chrono.h>
#include <fmt/format.h>
#include <fstream>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "idep/error.hpp"
#include "idep/export.hpp"

#ifndef IDEP_VERSION
#define IDEP_VERSION "0.0.0"
#endif

namespace idep
{

std::string_view to_string(Command c)
{
  switch (c)
    {
      case Command::solve:
        return "solve";
      case Command::sweep:
        return "sweep";
      case Command::spectrum:
        return "spectrum";
      case Command::trace:
        return "trace";
      case Command::metrics:
        return "metrics";
    }
  return "unknown";
}

std::filesystem::path RunContext::output(const std::string &name)
{
  files.push_back(name);
  return out_dir / name;
}

std::string RunContext::provenance() const
{
  const auto &d = cfg.device;
  std::string tips;
  for (const auto &t : d.tip_pairs)
    {
      tips += fmt::format("{}(x={},gap={},angle={}", tips.empty() ? "" : " ", t.center_x_um,
                          t.gap_um, t.tip_angle_deg);
      if (t.base_depth_um)
        tips += fmt::format(",base={}", *t.base_depth_um);
      if (t.truncation_um > 0)
        tips += fmt::format(",trunc={}", t.truncation_um);
      tips += ")";
    }
  const std::string drive = cfg.drive.applied_field_v_m
                              ? fmt::format("field_v_m={}", *cfg.drive.applied_field_v_m)
                              : fmt::format("voltage_v={}", cfg.drive.voltage_v.value_or(0.0));
  return fmt::format("box_um={}x{}x{} insulator_um={} resolution_um={} tips_um=[{}] {} "
                     "frequency_hz={} sigma_m={} conductivity_ratio={} rel_tolerance={}",
                     d.channel_length_um, d.channel_width_um, d.domain_height_um,
                     d.insulator_height_um, d.resolution_um, tips, drive, cfg.drive.frequency_hz,
                     cfg.materials.medium_sigma, cfg.materials.conductivity_ratio,
                     cfg.solver.rel_tolerance);
}

namespace
{
std::vector<double> to_metres(const std::vector<double> &um)
{
  std::vector<double> m;
  for (const double v : um)
    m.push_back(v * 1e-6);
  return m;
}

CenterlineOptions centerline_options(const RunConfig &cfg)
{
  CenterlineOptions o;
  o.axis = cfg.analysis.centerline;
  return o;
}

void export_fields(RunContext &ctx, const std::string &stem, const auto &field)
{
  const auto fmt = ctx.cfg.output.field_format;
  auto       put = [&](const auto &f, const std::filesystem::path &p, ExportFormat ef) {
    if constexpr (std::is_same_v<std::decay_t<decltype(f)>, ScalarField3>)
      export_scalar_field(f, p, ef);
    else
      export_vector_field(f, p, ef);
  };
  if (fmt == FieldFormat::csv || fmt == FieldFormat::both)
    put(field, ctx.output(stem + ".csv"), ExportFormat::csv);
  if (fmt == FieldFormat::vtk || fmt == FieldFormat::both)
    put(field, ctx.output(stem + ".vtk"), ExportFormat::vtk_structured);
}

void write_reports(RunContext &ctx, const ScalarField3 &e2, const VectorField3 &grad_e2)
{
  const auto &cfg  = ctx.cfg;
  const auto  spec = cfg.device_spec();

  ctx.stage = "height_decay";
  if (spec.tip_pairs.empty())
    spdlog::warn("no tip pairs configured; skipping the height-decay report");
  else
    {
      const auto heights = to_metres(cfg.analysis.heights_um);
      const auto report  = height_decay(grad_e2, spec, heights, centerline_options(cfg));
      write_height_decay(ctx.output("height_decay.csv"), report, ctx.provenance());
      for (std::size_t n = 0; n < report.heights.size(); ++n)
        {
          const auto h = fmt::format("{}", cfg.analysis.heights_um[n]);
          ctx.results["peak_grad_e2_at_" + h + "_um"] = report.peak_grad_e2[n];
          ctx.results["reduction_at_" + h + "_um"]    = report.relative_reduction[n];
          spdlog::info("height {} um: peak |grad E^2| = {:.4g} V^2/m^3, reduction {:.1f}%", h,
                       report.peak_grad_e2[n], 100.0 * report.relative_reduction[n]);
        }
    }

  ctx.stage = "uniformity";
  if (!cfg.analysis.uniformity_heights_um.empty())
    {
      std::vector<UniformityReport> rows;
      for (const double h : cfg.analysis.uniformity_heights_um)
        {
          rows.push_back(uniformity(e2, h * 1e-6, cfg.analysis.uniformity_margin_cells));
          ctx.results[fmt::format("cv_e2_at_{}_um", h)] = rows.back().coefficient_of_variation;
          spdlog::info("height {} um: cv(E^2) = {:.4g}", h, rows.back().coefficient_of_variation);
        }
      write_uniformity(ctx.output("uniformity.csv"), rows, ctx.provenance());
    }
}

FieldSolution solve_configured(RunContext &ctx)
{
  const auto &cfg  = ctx.cfg;
  const auto  spec = cfg.device_spec();
  ctx.stage        = "rasterize";
  const auto mg    = rasterize(spec, cfg.resolution(), cfg.medium_material(),
                               cfg.insulator_material());
  spdlog::info("grid {} x {} x {} ({} cells, {} insulator)", mg.grid().nx(), mg.grid().ny(),
               mg.grid().nz(), mg.grid().size(), mg.count(Material::insulator));
  ctx.stage = "solve";
  auto fs   = solve_fields(mg, spec, cfg.solve_config(ctx.threads));
  ctx.solve = fs.potential.stats;
  spdlog::info("solve converged in {} iterations, relative residual {:.3g}",
               fs.potential.stats.iterations, fs.potential.stats.relative_residual);

  if (cfg.output.export_labels)
    {
      ctx.stage = "export";
      ScalarField3 labels(mg.grid(), ScalarQuantity::generic);
      for (std::size_t c = 0; c < labels.values.size(); ++c)
        labels.values[c] = mg.labels()[c] == Material::insulator ? 1.0 : 0.0;
      export_fields(ctx, "labels", labels);
    }
  return fs;
}
} // namespace

void run_solve(RunContext &ctx)
{
  const auto fs = solve_configured(ctx);
  if (ctx.cfg.output.export_fields)
    {
      ctx.stage = "export";
      export_fields(ctx, "phi", fs.potential.potential);
      export_fields(ctx, "e2", fs.e2);
      export_fields(ctx, "grad_e2", fs.grad_e2);
    }
  write_reports(ctx, fs.e2, fs.grad_e2);
}

void run_sweep(RunContext &ctx, SweepAxis axis)
{
  if (axis != SweepAxis::gap)
    throw InvalidArgument("unsupported sweep axis");
  const auto &cfg = ctx.cfg;
  const auto  spec = cfg.device_spec();
  if (spec.tip_pairs.empty())
    throw ValidationError("tip_pair", "a gap sweep needs at least one tip pair");

  ctx.stage         = "sweep";
  const auto gaps   = to_metres(cfg.analysis.sweep_gaps_um);
  const auto report = gap_sweep(spec, gaps, cfg.analysis.sweep_height_um * 1e-6, cfg.resolution(),
                                cfg.medium_material(), cfg.solve_config(ctx.threads),
                                centerline_options(cfg));
  for (std::size_t n = 0; n < gaps.size(); ++n)
    {
      ctx.results[fmt::format("peak_grad_e2_gap_{}_um", cfg.analysis.sweep_gaps_um[n])] =
        report.peak_grad_e2[n];
      spdlog::info("gap {} um: peak |grad E^2| = {:.4g} V^2/m^3", cfg.analysis.sweep_gaps_um[n],
                   report.peak_grad_e2[n]);
    }
  if (!report.solves.empty())
    ctx.solve = report.solves.back();
  ctx.stage = "export";
  write_gap_sweep(ctx.output("gap_sweep.csv"), report, ctx.provenance());
}

void run_spectrum(RunContext &ctx)
{
  const auto &cfg = ctx.cfg;
  ctx.stage       = "spectrum";
  const auto particle = cfg.particle_model().props;
  const auto medium   = cfg.medium();
  const auto s = cm_spectrum(particle, medium, cfg.spectrum.f_min_hz, cfg.spectrum.f_max_hz,
                             cfg.spectrum.points_per_decade);
  ctx.results["re_k_at_drive"] = cm_factor(particle, medium, cfg.omega()).real();
  if (const auto fx = crossover_frequency(particle, medium))
    {
      ctx.results["crossover_hz"] = *fx;
      spdlog::info("crossover at {:.4g} Hz", *fx);
    }
  else
    spdlog::info("no crossover between 1 Hz and 1 THz");
  ctx.stage = "export";
  write_spectrum(ctx.output("spectrum.csv"), s,
                 fmt::format("particle_eps_r={} particle_sigma={} medium_eps_r={} medium_sigma={}",
                             particle.eps_r, particle.sigma, medium.eps_r, medium.sigma));
}

void run_trace(RunContext &ctx, const std::vector<Vec3> &releases_um)
{
  const auto &cfg = ctx.cfg;
  if (releases_um.empty() && !cfg.trace.seed_region)
    throw ValidationError("trace.releases_um", "needs release points or a seed region");

  const auto fs    = solve_configured(ctx);
  ctx.stage        = "force";
  const auto model = cfg.particle_model();
  const auto force = dep_force_field(model, cfg.medium(), cfg.omega(), fs.grad_e2);
  ctx.results["re_k_at_drive"] = cm_factor(model.props, cfg.medium(), cfg.omega()).real();
  if (cfg.output.export_fields)
    {
      ctx.stage = "export";
      export_fields(ctx, "force", force);
    }

  const auto            spec = cfg.device_spec();
  const ParticleTracker tracker(force, spec, model, cfg.fluid(), cfg.trace.ambient_velocity);
  for (std::size_t n = 0; n < releases_um.size(); ++n)
    {
      ctx.stage        = fmt::format("trace[{}]", n);
      const Vec3 start = releases_um[n] * 1e-6;
      const auto r     = tracker.integrate({start, 0.0}, cfg.step_control(), cfg.stop_rules());
      const auto name  = fmt::format("trajectory_{:03}", n);
      ctx.outcomes[name] = r.outcome_label();
      ctx.results[name + "_end_time_s"] = r.samples.back().time;
      spdlog::info("release {} ({}, {}, {}) um: {} after {:.4g} s, {} steps", n,
                   releases_um[n].x, releases_um[n].y, releases_um[n].z, r.outcome_label(),
                   r.samples.back().time, r.samples.size() - 1);
      write_trajectory(ctx.output(name + ".csv"), r);
    }

  if (const auto &seed = cfg.trace.seed_region)
    {
      ctx.stage = "ensemble";
      const SeedRegion region{seed->min_um * 1e-6, seed->max_um * 1e-6, seed->counts};
      const auto ens = release_grid(tracker, region, cfg.step_control(), cfg.stop_rules(),
                                    ctx.threads);
      ctx.results["capture_fraction"] = ens.capture_fraction;
      spdlog::info("ensemble of {}: capture fraction {:.3f}", ens.releases.size(),
                   ens.capture_fraction);
      write_ensemble(ctx.output("ensemble.csv"), ens, ctx.provenance());
    }
}

void run_metrics(RunContext &ctx)
{
  ctx.stage     = "import";
  const auto e2 = import_scalar_csv(ctx.out_dir / "e2.csv", ScalarQuantity::e_squared);
  const auto g  = import_vector_csv(ctx.out_dir / "grad_e2.csv", VectorQuantity::grad_e2);
  write_reports(ctx, e2, g);
}

std::string config_hash(std::string_view text)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : text)
    {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  return fmt::format("{:016x}", h);
}

ExitCode exit_code_for(const std::exception &e)
{
  if (dynamic_cast<const ParseError *>(&e) || dynamic_cast<const ValidationError *>(&e) ||
      dynamic_cast<const GeometryInvalid *>(&e) || dynamic_cast<const ResolutionTooCoarse *>(&e))
    return ExitCode::config_error;
  if (dynamic_cast<const NotConverged *>(&e))
    return ExitCode::not_converged;
  if (dynamic_cast<const IoError *>(&e) || dynamic_cast<const std::filesystem::filesystem_error *>(&e))
    return ExitCode::io_error;
  return ExitCode::failure;
}

namespace
{
using nlohmann::ordered_json;

std::string utc_now()
{
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}",
                     fmt::gmtime(std::chrono::system_clock::to_time_t(std::chrono::system_clock::now())));
}

void write_json(const std::filesystem::path &path, const ordered_json &j)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot open '" + path.string() + "' for writing");
  out << j.dump(2) << '\n';
  if (!out)
    throw IoError("write to '" + path.string() + "' failed");
}

ordered_json error_record(const Invocation &inv, const std::string &stage,
                          const std::exception &e, ExitCode code)
{
  ordered_json j;
  j["status"]    = "error";
  j["command"]   = to_string(inv.command);
  j["stage"]     = stage;
  j["exit_code"] = static_cast<int>(code);
  if (const auto *err = dynamic_cast<const Error *>(&e))
    j["kind"] = err->kind();
  else
    j["kind"] = "Exception";
  j["message"] = e.what();
  if (const auto *p = dynamic_cast<const ParseError *>(&e))
    j["line"] = p->line();
  if (const auto *v = dynamic_cast<const ValidationError *>(&e))
    j["field"] = v->field();
  if (const auto *n = dynamic_cast<const NotConverged *>(&e))
    {
      j["iterations"]     = n->iterations();
      j["final_residual"] = n->final_residual();
    }
  return j;
}
} // namespace

ExitCode execute(const Invocation &inv)
{
  const std::string started = utc_now();
  RunContext        ctx;
  ctx.threads = std::max(1u, inv.threads);
  std::optional<std::filesystem::path> error_dir = inv.out_dir;
  std::string                          text;
  try
    {
      ctx.stage = "config";
      ctx.cfg   = load_config(inv.config_path.string());
      if (inv.out_dir)
        ctx.cfg.output.directory = inv.out_dir->string();
      if (inv.resolution_um)
        ctx.cfg.device.resolution_um = *inv.resolution_um;
      if (!inv.releases_um.empty())
        ctx.cfg.trace.releases_um = inv.releases_um;
      validate(ctx.cfg);
      ctx.out_dir = ctx.cfg.output.directory;
      error_dir   = ctx.out_dir;
      text        = serialize(ctx.cfg);

      ctx.stage = "output";
      std::filesystem::create_directories(ctx.out_dir);
      spdlog::info("{} with config {} -> {}", to_string(inv.command), inv.config_path.string(),
                   ctx.out_dir.string());

      switch (inv.command)
        {
          case Command::solve:
            run_solve(ctx);
            break;
          case Command::sweep:
            run_sweep(ctx);
            break;
          case Command::spectrum:
            run_spectrum(ctx);
            break;
          case Command::trace:
            run_trace(ctx, ctx.cfg.trace.releases_um);
            break;
          case Command::metrics:
            run_metrics(ctx);
            break;
        }

      ctx.stage = "manifest";
      ordered_json m;
      m["status"]       = "ok";
      m["tool"]         = "idep";
      m["version"]      = IDEP_VERSION;
      m["command"]      = to_string(inv.command);
      m["config_path"]  = inv.config_path.string();
      m["config_hash"]  = config_hash(text);
      m["started_utc"]  = started;
      m["finished_utc"] = utc_now();
      m["threads"]      = ctx.threads;
      if (ctx.solve)
        m["solver"] = {{"iterations", ctx.solve->iterations},
                       {"relative_residual", ctx.solve->relative_residual},
                       {"electrode_current_a", ctx.solve->electrode_current}};
      m["results"]  = ctx.results;
      m["outcomes"] = ctx.outcomes;
      m["files"]    = ctx.files;
      m["config"]   = text;
      write_json(ctx.out_dir / "manifest.json", m);
      return ExitCode::ok;
    }
  catch (const std::exception &e)
    {
      const ExitCode code = exit_code_for(e);
      spdlog::error("{} failed during {}: {}", to_string(inv.command), ctx.stage, e.what());
      if (error_dir)
        {
          try
            {
              std::filesystem::create_directories(*error_dir);
              auto j = error_record(inv, ctx.stage, e, code);
              if (!text.empty())
                j["context"] = ctx.provenance();
              j["started_utc"]  = started;
              j["finished_utc"] = utc_now();
              write_json(*error_dir / "error.json", j);
            }
          catch (const std::exception &w)
            {
              spdlog::error("could not write error record: {}", w.what());
            }
        }
      return code;
    }
}

} // namespace idep
