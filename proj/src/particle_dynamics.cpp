#include "idep/particle_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "idep/error.hpp"
#include "idep/parallel.hpp"

namespace idep
{

std::string to_string(Face f)
{
  switch (f)
    {
      case Face::x_min:
        return "x_min";
      case Face::x_max:
        return "x_max";
      case Face::y_min:
        return "y_min";
      case Face::y_max:
        return "y_max";
      case Face::z_min:
        return "z_min";
      case Face::z_max:
        return "z_max";
    }
  return "unknown";
}

std::string TrajectoryResult::outcome_label() const
{
  switch (outcome)
    {
      case Outcome::trapped:
        return "TRAPPED(" + std::to_string(tip_pair) + ")";
      case Outcome::exited:
        return "EXITED(" + to_string(exit_face) + ")";
      case Outcome::timeout:
        break;
    }
  return "TIMEOUT";
}

Vec3 velocity_at(const VectorField3 &force, const ParticleModel &model, const FluidProps &fluid,
                 const Vec3 &point)
{
  if (!(model.radius > 0.0) || !(fluid.viscosity > 0.0))
    throw InvalidArgument("radius and viscosity must be positive");
  const double drag = 6.0 * std::numbers::pi * fluid.viscosity * model.radius;
  return interpolate(force, point) * (1.0 / drag);
}

ParticleTracker::ParticleTracker(const VectorField3 &force, const DeviceSpec &spec,
                                 ParticleModel model, FluidProps fluid, Vec3 ambient_velocity)
  : force_(force), spec_(spec), model_(model), fluid_(fluid), ambient_(ambient_velocity)
{
  if (!(model_.radius > 0.0))
    throw InvalidArgument("particle radius must be positive");
  if (!(fluid_.viscosity > 0.0))
    throw InvalidArgument("viscosity must be positive");
  if (2.0 * model_.radius >= spec_.channel_width || model_.radius >= spec_.domain_height)
    throw InvalidArgument("particle does not fit in the channel");
  drag_ = 6.0 * std::numbers::pi * fluid_.viscosity * model_.radius;
}

Vec3 ParticleTracker::velocity_at(const Vec3 &point) const
{
  return interpolate(force_, point) * (1.0 / drag_) + ambient_;
}

bool ParticleTracker::in_tip(const Vec3 &p) const { return inside_any_tip(spec_, p); }

namespace
{
std::optional<Face> exit_face(const DeviceSpec &spec, const Vec3 &p)
{
  if (p.x < 0.0)
    return Face::x_min;
  if (p.x > spec.channel_length)
    return Face::x_max;
  if (p.z > spec.domain_height)
    return Face::z_max;
  return std::nullopt;
}

/// Fraction of the step from `a` to `b` at which it leaves through `face`.
double crossing_fraction(const DeviceSpec &spec, const Vec3 &a, const Vec3 &b, Face face)
{
  const auto frac = [](double from, double to, double plane) {
    return to == from ? 0.0 : std::clamp((plane - from) / (to - from), 0.0, 1.0);
  };
  switch (face)
    {
      case Face::x_min:
        return frac(a.x, b.x, 0.0);
      case Face::x_max:
        return frac(a.x, b.x, spec.channel_length);
      case Face::z_max:
        return frac(a.z, b.z, spec.domain_height);
      default:
        return 1.0;
    }
}

// Contact is registered slightly before touching so that a resting
// particle keeps its constraint from one step to the next.
constexpr double contact_slack = 1e-6;
} // namespace

std::vector<Vec3> ParticleTracker::contact_normals(const Vec3 &p) const
{
  const double      reach = model_.radius * (1.0 + contact_slack);
  std::vector<Vec3> normals;
  if (p.z <= reach)
    normals.push_back({0.0, 0.0, 1.0});
  if (p.y <= reach)
    normals.push_back({0.0, 1.0, 0.0});
  if (p.y >= spec_.channel_width - reach)
    normals.push_back({0.0, -1.0, 0.0});
  for (const auto &tip : spec_.tip_pairs)
    {
      const auto prox = tip_proximity(spec_, tip, p);
      if (prox.distance > 0.0 && prox.distance <= reach)
        normals.push_back((p - prox.nearest) * (1.0 / prox.distance));
    }
  return normals;
}

Vec3 ParticleTracker::admissible_velocity(const Vec3 &p) const
{
  Vec3       v       = velocity_at(p);
  const auto normals = contact_normals(p);
  // two sweeps settle wedge and wall-plus-tip corners
  for (int sweep = 0; sweep < 2; ++sweep)
    for (const auto &n : normals)
      {
        const double into = dot(v, n);
        if (into < 0.0)
          v -= into * n;
      }
  return v;
}

Vec3 ParticleTracker::constrain(const Vec3 &from, const Vec3 &to) const
{
  const double r    = model_.radius;
  const double w    = spec_.channel_width;
  auto         wall = [&](Vec3 p) {
    p.y = std::clamp(p.y, r, w - r);
    p.z = std::max(p.z, r);
    return p;
  };
  Vec3 p = wall(to);
  for (const auto &tip : spec_.tip_pairs)
    {
      const auto prox = tip_proximity(spec_, tip, p);
      if (prox.distance >= r)
        continue;
      if (prox.distance == 0.0)
        return from; // the step jumped into the insulator
      p = wall(prox.nearest + (p - prox.nearest) * (r / prox.distance));
    }
  for (const auto &tip : spec_.tip_pairs)
    if (tip_proximity(spec_, tip, p).distance < r * (1.0 - contact_slack))
      return from;
  return p;
}

std::optional<std::size_t> ParticleTracker::captured_by(const Vec3 &p, double gap) const
{
  for (std::size_t n = 0; n < spec_.tip_pairs.size(); ++n)
    for (const auto &seg : apex_segments(spec_, n))
      if (distance_to_segment(seg, p) - model_.radius <= gap)
        return n;
  return std::nullopt;
}

TrajectoryResult ParticleTracker::integrate(const ParticleState &start, const StepControl &steps,
                                            const StopRules &stop) const
{
  if (!(steps.dt_max > 0.0 && steps.dt_min > 0.0 && steps.dt_min <= steps.dt_max))
    throw InvalidArgument("step control needs 0 < dt_min <= dt_max");
  if (!(steps.max_step_cells > 0.0))
    throw InvalidArgument("max_step_cells must be positive");
  if (!(stop.t_max > start.time) || !(stop.speed_floor >= 0.0))
    throw InvalidArgument("stop rules need t_max beyond the start time");
  if (!force_.grid.contains(start.position))
    throw OutOfDomain("release point lies outside the domain");
  if (in_tip(start.position))
    throw InvalidArgument("release point lies inside an insulator tip");

  const Grid3 &g       = force_.grid;
  const double cap     = steps.max_step_cells * std::min({g.h(0), g.h(1), g.h(2)});
  const double capture = stop.capture_radius.value_or(model_.radius);

  TrajectoryResult out;
  Vec3             x = constrain(start.position, start.position);
  double           t = start.time;
  out.samples.push_back({x, t});
  out.speeds.push_back(norm(admissible_velocity(x)));

  while (true)
    {
      if (t >= stop.t_max)
        {
          out.outcome = Outcome::timeout;
          break;
        }
      const Vec3   v1   = admissible_velocity(x);
      const double sp1  = norm(v1);
      const double left = stop.t_max - t;
      double       dt   = std::min(steps.dt_max, left);
      if (sp1 > 0.0)
        dt = std::min(dt, cap / sp1);
      if (dt < steps.dt_min && dt < left)
        throw StepUnderflow("required time step " + std::to_string(dt) +
                            " s is below dt_min near (" + std::to_string(x.x) + ", " +
                            std::to_string(x.y) + ", " + std::to_string(x.z) + ")");

      // explicit midpoint; shrink once if the midpoint velocity is faster
      Vec3 step;
      for (int attempt = 0; attempt < 2; ++attempt)
        {
          const Vec3 mid = x + (0.5 * dt) * v1;
          if (exit_face(spec_, mid))
            {
              step = dt * v1;
              break;
            }
          const Vec3   v2  = admissible_velocity(constrain(x, mid));
          const double sp2 = norm(v2);
          step             = dt * v2;
          if (sp2 * dt <= cap * (1.0 + 1e-12) || attempt == 1)
            break;
          dt = cap / sp2;
          if (dt < steps.dt_min)
            throw StepUnderflow("required time step below dt_min");
        }

      const Vec3 proposal = x + step;
      if (const auto face = exit_face(spec_, proposal))
        {
          const double f = crossing_fraction(spec_, x, proposal, *face);
          t += f * dt;
          x = x + f * step;
          out.samples.push_back({x, t});
          out.speeds.push_back(norm(step) / dt);
          out.outcome   = Outcome::exited;
          out.exit_face = *face;
          break;
        }

      const Vec3   next  = constrain(x, proposal);
      const double speed = norm(next - x) / dt;
      t += dt;
      x = next;
      out.samples.push_back({x, t});
      out.speeds.push_back(speed);

      if (speed < stop.speed_floor)
        if (const auto pair = captured_by(x, capture))
          {
            out.outcome  = Outcome::trapped;
            out.tip_pair = *pair;
            break;
          }
    }
  out.final_speed = out.speeds.back();
  return out;
}

std::vector<Vec3> seed_points(const SeedRegion &region)
{
  std::vector<Vec3> pts;
  auto              coord = [&](int d, std::size_t n) {
    const std::size_t c = region.counts[d];
    if (c <= 1)
      return 0.5 * (region.lo[d] + region.hi[d]);
    return region.lo[d] + (region.hi[d] - region.lo[d]) * double(n) / double(c - 1);
  };
  for (std::size_t k = 0; k < std::max<std::size_t>(1, region.counts[2]); ++k)
    for (std::size_t j = 0; j < std::max<std::size_t>(1, region.counts[1]); ++j)
      for (std::size_t i = 0; i < std::max<std::size_t>(1, region.counts[0]); ++i)
        pts.push_back({coord(0, i), coord(1, j), coord(2, k)});
  return pts;
}

EnsembleResult release_grid(const ParticleTracker &tracker, const SeedRegion &region,
                            const StepControl &steps, const StopRules &stop, unsigned threads)
{
  EnsembleResult out;
  out.releases = seed_points(region);
  out.trajectories.resize(out.releases.size());
  parallel_blocks(out.releases.size(), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t n = b; n < e; ++n)
      out.trajectories[n] = tracker.integrate({out.releases[n], 0.0}, steps, stop);
  });
  const auto trapped = std::count_if(out.trajectories.begin(), out.trajectories.end(),
                                     [](const auto &r) { return r.outcome == Outcome::trapped; });
  out.capture_fraction =
    out.releases.empty() ? 0.0 : double(trapped) / double(out.releases.size());
  return out;
}

} // namespace idep
