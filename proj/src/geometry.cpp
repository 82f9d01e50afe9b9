#include "idep/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "idep/error.hpp"

namespace idep
{
namespace
{
double tan_half_angle(const TipPairSpec &tip)
{
  return std::tan(0.5 * tip.tip_angle * std::numbers::pi / 180.0);
}

/// Distance of the tip base from the channel centreline.
double base_offset(const DeviceSpec &spec, const TipPairSpec &tip)
{
  const double wall = 0.5 * spec.channel_width;
  if (!tip.base_depth)
    return wall;
  return std::min(0.5 * tip.gap + *tip.base_depth, wall);
}

double base_half_width(const DeviceSpec &spec, const TipPairSpec &tip)
{
  return (base_offset(spec, tip) - 0.5 * tip.gap + tip.truncation) * tan_half_angle(tip);
}

/// Tip membership in terms of the unsigned distance from the centreline,
/// so both tips of a pair share one test and labels mirror exactly.
bool inside_tip_local(const DeviceSpec &spec, const TipPairSpec &tip, double x,
                      double centreline_offset, double z)
{
  if (z < 0.0 || z > spec.insulator_height)
    return false;
  const double from_apex = centreline_offset - 0.5 * tip.gap;
  if (from_apex < 0.0 || centreline_offset > base_offset(spec, tip))
    return false;
  return std::abs(x - tip.center_x) <= (from_apex + tip.truncation) * tan_half_angle(tip);
}

void require_positive(double v, const std::string &what)
{
  if (!(v > 0.0) || !std::isfinite(v))
    throw GeometryInvalid(what + " must be positive and finite");
}
} // namespace

double DeviceSpec::electrode_voltage() const
{
  if (const auto *f = std::get_if<AppliedField>(&electrode_mode))
    return f->value * channel_length;
  return std::get<AppliedVoltage>(electrode_mode).value;
}

void validate(const DeviceSpec &spec)
{
  require_positive(spec.channel_length, "channel_length");
  require_positive(spec.channel_width, "channel_width");
  require_positive(spec.domain_height, "domain_height");
  require_positive(spec.insulator_height, "insulator_height");
  if (spec.insulator_height > spec.domain_height)
    throw GeometryInvalid("insulator_height exceeds domain_height");

  std::vector<std::pair<double, double>> footprints;
  for (std::size_t n = 0; n < spec.tip_pairs.size(); ++n)
    {
      const auto       &tip    = spec.tip_pairs[n];
      const std::string prefix = "tip_pairs[" + std::to_string(n) + "].";
      require_positive(tip.gap, prefix + "gap");
      if (tip.gap >= spec.channel_width)
        throw GeometryInvalid(prefix + "gap must be smaller than channel_width");
      if (!(tip.tip_angle > 0.0 && tip.tip_angle < 180.0))
        throw GeometryInvalid(prefix + "tip_angle must lie in (0, 180) degrees");
      if (tip.base_depth)
        require_positive(*tip.base_depth, prefix + "base_depth");
      if (!(tip.truncation >= 0.0))
        throw GeometryInvalid(prefix + "truncation must be non-negative");
      if (!(tip.center_x > 0.0 && tip.center_x < spec.channel_length))
        throw GeometryInvalid(prefix + "center_x must lie inside the channel");

      const double hw = base_half_width(spec, tip);
      const double lo = tip.center_x - hw, hi = tip.center_x + hw;
      if (lo < 0.0 || hi > spec.channel_length)
        throw GeometryInvalid(prefix + "tip base is wider than the channel allows");
      for (const auto &[olo, ohi] : footprints)
        if (lo < ohi && olo < hi)
          throw GeometryInvalid(prefix + "tips overlap another tip pair");
      footprints.emplace_back(lo, hi);
    }
}

bool inside_tip(const DeviceSpec &spec, const TipPairSpec &tip, const Vec3 &p)
{
  return inside_tip_local(spec, tip, p.x, std::abs(p.y - 0.5 * spec.channel_width), p.z);
}

bool inside_any_tip(const DeviceSpec &spec, const Vec3 &p)
{
  return std::any_of(spec.tip_pairs.begin(), spec.tip_pairs.end(),
                     [&](const TipPairSpec &t) { return inside_tip(spec, t, p); });
}

TipProximity tip_proximity(const DeviceSpec &spec, const TipPairSpec &tip, const Vec3 &p)
{
  const double mid  = 0.5 * spec.channel_width;
  const double side = p.y >= mid ? 1.0 : -1.0;
  const double u    = std::abs(p.y - mid);
  const double a    = tan_half_angle(tip);
  const double cx   = tip.center_x;
  const double g2   = 0.5 * tip.gap;
  const double ub   = base_offset(spec, tip);
  const double hw   = base_half_width(spec, tip);
  const double tw   = a * tip.truncation;

  // cross-section polygon in (x, u), counter-clockwise
  const std::array<std::array<double, 2>, 4> poly{
    {{cx - tw, g2}, {cx + tw, g2}, {cx + hw, ub}, {cx - hw, ub}}};

  const bool inside_2d = u >= g2 && u <= ub && std::abs(p.x - cx) <= (u - g2 + tip.truncation) * a;
  double     qx = p.x, qu = u;
  if (!inside_2d)
    {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t e = 0; e < poly.size(); ++e)
        {
          const auto  &s0 = poly[e];
          const auto  &s1 = poly[(e + 1) % poly.size()];
          const double ex = s1[0] - s0[0], eu = s1[1] - s0[1];
          const double len = ex * ex + eu * eu;
          double       t   = len > 0.0 ? ((p.x - s0[0]) * ex + (u - s0[1]) * eu) / len : 0.0;
          t                = std::clamp(t, 0.0, 1.0);
          const double cxp = s0[0] + t * ex, cup = s0[1] + t * eu;
          const double d   = (p.x - cxp) * (p.x - cxp) + (u - cup) * (u - cup);
          if (d < best)
            {
              best = d;
              qx   = cxp;
              qu   = cup;
            }
        }
    }
  const double qz      = std::clamp(p.z, 0.0, spec.insulator_height);
  const Vec3   nearest = {qx, mid + side * qu, qz};
  return {norm(p - nearest), inside_2d && p.z == qz ? p : nearest};
}

std::array<Segment, 2> apex_segments(const DeviceSpec &spec, std::size_t pair)
{
  const auto  &tip = spec.tip_pairs.at(pair);
  const double mid = 0.5 * spec.channel_width;
  const double lo  = mid - 0.5 * tip.gap;
  const double hi  = mid + 0.5 * tip.gap;
  return {Segment{{tip.center_x, lo, 0.0}, {tip.center_x, lo, spec.insulator_height}},
          Segment{{tip.center_x, hi, 0.0}, {tip.center_x, hi, spec.insulator_height}}};
}

double distance_to_segment(const Segment &s, const Vec3 &p)
{
  const Vec3   d   = s.b - s.a;
  const double len = dot(d, d);
  double       t   = len > 0.0 ? dot(p - s.a, d) / len : 0.0;
  t                = std::clamp(t, 0.0, 1.0);
  return norm(p - (s.a + t * d));
}

MaterialGrid::MaterialGrid(Grid3 grid, std::vector<Material> labels, MaterialProps medium,
                           MaterialProps insulator)
  : grid_(std::move(grid)), labels_(std::move(labels)), medium_(medium), insulator_(insulator)
{
  if (labels_.size() != grid_.size())
    throw InvalidArgument("label array does not match grid size");
  if (!(medium_.sigma > insulator_.sigma && insulator_.sigma >= 0.0))
    throw InvalidArgument("medium conductivity must exceed insulator conductivity >= 0");
  if (!(medium_.eps_r > 0.0 && insulator_.eps_r > 0.0))
    throw InvalidArgument("relative permittivities must be positive");
}

std::size_t MaterialGrid::count(Material m) const
{
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), m));
}

double MaterialGrid::volume_fraction(Material m) const
{
  return double(count(m)) / double(labels_.size());
}

Grid3 make_grid(const DeviceSpec &spec, double resolution)
{
  if (!(resolution > 0.0) || !std::isfinite(resolution))
    throw InvalidArgument("resolution must be positive");
  auto cells = [&](double extent) {
    const double n = std::ceil(extent / resolution - 1e-9);
    return std::max<std::size_t>(3, static_cast<std::size_t>(n));
  };
  // Prefer an x cell count that puts a cell centre on each tip axis, so the
  // thin apex region is sampled symmetrically instead of being missed.
  std::size_t nx = cells(spec.channel_length);
  if (!spec.tip_pairs.empty())
    {
      auto misalignment = [&](std::size_t n) {
        const double h     = spec.channel_length / double(n);
        double       worst = 0.0;
        for (const auto &tip : spec.tip_pairs)
          {
            const double u = tip.center_x / h - 0.5;
            worst          = std::max(worst, std::abs(u - std::round(u)));
          }
        return worst;
      };
      std::size_t best = nx;
      for (std::size_t n = nx; n <= nx + std::max<std::size_t>(2, nx / 10); ++n)
        if (misalignment(n) < misalignment(best) - 1e-9)
          best = n;
      nx = best;
    }
  const std::size_t ny = cells(spec.channel_width);
  const std::size_t nz = cells(spec.domain_height);
  return Grid3(nx, ny, nz,
               {spec.channel_length / double(nx), spec.channel_width / double(ny),
                spec.domain_height / double(nz)});
}

MaterialGrid rasterize(const DeviceSpec &spec, double resolution, MaterialProps medium,
                       MaterialProps insulator)
{
  validate(spec);
  if (!(resolution > 0.0))
    throw InvalidArgument("resolution must be positive");
  for (const auto &tip : spec.tip_pairs)
    if (resolution > tip.gap / 6.0 * (1.0 + 1e-12))
      throw ResolutionTooCoarse("resolution " + std::to_string(resolution * 1e6) +
                                " um leaves fewer than 6 cells across a " +
                                std::to_string(tip.gap * 1e6) + " um gap");

  const Grid3           grid = make_grid(spec, resolution);
  std::vector<Material> labels(grid.size(), Material::medium);
  const double          half_ny = 0.5 * double(grid.ny());
  for (std::size_t k = 0; k < grid.nz(); ++k)
    {
      const double z = grid.center(2, k);
      if (z > spec.insulator_height)
        continue;
      for (std::size_t j = 0; j < grid.ny(); ++j)
        {
          // |y - W/2| from the index so that mirrored rows see identical values
          const double offset = std::abs(double(j) + 0.5 - half_ny) * grid.h(1);
          for (std::size_t i = 0; i < grid.nx(); ++i)
            {
              const double x = grid.center(0, i);
              for (const auto &tip : spec.tip_pairs)
                if (inside_tip_local(spec, tip, x, offset, z))
                  {
                    labels[grid.index(i, j, k)] = Material::insulator;
                    break;
                  }
            }
        }
    }
  return MaterialGrid(grid, std::move(labels), medium, insulator);
}

Material probe_material(const MaterialGrid &mg, const Vec3 &point)
{
  const Index3 c = mg.grid().locate(point);
  return mg.label(c.i, c.j, c.k);
}

} // namespace idep
