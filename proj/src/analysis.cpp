#include "idep/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "idep/error.hpp"

namespace idep
{

Line centerline(const DeviceSpec &spec, const Grid3 &grid, double z, const CenterlineOptions &opts)
{
  if (opts.tip_pair >= spec.tip_pairs.size())
    throw InvalidArgument("centreline needs a tip pair to locate the gap");
  if (z < 0.0 || z > spec.domain_height)
    throw OutOfDomain("centreline height outside the domain");
  const auto  &tip = spec.tip_pairs[opts.tip_pair];
  const double mid = 0.5 * spec.channel_width;
  if (opts.axis == CenterlineAxis::along_channel)
    return {{0.0, mid, z},
            {spec.channel_length, mid, z},
            opts.samples_per_cell * grid.nx() + 1};
  const auto cells = static_cast<std::size_t>(std::ceil(tip.gap / grid.h(1)));
  return {{tip.center_x, mid - 0.5 * tip.gap, z},
          {tip.center_x, mid + 0.5 * tip.gap, z},
          opts.samples_per_cell * std::max<std::size_t>(cells, 1) + 1};
}

double centerline_peak(const VectorField3 &grad_e2, const DeviceSpec &spec, double z,
                       const CenterlineOptions &opts)
{
  const auto profile = line_profile(grad_e2, centerline(spec, grad_e2.grid, z, opts));
  double     peak    = 0.0;
  for (const auto &s : profile)
    peak = std::max(peak, s.value);
  return peak;
}

HeightDecayReport height_decay(const VectorField3 &grad_e2, const DeviceSpec &spec,
                               std::span<const double> heights, const CenterlineOptions &opts)
{
  if (heights.empty())
    throw InvalidArgument("height_decay needs at least one height");
  HeightDecayReport r;
  for (const double z : heights)
    {
      r.heights.push_back(z);
      r.peak_grad_e2.push_back(centerline_peak(grad_e2, spec, z, opts));
    }
  const double base = r.peak_grad_e2.front();
  for (const double p : r.peak_grad_e2)
    r.relative_reduction.push_back(base > 0.0 ? 1.0 - p / base : 0.0);
  return r;
}

GapSweepReport gap_sweep(const DeviceSpec &templ, std::span<const double> gaps, double height,
                         double resolution, MaterialProps medium, const SolveConfig &cfg,
                         const CenterlineOptions &opts)
{
  if (gaps.empty())
    throw InvalidArgument("gap sweep needs at least one gap");
  if (!std::is_sorted(gaps.begin(), gaps.end()) ||
      std::adjacent_find(gaps.begin(), gaps.end()) != gaps.end())
    throw InvalidArgument("gap sweep needs strictly increasing gaps");
  if (opts.tip_pair >= templ.tip_pairs.size())
    throw InvalidArgument("gap sweep template has no tip pair to vary");

  GapSweepReport r;
  r.height = height;
  for (const double gap : gaps)
    {
      DeviceSpec spec                  = templ;
      spec.tip_pairs[opts.tip_pair].gap = gap;
      const auto mg  = rasterize(spec, resolution, medium);
      const auto sol = solve_fields(mg, spec, cfg);
      r.gaps.push_back(gap);
      r.peak_grad_e2.push_back(centerline_peak(sol.grad_e2, spec, height, opts));
      r.solves.push_back(sol.potential.stats);
    }
  return r;
}

UniformityReport uniformity(const ScalarField3 &e2, double height, std::size_t margin)
{
  const Grid3 &g = e2.grid;
  if (!g.contains({g.origin().x, g.origin().y, height}))
    throw OutOfDomain("uniformity height outside the domain");
  if (2 * margin >= g.nx() || 2 * margin >= g.ny())
    throw InvalidArgument("uniformity margin leaves no interior cells");

  std::vector<double> v;
  for (std::size_t j = margin; j < g.ny() - margin; ++j)
    for (std::size_t i = margin; i < g.nx() - margin; ++i)
      v.push_back(interpolate(e2, {g.center(0, i), g.center(1, j), height}));

  UniformityReport r;
  r.height  = height;
  r.samples = v.size();
  double sum = 0.0;
  for (const double x : v)
    sum += x;
  r.mean     = sum / double(v.size());
  double ss  = 0.0;
  for (const double x : v)
    ss += (x - r.mean) * (x - r.mean);
  const double sd = std::sqrt(ss / double(v.size()));
  r.coefficient_of_variation = r.mean != 0.0 ? sd / std::abs(r.mean) : 0.0;
  return r;
}

} // namespace idep
