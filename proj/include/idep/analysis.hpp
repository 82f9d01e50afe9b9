#pragma once

#include <span>
#include <vector>

#include "idep/field_solver.hpp"

namespace idep
{

enum class CenterlineAxis
{
  along_channel, ///< x line through the gap centre (default)
  across_gap,    ///< y line joining the two apexes
};

struct CenterlineOptions
{
  CenterlineAxis axis             = CenterlineAxis::along_channel;
  std::size_t    tip_pair         = 0;
  std::size_t    samples_per_cell = 4;
};

/// The sampling line at height z for `opts`.
Line centerline(const DeviceSpec &spec, const Grid3 &grid, double z,
                const CenterlineOptions &opts = {});

/// Maximum of |grad(E^2)| along the centreline at height z.
double centerline_peak(const VectorField3 &grad_e2, const DeviceSpec &spec, double z,
                       const CenterlineOptions &opts = {});

struct HeightDecayReport
{
  std::vector<double> heights;            ///< m
  std::vector<double> peak_grad_e2;       ///< V^2/m^3
  std::vector<double> relative_reduction; ///< 1 - peak_i / peak_0
};

HeightDecayReport height_decay(const VectorField3 &grad_e2, const DeviceSpec &spec,
                               std::span<const double> heights,
                               const CenterlineOptions &opts = {});

struct GapSweepReport
{
  double              height = 0.0;
  std::vector<double> gaps;         ///< m, strictly increasing
  std::vector<double> peak_grad_e2; ///< V^2/m^3
  std::vector<SolveStats> solves;
};

/// One full solve per gap, each replacing the gap of `tip_pair` in the template.
GapSweepReport gap_sweep(const DeviceSpec &templ, std::span<const double> gaps, double height,
                         double resolution, MaterialProps medium, const SolveConfig &cfg,
                         const CenterlineOptions &opts = {});

struct UniformityReport
{
  double      height                   = 0.0;
  double      coefficient_of_variation = 0.0;
  double      mean                     = 0.0;
  std::size_t samples                  = 0;
};

/// std/mean of E^2 over the x-y slice at `height`, skipping `margin` cells
/// next to each side face.
UniformityReport uniformity(const ScalarField3 &e2, double height, std::size_t margin = 2);

} // namespace idep
