#pragma once

#include <string_view>
#include <vector>

#include "idep/grid.hpp"

namespace idep
{

enum class ScalarQuantity
{
  potential,         ///< V
  e_squared,         ///< V^2/m^2
  grad_e2_magnitude, ///< V^2/m^3
  generic,
};

enum class VectorQuantity
{
  e_field, ///< V/m
  grad_e2, ///< V^2/m^3
  force,   ///< N
  generic,
};

std::string_view to_string(ScalarQuantity q);
std::string_view to_string(VectorQuantity q);

/// One real value per cell centre of `grid`.
struct ScalarField3
{
  Grid3               grid;
  std::vector<double> values;
  ScalarQuantity      quantity = ScalarQuantity::generic;

  ScalarField3() = default;
  ScalarField3(Grid3 g, ScalarQuantity q, double fill = 0.0)
    : grid(std::move(g)), values(grid.size(), fill), quantity(q)
  {}

  double &operator()(std::size_t i, std::size_t j, std::size_t k)
  {
    return values[grid.index(i, j, k)];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const
  {
    return values[grid.index(i, j, k)];
  }
};

/// Three components per cell centre of `grid`.
struct VectorField3
{
  Grid3             grid;
  std::vector<Vec3> values;
  VectorQuantity    quantity = VectorQuantity::generic;

  VectorField3() = default;
  VectorField3(Grid3 g, VectorQuantity q, Vec3 fill = {})
    : grid(std::move(g)), values(grid.size(), fill), quantity(q)
  {}

  Vec3 &operator()(std::size_t i, std::size_t j, std::size_t k)
  {
    return values[grid.index(i, j, k)];
  }
  const Vec3 &operator()(std::size_t i, std::size_t j, std::size_t k) const
  {
    return values[grid.index(i, j, k)];
  }
};

ScalarField3 magnitude(const VectorField3 &v, ScalarQuantity q = ScalarQuantity::generic);

/// Trilinear interpolation between cell centres. Points between the
/// outermost centres and the boundary take the value of the nearest centre
/// plane along that axis. Throws OutOfDomain outside the bounding box.
double interpolate(const ScalarField3 &f, const Vec3 &p);
Vec3   interpolate(const VectorField3 &f, const Vec3 &p);

struct Line
{
  Vec3        start;
  Vec3        end;
  std::size_t samples = 101; ///< >= 2, uniformly spaced including both ends
};

struct ProfileSample
{
  double arc_length; ///< distance from line.start [m]
  double value;
};

std::vector<ProfileSample> line_profile(const ScalarField3 &f, const Line &line);
/// Profile of the vector magnitude.
std::vector<ProfileSample> line_profile(const VectorField3 &f, const Line &line);

} // namespace idep
