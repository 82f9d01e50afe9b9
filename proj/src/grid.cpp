#include "idep/grid.hpp"

#include <algorithm>
#include <string>

#include "idep/error.hpp"

namespace idep
{

Grid3::Grid3(std::size_t nx, std::size_t ny, std::size_t nz, Vec3 spacing, Vec3 origin)
  : n_{nx, ny, nz}, h_(spacing), origin_(origin)
{
  if (nx == 0 || ny == 0 || nz == 0)
    throw InvalidArgument("Grid3 needs at least one cell per axis");
  if (!(spacing.x > 0.0 && spacing.y > 0.0 && spacing.z > 0.0))
    throw InvalidArgument("Grid3 spacings must be positive");
}

bool Grid3::contains(const Vec3 &p) const
{
  const Vec3 hi = extent_max();
  for (int d = 0; d < 3; ++d)
    {
      // n*h can round below the nominal extent; accept points on the faces
      const double slack = 1e-9 * h_[d];
      if (!(p[d] >= origin_[d] - slack && p[d] <= hi[d] + slack))
        return false;
    }
  return true;
}

Index3 Grid3::locate(const Vec3 &p) const
{
  if (!contains(p))
    throw OutOfDomain("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) + ", " +
                      std::to_string(p.z) + ") lies outside the grid");
  std::array<std::size_t, 3> c{};
  for (int d = 0; d < 3; ++d)
    {
      const double s = std::floor((p[d] - origin_[d]) / h_[d]);
      c[d]           = std::min(static_cast<std::size_t>(std::max(s, 0.0)), n_[d] - 1);
    }
  return {c[0], c[1], c[2]};
}

} // namespace idep
