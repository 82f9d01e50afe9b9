#include "idep/field.hpp"

#include <algorithm>
#include <cmath>

#include "idep/error.hpp"

namespace idep
{

std::string_view to_string(ScalarQuantity q)
{
  switch (q)
    {
      case ScalarQuantity::potential:
        return "potential";
      case ScalarQuantity::e_squared:
        return "e_squared";
      case ScalarQuantity::grad_e2_magnitude:
        return "grad_e2_magnitude";
      case ScalarQuantity::generic:
        break;
    }
  return "scalar";
}

std::string_view to_string(VectorQuantity q)
{
  switch (q)
    {
      case VectorQuantity::e_field:
        return "e_field";
      case VectorQuantity::grad_e2:
        return "grad_e2";
      case VectorQuantity::force:
        return "force";
      case VectorQuantity::generic:
        break;
    }
  return "vector";
}

ScalarField3 magnitude(const VectorField3 &v, ScalarQuantity q)
{
  ScalarField3 out(v.grid, q);
  std::transform(v.values.begin(), v.values.end(), out.values.begin(),
                 [](const Vec3 &e) { return norm(e); });
  return out;
}

namespace
{
struct Stencil
{
  std::size_t lo[3];
  std::size_t hi[3];
  double      w[3]; ///< weight of the hi node per axis
};

Stencil stencil_at(const Grid3 &g, const Vec3 &p)
{
  if (!g.contains(p))
    throw OutOfDomain("interpolation point outside the grid");
  Stencil s{};
  for (int d = 0; d < 3; ++d)
    {
      const double      u    = (p[d] - g.origin()[d]) / g.h(d) - 0.5;
      const std::size_t last = g.n(d) - 1;
      if (u <= 0.0)
        {
          s.lo[d] = s.hi[d] = 0;
          s.w[d]            = 0.0;
        }
      else if (u >= double(last))
        {
          s.lo[d] = s.hi[d] = last;
          s.w[d]            = 0.0;
        }
      else
        {
          const double fl = std::floor(u);
          s.lo[d]         = static_cast<std::size_t>(fl);
          s.hi[d]         = s.lo[d] + 1;
          s.w[d]          = u - fl;
        }
    }
  return s;
}

template <typename T, typename Get>
T trilinear(const Grid3 &g, const Vec3 &p, Get get)
{
  const Stencil s = stencil_at(g, p);
  auto          at = [&](int a, int b, int c) {
    return get(g.index(a ? s.hi[0] : s.lo[0], b ? s.hi[1] : s.lo[1], c ? s.hi[2] : s.lo[2]));
  };
  const double wx = s.w[0], wy = s.w[1], wz = s.w[2];
  const T      c00 = at(0, 0, 0) * (1 - wx) + at(1, 0, 0) * wx;
  const T      c10 = at(0, 1, 0) * (1 - wx) + at(1, 1, 0) * wx;
  const T      c01 = at(0, 0, 1) * (1 - wx) + at(1, 0, 1) * wx;
  const T      c11 = at(0, 1, 1) * (1 - wx) + at(1, 1, 1) * wx;
  const T      c0  = c00 * (1 - wy) + c10 * wy;
  const T      c1  = c01 * (1 - wy) + c11 * wy;
  return c0 * (1 - wz) + c1 * wz;
}

template <typename Field, typename Value>
std::vector<ProfileSample> sample_line(const Field &f, const Line &line, Value value)
{
  if (line.samples < 2)
    throw InvalidArgument("a line profile needs at least 2 samples");
  if (!f.grid.contains(line.start) || !f.grid.contains(line.end))
    throw OutOfDomain("profile line leaves the domain");
  const Vec3                 d      = line.end - line.start;
  const double               length = norm(d);
  std::vector<ProfileSample> out;
  out.reserve(line.samples);
  for (std::size_t n = 0; n < line.samples; ++n)
    {
      const double t = double(n) / double(line.samples - 1);
      const Vec3   p = n + 1 == line.samples ? line.end : line.start + t * d;
      out.push_back({t * length, value(p)});
    }
  return out;
}
} // namespace

double interpolate(const ScalarField3 &f, const Vec3 &p)
{
  return trilinear<double>(f.grid, p, [&](std::size_t i) { return f.values[i]; });
}

Vec3 interpolate(const VectorField3 &f, const Vec3 &p)
{
  return trilinear<Vec3>(f.grid, p, [&](std::size_t i) { return f.values[i]; });
}

std::vector<ProfileSample> line_profile(const ScalarField3 &f, const Line &line)
{
  return sample_line(f, line, [&](const Vec3 &p) { return interpolate(f, p); });
}

std::vector<ProfileSample> line_profile(const VectorField3 &f, const Line &line)
{
  return sample_line(f, line, [&](const Vec3 &p) { return norm(interpolate(f, p)); });
}

} // namespace idep
