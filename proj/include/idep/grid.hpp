#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace idep
{

struct Vec3
{
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr double &operator[](int d) { return d == 0 ? x : (d == 1 ? y : z); }
  constexpr double  operator[](int d) const { return d == 0 ? x : (d == 1 ? y : z); }

  constexpr Vec3 &operator+=(const Vec3 &o)
  {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3 &operator-=(const Vec3 &o)
  {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3 &operator*=(double s)
  {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }

  friend constexpr Vec3 operator+(Vec3 a, const Vec3 &b) { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3 &b) { return a -= b; }
  friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
  friend constexpr bool operator==(const Vec3 &, const Vec3 &) = default;
};

constexpr double dot(const Vec3 &a, const Vec3 &b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double    norm(const Vec3 &a) { return std::sqrt(dot(a, a)); }

struct Index3
{
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t k = 0;
};

/// Uniform cell-centred structured grid. Unknowns and sampled field values
/// live at cell centres; cell (i,j,k) spans
/// [x0 + i*dx, x0 + (i+1)*dx] and likewise in y and z.
/// Linear storage is x-fastest: index = i + nx*(j + ny*k).
class Grid3
{
public:
  Grid3() = default;
  Grid3(std::size_t nx, std::size_t ny, std::size_t nz, Vec3 spacing, Vec3 origin = {});

  std::size_t nx() const { return n_[0]; }
  std::size_t ny() const { return n_[1]; }
  std::size_t nz() const { return n_[2]; }
  std::size_t n(int axis) const { return n_[axis]; }
  std::size_t size() const { return n_[0] * n_[1] * n_[2]; }

  const Vec3 &spacing() const { return h_; }
  const Vec3 &origin() const { return origin_; }
  double      h(int axis) const { return h_[axis]; }

  /// Upper corner of the bounding box.
  Vec3 extent_max() const
  {
    return {origin_.x + double(n_[0]) * h_.x,
            origin_.y + double(n_[1]) * h_.y,
            origin_.z + double(n_[2]) * h_.z};
  }

  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const
  {
    return i + n_[0] * (j + n_[1] * k);
  }
  std::size_t index(const Index3 &c) const { return index(c.i, c.j, c.k); }
  Index3      unravel(std::size_t idx) const
  {
    return {idx % n_[0], (idx / n_[0]) % n_[1], idx / (n_[0] * n_[1])};
  }

  double center(int axis, std::size_t c) const
  {
    return origin_[axis] + (double(c) + 0.5) * h_[axis];
  }
  Vec3 center(std::size_t i, std::size_t j, std::size_t k) const
  {
    return {center(0, i), center(1, j), center(2, k)};
  }
  Vec3 center(const Index3 &c) const { return center(c.i, c.j, c.k); }

  bool contains(const Vec3 &p) const;

  /// Cell containing `p`; points on the upper boundary map to the last cell.
  /// Throws OutOfDomain when `p` lies outside the bounding box.
  Index3 locate(const Vec3 &p) const;

  friend bool operator==(const Grid3 &, const Grid3 &) = default;

private:
  std::array<std::size_t, 3> n_{0, 0, 0};
  Vec3                       h_{};
  Vec3                       origin_{};
};

} // namespace idep
