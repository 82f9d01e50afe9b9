#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "idep/grid.hpp"

namespace idep
{

/// One pair of opposing triangular insulator tips forming a constriction.
/// Tips are isosceles triangles in the x-y plane, extruded in z from the
/// glass slide up to the insulator height, mirrored about y = W/2.
struct TipPairSpec
{
  double center_x  = 0.0;  ///< constriction position along the channel [m]
  double gap       = 0.0;  ///< tip-to-tip spacing across y [m]
  double tip_angle = 30.0; ///< full opening angle of each tip [deg]
  /// Distance from the apex back to the tip base [m]. Empty: the tip runs
  /// back to the side wall.
  std::optional<double> base_depth;
  /// Length cut off the triangle's apex [m]; 0 is a sharp tip. The blunted
  /// face sits at the gap boundary, so `gap` stays the tip-to-tip spacing.
  double truncation = 0.0;

  friend bool operator==(const TipPairSpec &, const TipPairSpec &) = default;
};

struct AppliedField
{
  double value = 0.0; ///< RMS field magnitude [V/m]
  friend bool operator==(const AppliedField &, const AppliedField &) = default;
};
struct AppliedVoltage
{
  double value = 0.0; ///< RMS potential difference across the x extent [V]
  friend bool operator==(const AppliedVoltage &, const AppliedVoltage &) = default;
};
using ElectrodeMode = std::variant<AppliedField, AppliedVoltage>;

struct DeviceSpec
{
  double                   channel_length   = 600e-6;
  double                   channel_width    = 300e-6;
  double                   domain_height    = 200e-6;
  double                   insulator_height = 60e-6;
  std::vector<TipPairSpec> tip_pairs;
  ElectrodeMode            electrode_mode = AppliedField{3.0e4};

  /// Potential of the x = channel_length electrode (the x = 0 face is 0 V).
  double electrode_voltage() const;

  friend bool operator==(const DeviceSpec &, const DeviceSpec &) = default;
};

/// Throws GeometryInvalid if `spec` violates a length or tip invariant.
void validate(const DeviceSpec &spec);

/// Exact point-in-tip-prism test against the continuous geometry.
bool inside_tip(const DeviceSpec &spec, const TipPairSpec &tip, const Vec3 &p);
bool inside_any_tip(const DeviceSpec &spec, const Vec3 &p);

/// Closest point of a tip prism to `p`. `distance` is 0 and `nearest == p`
/// when `p` lies inside the prism.
struct TipProximity
{
  double distance = 0.0;
  Vec3   nearest;
};
TipProximity tip_proximity(const DeviceSpec &spec, const TipPairSpec &tip, const Vec3 &p);

/// Vertical segment at a tip's apex (the centre of the blunted face when
/// truncated), from z = 0 to the insulator height.
struct Segment
{
  Vec3 a;
  Vec3 b;
};
/// Both apex segments of tip pair `pair`, lower-y tip first.
std::array<Segment, 2> apex_segments(const DeviceSpec &spec, std::size_t pair);
double                 distance_to_segment(const Segment &s, const Vec3 &p);

enum class Material : std::uint8_t
{
  medium    = 0,
  insulator = 1,
};

struct MaterialProps
{
  double sigma = 0.0; ///< conductivity [S/m]
  double eps_r = 1.0; ///< relative permittivity
};

/// Per-cell material labels on a Grid3. Immutable once built.
class MaterialGrid
{
public:
  MaterialGrid(Grid3 grid, std::vector<Material> labels, MaterialProps medium,
               MaterialProps insulator);

  const Grid3                 &grid() const { return grid_; }
  const std::vector<Material> &labels() const { return labels_; }
  Material                     label(std::size_t i, std::size_t j, std::size_t k) const
  {
    return labels_[grid_.index(i, j, k)];
  }
  const MaterialProps &props(Material m) const
  {
    return m == Material::medium ? medium_ : insulator_;
  }
  double sigma(std::size_t idx) const { return props(labels_[idx]).sigma; }

  std::size_t count(Material m) const;
  double      volume_fraction(Material m) const;

private:
  Grid3                 grid_;
  std::vector<Material> labels_;
  MaterialProps         medium_;
  MaterialProps         insulator_;
};

/// Relative permittivity of water, used when no medium properties are given.
inline constexpr double water_eps_r = 78.0;

/// Grid built for `spec` at a target spacing: each axis gets at least
/// ceil(extent / resolution) cells, so the actual spacing never exceeds it.
/// Along x the count may grow by up to 10% to put cell centres on the tip
/// axes.
Grid3 make_grid(const DeviceSpec &spec, double resolution);

/// Labels every cell whose centre lies inside a tip prism as insulator.
/// Requires at least six cells across every gap.
MaterialGrid rasterize(const DeviceSpec &spec, double resolution,
                       MaterialProps medium    = {1.76e-3, water_eps_r},
                       MaterialProps insulator = {1.76e-9, 3.0});

Material probe_material(const MaterialGrid &mg, const Vec3 &point);

} // namespace idep
