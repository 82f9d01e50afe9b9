#pragma once

#include <optional>
#include <string>
#include <vector>

#include "idep/dep_physics.hpp"
#include "idep/field.hpp"
#include "idep/geometry.hpp"

namespace idep
{

struct FluidProps
{
  double          viscosity = 1.0e-3; ///< Pa s
  DielectricProps props{water_eps_r, 1.76e-3};
};

struct ParticleState
{
  Vec3   position;
  double time = 0.0;
};

enum class Face
{
  x_min,
  x_max,
  y_min,
  y_max,
  z_min,
  z_max,
};
std::string to_string(Face f);

enum class Outcome
{
  trapped,
  exited,
  timeout,
};

struct TrajectoryResult
{
  std::vector<ParticleState> samples;
  std::vector<double>        speeds; ///< m/s, one per sample
  Outcome                    outcome = Outcome::timeout;
  std::size_t                tip_pair = 0;          ///< valid when trapped
  Face                       exit_face = Face::x_max; ///< valid when exited
  double                     final_speed = 0.0;

  /// "TRAPPED(0)", "EXITED(x_max)" or "TIMEOUT".
  std::string outcome_label() const;
};

struct StepControl
{
  double dt_max          = 0.05;  ///< s
  double dt_min          = 1e-12; ///< s; smaller required steps raise StepUnderflow
  double max_step_cells  = 0.5;   ///< displacement cap per step, in grid cells
};

struct StopRules
{
  /// Surface-to-apex distance that counts as captured [m]; empty uses the
  /// particle radius.
  std::optional<double> capture_radius;
  double                speed_floor = 1e-7;  ///< m/s
  double                t_max       = 600.0; ///< s
};

/// Overdamped motion of one particle in a precomputed force field:
/// dx/dt = F(x) / (6 pi eta r) + ambient.
///
/// The particle is a hard sphere. The glass slide (z = 0), the side walls
/// and the insulator tips keep its centre at least one radius away; in
/// contact the velocity loses its component into the obstacle, so the
/// particle slides. Crossing either electrode face or the open top ends the
/// trajectory as EXITED.
///
/// TRAPPED means the particle surface is within the capture distance of a
/// tip apex segment while moving slower than the speed floor.
class ParticleTracker
{
public:
  ParticleTracker(const VectorField3 &force, const DeviceSpec &spec, ParticleModel model,
                  FluidProps fluid, Vec3 ambient_velocity = {});
  /// The tracker keeps a reference to the force field.
  ParticleTracker(VectorField3 &&, const DeviceSpec &, ParticleModel, FluidProps,
                  Vec3 = {}) = delete;

  /// Stokes drift at `point`; throws OutOfDomain outside the grid.
  Vec3 velocity_at(const Vec3 &point) const;

  TrajectoryResult integrate(const ParticleState &start, const StepControl &steps,
                             const StopRules &stop) const;

  const DeviceSpec &spec() const { return spec_; }

private:
  Vec3                       constrain(const Vec3 &from, const Vec3 &to) const;
  bool                       in_tip(const Vec3 &p) const;
  std::vector<Vec3>          contact_normals(const Vec3 &p) const;
  Vec3                       admissible_velocity(const Vec3 &p) const;
  std::optional<std::size_t> captured_by(const Vec3 &p, double gap) const;

  const VectorField3 &force_;
  DeviceSpec          spec_;
  ParticleModel       model_;
  FluidProps          fluid_;
  Vec3                ambient_;
  double              drag_; ///< 6 pi eta r
};

Vec3 velocity_at(const VectorField3 &force, const ParticleModel &model, const FluidProps &fluid,
                 const Vec3 &point);

/// Axis-aligned box of release points: counts[d] points per axis, evenly
/// spaced and including both corners (a single point sits at the middle).
struct SeedRegion
{
  Vec3                       lo;
  Vec3                       hi;
  std::array<std::size_t, 3> counts{1, 1, 1};
};

std::vector<Vec3> seed_points(const SeedRegion &region);

struct EnsembleResult
{
  std::vector<Vec3>             releases;
  std::vector<TrajectoryResult> trajectories;
  double                        capture_fraction = 0.0;
};

/// Runs one trajectory per seed point, in seed order; `threads` workers
/// split the seeds. Results do not depend on the worker count.
EnsembleResult release_grid(const ParticleTracker &tracker, const SeedRegion &region,
                            const StepControl &steps, const StopRules &stop,
                            unsigned threads = 1);

} // namespace idep
