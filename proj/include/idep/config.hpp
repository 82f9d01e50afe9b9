#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "idep/analysis.hpp"
#include "idep/dep_physics.hpp"
#include "idep/field_solver.hpp"
#include "idep/geometry.hpp"
#include "idep/particle_dynamics.hpp"

namespace idep
{

// Run configuration as written in the INI file. Lengths are micrometres,
// conductivities S/m, frequencies Hz, fields V/m (RMS), times s. Conversion
// to SI happens only in the *_spec()/props() accessors, so the structs
// round-trip through text exactly.

struct TipPairConfig
{
  double                center_x_um   = 300.0;
  double                gap_um        = 60.0;
  double                tip_angle_deg = 30.0;
  std::optional<double> base_depth_um;
  double                truncation_um = 0.0;

  friend bool operator==(const TipPairConfig &, const TipPairConfig &) = default;
};

struct DeviceConfig
{
  double                     channel_length_um   = 600.0;
  double                     channel_width_um    = 300.0;
  double                     domain_height_um    = 200.0;
  double                     insulator_height_um = 60.0;
  double                     resolution_um       = 2.0;
  std::vector<TipPairConfig> tip_pairs;

  friend bool operator==(const DeviceConfig &, const DeviceConfig &) = default;
};

struct MaterialsConfig
{
  double medium_sigma       = 1.76e-3;
  double medium_eps_r       = 78.0;
  double insulator_eps_r    = 3.0;
  double conductivity_ratio = 1e-6;

  friend bool operator==(const MaterialsConfig &, const MaterialsConfig &) = default;
};

struct DriveConfig
{
  std::optional<double> applied_field_v_m; ///< exactly one of these two
  std::optional<double> voltage_v;
  double                frequency_hz = 1e6;

  friend bool operator==(const DriveConfig &, const DriveConfig &) = default;
};

struct ParticleConfig
{
  double radius_um = 7.5;
  double eps_r     = 60.0;
  double sigma     = 0.2;

  friend bool operator==(const ParticleConfig &, const ParticleConfig &) = default;
};

struct SolverConfig
{
  double   rel_tolerance  = 1e-8;
  unsigned max_iterations = 50000;
  unsigned log_every      = 200;

  friend bool operator==(const SolverConfig &, const SolverConfig &) = default;
};

enum class FieldFormat
{
  csv,
  vtk,
  both,
};

struct OutputConfig
{
  std::string directory     = "out";
  bool        export_fields = true;
  FieldFormat field_format  = FieldFormat::csv;
  bool        export_labels = false;

  friend bool operator==(const OutputConfig &, const OutputConfig &) = default;
};

struct AnalysisConfig
{
  std::vector<double> heights_um{0.0, 30.0, 60.0};
  std::vector<double> uniformity_heights_um{30.0, 160.0};
  std::size_t         uniformity_margin_cells = 2;
  CenterlineAxis      centerline              = CenterlineAxis::along_channel;
  std::vector<double> sweep_gaps_um{40.0, 60.0, 80.0, 100.0};
  double              sweep_height_um = 0.0;

  friend bool operator==(const AnalysisConfig &, const AnalysisConfig &) = default;
};

struct SpectrumConfig
{
  double   f_min_hz          = 1e3;
  double   f_max_hz          = 1e9;
  unsigned points_per_decade = 20;

  friend bool operator==(const SpectrumConfig &, const SpectrumConfig &) = default;
};

struct SeedRegionConfig
{
  Vec3                       min_um;
  Vec3                       max_um;
  std::array<std::size_t, 3> counts{1, 1, 1};

  friend bool operator==(const SeedRegionConfig &, const SeedRegionConfig &) = default;
};

struct TraceConfig
{
  std::vector<Vec3>               releases_um;
  double                          viscosity      = 1e-3;
  double                          dt_max_s       = 0.05;
  double                          dt_min_s       = 1e-12;
  double                          max_step_cells = 0.5;
  double                          t_max_s        = 600.0;
  double                          speed_floor    = 1e-7;
  std::optional<double>           capture_radius_um;
  Vec3                            ambient_velocity; ///< m/s
  std::optional<SeedRegionConfig> seed_region;

  friend bool operator==(const TraceConfig &, const TraceConfig &) = default;
};

struct RunConfig
{
  DeviceConfig    device;
  MaterialsConfig materials;
  DriveConfig     drive;
  ParticleConfig  particle;
  SolverConfig    solver;
  OutputConfig    output;
  AnalysisConfig  analysis;
  SpectrumConfig  spectrum;
  TraceConfig     trace;

  DeviceSpec      device_spec() const;
  MaterialProps   medium_material() const;
  MaterialProps   insulator_material() const;
  DielectricProps medium() const;
  ParticleModel   particle_model() const;
  FluidProps      fluid() const;
  SolveConfig     solve_config(unsigned threads = 1) const;
  double          resolution() const { return device.resolution_um * 1e-6; }
  double          omega() const { return angular_frequency(drive.frequency_hz); }
  StepControl     step_control() const;
  StopRules       stop_rules() const;

  friend bool operator==(const RunConfig &, const RunConfig &) = default;
};

/// Parses INI text: `[section]` headers, `key = value` lines, `#` comments.
/// Required sections: device, materials, drive, particle, solver, output.
/// `[tip_pair]` may repeat; analysis, spectrum and trace are optional.
/// Throws ParseError for syntax problems, unknown sections or keys, and
/// missing sections; ValidationError for out-of-range values.
RunConfig parse_config(std::string_view text);

/// Canonical text form; parse_config(serialize(c)) == c.
std::string serialize(const RunConfig &cfg);

/// Range checks on an already-built config (parse_config calls this).
void validate(const RunConfig &cfg);

RunConfig load_config(const std::string &path);

std::string_view to_string(FieldFormat f);
std::string_view to_string(CenterlineAxis a);

} // namespace idep
