#pragma once

#include <filesystem>
#include <string_view>

#include "idep/analysis.hpp"
#include "idep/dep_physics.hpp"
#include "idep/field.hpp"
#include "idep/particle_dynamics.hpp"

namespace idep
{

enum class ExportFormat
{
  csv,
  vtk_structured,
};

// Field files. CSV: header `x_m,y_m,z_m,value` (vectors: value_x, value_y,
// value_z), one row per cell centre, z-major then y then x, 17 significant
// digits. VTK: legacy ASCII STRUCTURED_POINTS, point data at cell centres.
// All writers throw IoError when the file cannot be written.

void export_scalar_field(const ScalarField3 &f, const std::filesystem::path &path,
                         ExportFormat format = ExportFormat::csv);
void export_vector_field(const VectorField3 &f, const std::filesystem::path &path,
                         ExportFormat format = ExportFormat::csv);

void write_csv(std::ostream &out, const ScalarField3 &f);
void write_csv(std::ostream &out, const VectorField3 &f);
void write_vtk(std::ostream &out, const ScalarField3 &f);
void write_vtk(std::ostream &out, const VectorField3 &f);

/// Rebuilds grid and values from a field CSV. Needs at least two cell
/// centres per axis to recover the spacing. Values are bit-exact; the grid
/// is exact up to rounding of the recovered spacing.
ScalarField3 import_scalar_csv(const std::filesystem::path &path,
                               ScalarQuantity q = ScalarQuantity::generic);
VectorField3 import_vector_csv(const std::filesystem::path &path,
                               VectorQuantity q = VectorQuantity::generic);

// Report files. `provenance` becomes a leading `# ...` row when non-empty.

void write_height_decay(const std::filesystem::path &path, const HeightDecayReport &r,
                        std::string_view provenance);
void write_gap_sweep(const std::filesystem::path &path, const GapSweepReport &r,
                     std::string_view provenance);
void write_uniformity(const std::filesystem::path &path, const std::vector<UniformityReport> &r,
                      std::string_view provenance);
void write_spectrum(const std::filesystem::path &path, const CMSpectrum &s,
                    std::string_view provenance);
void write_trajectory(const std::filesystem::path &path, const TrajectoryResult &r);
void write_ensemble(const std::filesystem::path &path, const EnsembleResult &r,
                    std::string_view provenance);

/// 17 significant digits, enough to read back the same double.
std::string format_number(double v);

} // namespace idep
