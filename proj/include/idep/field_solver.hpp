#pragma once

#include <vector>

#include "idep/field.hpp"
#include "idep/geometry.hpp"

namespace idep
{

struct SolveConfig
{
  double   rel_tolerance      = 1e-8;
  unsigned max_iterations     = 50000;
  double   conductivity_ratio = 1e-6; ///< sigma_insulator / sigma_medium
  unsigned threads            = 1;
  unsigned log_every          = 200; ///< progress line cadence, 0 disables
};

void validate(const SolveConfig &cfg);

/// Cell-centred finite-volume discretisation of div(sigma grad phi) = 0.
///
/// Face conductances use the harmonic mean of the two adjacent cell
/// conductivities. The x = 0 and x = L faces are Dirichlet electrodes at
/// 0 V and V, reached over half a cell; every other face is insulating.
/// After eliminating the electrode values the operator is symmetric
/// positive definite.
class ConductionSystem
{
public:
  ConductionSystem(const MaterialGrid &mg, double electrode_voltage, double conductivity_ratio,
                   unsigned threads = 1);

  const Grid3 &grid() const { return grid_; }
  double       electrode_voltage() const { return voltage_; }

  void apply(const std::vector<double> &x, std::vector<double> &y) const;
  const std::vector<double> &rhs() const { return rhs_; }
  const std::vector<double> &diagonal() const { return diag_; }

  /// ||b - A phi|| / ||b||.
  double relative_residual(const std::vector<double> &phi) const;

  /// Current in +x crossing the plane between cell columns i and i+1
  /// (i + 1 < nx). i == -1 and i == nx-1 give the two electrode faces.
  double current_through_plane(const std::vector<double> &phi, long i) const;

  /// max_i |I_i - I_electrode| / |I_electrode| over every x plane.
  double current_imbalance(const std::vector<double> &phi) const;

  unsigned threads() const { return threads_; }

private:
  Grid3               grid_;
  double              voltage_;
  unsigned            threads_;
  std::vector<double> gx_, gy_, gz_; ///< conductance to the +axis neighbour
  std::vector<double> g_left_, g_right_; ///< electrode conductances per (j,k)
  std::vector<double> diag_;
  std::vector<double> rhs_;
};

struct SolveStats
{
  unsigned iterations        = 0;
  double   relative_residual = 0.0;
  double   electrode_current = 0.0; ///< A, through the x = 0 face in +x
  double   current_imbalance = 0.0; ///< see ConductionSystem::current_imbalance
};

struct PotentialSolution
{
  ScalarField3 potential;
  SolveStats   stats;
};

/// Jacobi-preconditioned conjugate gradients on the conduction system.
/// Converged means relative residual <= rel_tolerance and current balance
/// across every x plane within rel_tolerance. Throws NotConverged or
/// SingularSystem.
PotentialSolution solve_potential(const MaterialGrid &mg, const DeviceSpec &spec,
                                  const SolveConfig &cfg);

/// Same, from an explicit initial guess (e.g. a coarse solution).
PotentialSolution solve_potential(const ConductionSystem &system, const SolveConfig &cfg,
                                  std::vector<double> initial_guess);

/// Gradient at cell centres: central differences inside, one-sided
/// second-order differences on the first and last cell of each axis.
VectorField3 gradient(const ScalarField3 &f, VectorQuantity q = VectorQuantity::generic,
                      unsigned threads = 1);

/// E = -grad(phi), read as the RMS field.
VectorField3 electric_field(const ScalarField3 &phi, unsigned threads = 1);
ScalarField3 e_squared(const VectorField3 &e);
VectorField3 grad_e_squared(const ScalarField3 &e2, unsigned threads = 1);

/// Everything derived from one potential solve.
struct FieldSolution
{
  PotentialSolution potential;
  VectorField3      e_field;
  ScalarField3      e2;
  VectorField3      grad_e2;
};

FieldSolution solve_fields(const MaterialGrid &mg, const DeviceSpec &spec,
                           const SolveConfig &cfg);

} // namespace idep
