#include "idep/field_solver.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <spdlog/spdlog.h>

#include "idep/error.hpp"
#include "idep/parallel.hpp"

namespace idep
{
namespace
{
double harmonic_mean(double a, double b)
{
  if (a == 0.0 || b == 0.0)
    return 0.0;
  return 2.0 * a * b / (a + b);
}
} // namespace

void validate(const SolveConfig &cfg)
{
  if (!(cfg.rel_tolerance > 0.0 && cfg.rel_tolerance < 1.0))
    throw InvalidArgument("rel_tolerance must lie in (0, 1)");
  if (!(cfg.conductivity_ratio >= 0.0 && cfg.conductivity_ratio < 1.0))
    throw InvalidArgument("conductivity_ratio must lie in [0, 1)");
  if (cfg.max_iterations == 0)
    throw InvalidArgument("max_iterations must be positive");
}

ConductionSystem::ConductionSystem(const MaterialGrid &mg, double electrode_voltage,
                                   double conductivity_ratio, unsigned threads)
  : grid_(mg.grid()), voltage_(electrode_voltage), threads_(threads)
{
  const Grid3      &g = grid_;
  const std::size_t nx = g.nx(), ny = g.ny(), nz = g.nz(), n = g.size();
  const double      dx = g.h(0), dy = g.h(1), dz = g.h(2);

  if (mg.count(Material::medium) == 0)
    throw SingularSystem("no conducting medium cells in the domain");

  const double        sigma_m = mg.props(Material::medium).sigma;
  std::vector<double> sigma(n);
  for (std::size_t c = 0; c < n; ++c)
    sigma[c] = mg.labels()[c] == Material::medium ? sigma_m : conductivity_ratio * sigma_m;

  gx_.assign(n, 0.0);
  gy_.assign(n, 0.0);
  gz_.assign(n, 0.0);
  diag_.assign(n, 0.0);
  rhs_.assign(n, 0.0);
  g_left_.assign(ny * nz, 0.0);
  g_right_.assign(ny * nz, 0.0);

  const double ax = dy * dz / dx, ay = dx * dz / dy, az = dx * dy / dz;
  for (std::size_t k = 0; k < nz; ++k)
    for (std::size_t j = 0; j < ny; ++j)
      for (std::size_t i = 0; i < nx; ++i)
        {
          const std::size_t c = g.index(i, j, k);
          if (i + 1 < nx)
            gx_[c] = ax * harmonic_mean(sigma[c], sigma[c + 1]);
          if (j + 1 < ny)
            gy_[c] = ay * harmonic_mean(sigma[c], sigma[c + nx]);
          if (k + 1 < nz)
            gz_[c] = az * harmonic_mean(sigma[c], sigma[c + nx * ny]);
        }

  for (std::size_t k = 0; k < nz; ++k)
    for (std::size_t j = 0; j < ny; ++j)
      {
        const std::size_t left = g.index(0, j, k), right = g.index(nx - 1, j, k);
        g_left_[j + ny * k]    = 2.0 * ax * sigma[left];
        g_right_[j + ny * k]   = 2.0 * ax * sigma[right];
        diag_[left] += g_left_[j + ny * k];
        diag_[right] += g_right_[j + ny * k];
        rhs_[right] += g_right_[j + ny * k] * voltage_;
      }

  for (std::size_t k = 0; k < nz; ++k)
    for (std::size_t j = 0; j < ny; ++j)
      for (std::size_t i = 0; i < nx; ++i)
        {
          const std::size_t c = g.index(i, j, k);
          double            d = gx_[c] + gy_[c] + gz_[c];
          if (i > 0)
            d += gx_[c - 1];
          if (j > 0)
            d += gy_[c - nx];
          if (k > 0)
            d += gz_[c - nx * ny];
          diag_[c] += d;
          if (diag_[c] == 0.0)
            throw SingularSystem("cell (" + std::to_string(i) + ", " + std::to_string(j) + ", " +
                                 std::to_string(k) + ") is electrically isolated");
        }
}

void ConductionSystem::apply(const std::vector<double> &x, std::vector<double> &y) const
{
  const std::size_t nx = grid_.nx(), ny = grid_.ny(), nz = grid_.nz(), plane = nx * ny;
  y.resize(x.size());
  parallel_blocks(nz, threads_, [&](std::size_t kb, std::size_t ke) {
    for (std::size_t k = kb; k < ke; ++k)
      for (std::size_t j = 0; j < ny; ++j)
        {
          const std::size_t row = nx * (j + ny * k);
          for (std::size_t i = 0; i < nx; ++i)
            {
              const std::size_t c = row + i;
              double            s = diag_[c] * x[c];
              if (i + 1 < nx)
                s -= gx_[c] * x[c + 1];
              if (i > 0)
                s -= gx_[c - 1] * x[c - 1];
              if (j + 1 < ny)
                s -= gy_[c] * x[c + nx];
              if (j > 0)
                s -= gy_[c - nx] * x[c - nx];
              if (k + 1 < nz)
                s -= gz_[c] * x[c + plane];
              if (k > 0)
                s -= gz_[c - plane] * x[c - plane];
              y[c] = s;
            }
        }
  });
}

double ConductionSystem::relative_residual(const std::vector<double> &phi) const
{
  std::vector<double> ax;
  apply(phi, ax);
  const std::size_t plane = grid_.nx() * grid_.ny();
  const double      rr    = parallel_sum(grid_.nz(), threads_, [&](std::size_t k) {
    double s = 0.0;
    for (std::size_t c = k * plane; c < (k + 1) * plane; ++c)
      s += (rhs_[c] - ax[c]) * (rhs_[c] - ax[c]);
    return s;
  });
  const double bb = parallel_sum(grid_.nz(), threads_, [&](std::size_t k) {
    double s = 0.0;
    for (std::size_t c = k * plane; c < (k + 1) * plane; ++c)
      s += rhs_[c] * rhs_[c];
    return s;
  });
  if (bb == 0.0)
    return std::sqrt(rr);
  return std::sqrt(rr / bb);
}

double ConductionSystem::current_through_plane(const std::vector<double> &phi, long i) const
{
  const std::size_t nx = grid_.nx(), ny = grid_.ny(), nz = grid_.nz();
  if (i < -1 || i > long(nx) - 1)
    throw InvalidArgument("plane index out of range");
  double current = 0.0;
  for (std::size_t k = 0; k < nz; ++k)
    for (std::size_t j = 0; j < ny; ++j)
      {
        if (i == -1)
          current += g_left_[j + ny * k] * (0.0 - phi[grid_.index(0, j, k)]);
        else if (i == long(nx) - 1)
          current += g_right_[j + ny * k] * (phi[grid_.index(nx - 1, j, k)] - voltage_);
        else
          {
            const std::size_t c = grid_.index(std::size_t(i), j, k);
            current += gx_[c] * (phi[c] - phi[c + 1]);
          }
      }
  return current;
}

double ConductionSystem::current_imbalance(const std::vector<double> &phi) const
{
  const std::size_t   nx = grid_.nx(), ny = grid_.ny(), nz = grid_.nz();
  std::vector<double> planes(nx + 1, 0.0); // entry i + 1 is plane i
  for (std::size_t k = 0; k < nz; ++k)
    for (std::size_t j = 0; j < ny; ++j)
      {
        const std::size_t row = grid_.index(0, j, k);
        planes[0] += g_left_[j + ny * k] * (0.0 - phi[row]);
        for (std::size_t i = 0; i + 1 < nx; ++i)
          planes[i + 1] += gx_[row + i] * (phi[row + i] - phi[row + i + 1]);
        planes[nx] += g_right_[j + ny * k] * (phi[row + nx - 1] - voltage_);
      }
  double worst = 0.0;
  for (const double p : planes)
    worst = std::max(worst, std::abs(p - planes[0]));
  if (worst == 0.0)
    return 0.0;
  return worst / std::abs(planes[0]);
}

PotentialSolution solve_potential(const ConductionSystem &system, const SolveConfig &cfg,
                                  std::vector<double> x)
{
  validate(cfg);
  const Grid3      &g     = system.grid();
  const std::size_t n     = g.size();
  const std::size_t plane = g.nx() * g.ny();
  const std::size_t nz    = g.nz();
  const unsigned    th    = system.threads();
  const auto       &b     = system.rhs();
  const auto       &diag  = system.diagonal();
  if (x.size() != n)
    throw InvalidArgument("initial guess does not match the grid");

  auto dot_planes = [&](const std::vector<double> &u, const std::vector<double> &v) {
    return parallel_sum(nz, th, [&](std::size_t k) {
      double s = 0.0;
      for (std::size_t c = k * plane; c < (k + 1) * plane; ++c)
        s += u[c] * v[c];
      return s;
    });
  };

  PotentialSolution out{ScalarField3(g, ScalarQuantity::potential), {}};
  const double      b_norm = std::sqrt(dot_planes(b, b));
  if (b_norm == 0.0)
    {
      // zero drive: phi = 0 solves the system exactly
      out.stats = {0, 0.0, 0.0};
      return out;
    }

  std::vector<double> r(n), z(n), p(n), q(n);
  unsigned            it        = 0;
  double              rel       = 0.0;
  double              imbalance = 0.0;
  double              target    = cfg.rel_tolerance;
  unsigned            stalled   = 0;
  double              best      = std::numeric_limits<double>::infinity();

  auto not_converged = [&](const std::string &why) {
    return NotConverged("conjugate gradients " + why + " after " + std::to_string(it) +
                          " iterations with relative residual " + fmt::format("{:.3e}", rel) +
                          " and current imbalance " + fmt::format("{:.3e}", imbalance),
                        it, rel);
  };

  // Each pass restarts from the true residual. When the residual target is
  // met but the plane currents still disagree, the target tightens tenfold.
  while (true)
    {
      system.apply(x, q);
      for (std::size_t c = 0; c < n; ++c)
        {
          r[c] = b[c] - q[c];
          z[c] = r[c] / diag[c];
          p[c] = z[c];
        }
      double rz = dot_planes(r, z);
      rel       = std::sqrt(dot_planes(r, r)) / b_norm;

      while (rel > target && it < cfg.max_iterations)
        {
          system.apply(p, q);
          const double pq = dot_planes(p, q);
          if (!(pq > 0.0))
            throw SingularSystem("conduction operator lost positive definiteness");
          const double alpha = rz / pq;
          const double rr    = parallel_sum(nz, th, [&](std::size_t k) {
            double s = 0.0;
            for (std::size_t c = k * plane; c < (k + 1) * plane; ++c)
              {
                x[c] += alpha * p[c];
                r[c] -= alpha * q[c];
                z[c] = r[c] / diag[c];
                s += r[c] * r[c];
              }
            return s;
          });
          const double rz_new = dot_planes(r, z);
          const double beta   = rz_new / rz;
          rz                  = rz_new;
          parallel_blocks(n, th, [&](std::size_t cb, std::size_t ce) {
            for (std::size_t c = cb; c < ce; ++c)
              p[c] = z[c] + beta * p[c];
          });
          ++it;
          rel = std::sqrt(rr) / b_norm;
          if (cfg.log_every != 0 && it % cfg.log_every == 0)
            spdlog::info("cg iteration {} relative residual {:.3e}", it, rel);
        }

      rel       = system.relative_residual(x);
      imbalance = system.current_imbalance(x);
      if (rel <= cfg.rel_tolerance && imbalance <= cfg.rel_tolerance)
        break;
      if (it >= cfg.max_iterations)
        throw not_converged("stopped");

      // round-off floor: restarts no longer improve the solution
      const double progress = std::max(rel / cfg.rel_tolerance, imbalance / cfg.rel_tolerance);
      stalled               = progress < 0.5 * best ? 0 : stalled + 1;
      best                  = std::min(best, progress);
      if (stalled >= 3)
        throw not_converged("stalled at round-off");
      if (rel <= target)
        target *= 0.1;
    }

  spdlog::debug("cg converged in {} iterations, relative residual {:.3e}, current imbalance {:.3e}",
                it, rel, imbalance);
  out.potential.values = std::move(x);
  out.stats.iterations = it;
  out.stats.relative_residual = rel;
  out.stats.electrode_current = system.current_through_plane(out.potential.values, -1);
  out.stats.current_imbalance = imbalance;
  return out;
}

PotentialSolution solve_potential(const MaterialGrid &mg, const DeviceSpec &spec,
                                  const SolveConfig &cfg)
{
  validate(cfg);
  const ConductionSystem system(mg, spec.electrode_voltage(), cfg.conductivity_ratio,
                                cfg.threads);
  // Start from the uniform-channel solution, a linear ramp in x.
  const Grid3        &g = mg.grid();
  std::vector<double> guess(g.size());
  const double        length = double(g.nx()) * g.h(0);
  for (std::size_t c = 0; c < guess.size(); ++c)
    guess[c] = system.electrode_voltage() * (g.center(0, g.unravel(c).i) - g.origin().x) / length;
  return solve_potential(system, cfg, std::move(guess));
}

VectorField3 gradient(const ScalarField3 &f, VectorQuantity q, unsigned threads)
{
  const Grid3      &g = f.grid;
  VectorField3      out(g, q);
  const std::size_t n[3] = {g.nx(), g.ny(), g.nz()};
  const std::size_t stride[3] = {1, g.nx(), g.nx() * g.ny()};
  if (n[0] < 3 || n[1] < 3 || n[2] < 3)
    throw InvalidArgument("gradient needs at least 3 cells per axis");

  parallel_blocks(g.nz(), threads, [&](std::size_t kb, std::size_t ke) {
    for (std::size_t k = kb; k < ke; ++k)
      for (std::size_t j = 0; j < g.ny(); ++j)
        for (std::size_t i = 0; i < g.nx(); ++i)
          {
            const std::size_t c      = g.index(i, j, k);
            const std::size_t pos[3] = {i, j, k};
            Vec3              d;
            for (int a = 0; a < 3; ++a)
              {
                const double      h = g.h(a);
                const std::size_t s = stride[a];
                const auto       &v = f.values;
                if (pos[a] == 0)
                  d[a] = (-3.0 * v[c] + 4.0 * v[c + s] - v[c + 2 * s]) / (2.0 * h);
                else if (pos[a] + 1 == n[a])
                  d[a] = (3.0 * v[c] - 4.0 * v[c - s] + v[c - 2 * s]) / (2.0 * h);
                else
                  d[a] = (v[c + s] - v[c - s]) / (2.0 * h);
              }
            out.values[c] = d;
          }
  });
  return out;
}

VectorField3 electric_field(const ScalarField3 &phi, unsigned threads)
{
  VectorField3 e = gradient(phi, VectorQuantity::e_field, threads);
  for (auto &v : e.values)
    v = -1.0 * v;
  return e;
}

ScalarField3 e_squared(const VectorField3 &e)
{
  ScalarField3 out(e.grid, ScalarQuantity::e_squared);
  for (std::size_t c = 0; c < e.values.size(); ++c)
    out.values[c] = dot(e.values[c], e.values[c]);
  return out;
}

VectorField3 grad_e_squared(const ScalarField3 &e2, unsigned threads)
{
  return gradient(e2, VectorQuantity::grad_e2, threads);
}

FieldSolution solve_fields(const MaterialGrid &mg, const DeviceSpec &spec, const SolveConfig &cfg)
{
  FieldSolution s;
  s.potential = solve_potential(mg, spec, cfg);
  s.e_field   = electric_field(s.potential.potential, cfg.threads);
  s.e2        = e_squared(s.e_field);
  s.grad_e2   = grad_e_squared(s.e2, cfg.threads);
  return s;
}

} // namespace idep
