#include "idep/dep_physics.hpp"

#include <cmath>
#include <numbers>

#include "idep/error.hpp"

namespace idep
{

void validate(const DielectricProps &p)
{
  if (!(p.eps_r > 0.0) || !std::isfinite(p.eps_r))
    throw InvalidArgument("relative permittivity must be positive");
  if (!(p.sigma >= 0.0) || !std::isfinite(p.sigma))
    throw InvalidArgument("conductivity must be non-negative");
}

double angular_frequency(double hz) { return 2.0 * std::numbers::pi * hz; }

std::complex<double> complex_permittivity(const DielectricProps &p, double omega)
{
  if (!(omega > 0.0))
    throw ZeroFrequency("angular frequency must be positive");
  return {vacuum_permittivity * p.eps_r, -p.sigma / omega};
}

std::complex<double> cm_factor(const DielectricProps &particle, const DielectricProps &medium,
                               double omega)
{
  validate(particle);
  validate(medium);
  const auto ep    = complex_permittivity(particle, omega);
  const auto em    = complex_permittivity(medium, omega);
  const auto denom = ep + 2.0 * em;
  if (std::abs(denom) == 0.0)
    throw DegenerateDenominator("eps_p* + 2 eps_m* vanishes");
  return (ep - em) / denom;
}

CMSpectrum cm_spectrum(const DielectricProps &particle, const DielectricProps &medium,
                       double f_min, double f_max, unsigned points_per_decade)
{
  if (!(f_min > 0.0 && f_max > f_min))
    throw InvalidArgument("spectrum needs 0 < f_min < f_max");
  if (points_per_decade == 0)
    throw InvalidArgument("points_per_decade must be positive");

  CMSpectrum   s{{}, {}, {}, particle, medium};
  const double decades = std::log10(f_max / f_min);
  const auto   steps   = static_cast<std::size_t>(std::ceil(decades * points_per_decade - 1e-9));
  for (std::size_t n = 0; n <= steps; ++n)
    {
      const double f = n == steps ? f_max : f_min * std::pow(10.0, double(n) / points_per_decade);
      const auto   k = cm_factor(particle, medium, angular_frequency(f));
      s.frequencies.push_back(f);
      s.re_k.push_back(k.real());
      s.im_k.push_back(k.imag());
    }
  return s;
}

std::optional<double> crossover_frequency(const DielectricProps &particle,
                                          const DielectricProps &medium)
{
  auto re_k = [&](double log_f) {
    return cm_factor(particle, medium, angular_frequency(std::pow(10.0, log_f))).real();
  };
  constexpr double lo_end = 0.0, hi_end = 12.0;
  constexpr int    scan   = 12 * 50;

  double prev_x = lo_end, prev_v = re_k(lo_end);
  for (int n = 1; n <= scan; ++n)
    {
      const double x = lo_end + (hi_end - lo_end) * n / scan;
      const double v = re_k(x);
      if (prev_v == 0.0 && v != 0.0 && n > 1)
        return std::pow(10.0, prev_x);
      if ((prev_v < 0.0 && v > 0.0) || (prev_v > 0.0 && v < 0.0))
        {
          double a = prev_x, b = x, fa = prev_v;
          // 1e-12 in log10 is far below the 1e-4 relative target
          while (b - a > 1e-12)
            {
              const double m  = 0.5 * (a + b);
              const double fm = re_k(m);
              if (fm == 0.0)
                return std::pow(10.0, m);
              if ((fm < 0.0) == (fa < 0.0))
                {
                  a  = m;
                  fa = fm;
                }
              else
                b = m;
            }
          return std::pow(10.0, 0.5 * (a + b));
        }
      prev_x = x;
      prev_v = v;
    }
  return std::nullopt;
}

double dep_prefactor(const ParticleModel &model, const DielectricProps &medium, double omega)
{
  if (!(model.radius > 0.0))
    throw InvalidArgument("particle radius must be positive");
  const double r3 = model.radius * model.radius * model.radius;
  return 2.0 * std::numbers::pi * r3 * vacuum_permittivity * medium.eps_r *
         cm_factor(model.props, medium, omega).real();
}

VectorField3 dep_force_field(const ParticleModel &model, const DielectricProps &medium,
                             double omega, const VectorField3 &grad_e2)
{
  const double pre = dep_prefactor(model, medium, omega);
  VectorField3 out(grad_e2.grid, VectorQuantity::force);
  for (std::size_t c = 0; c < grad_e2.values.size(); ++c)
    out.values[c] = pre * grad_e2.values[c];
  return out;
}

} // namespace idep
