#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "idep/field.hpp"

namespace idep
{

inline constexpr double vacuum_permittivity = 8.854187817e-12; // F/m

struct DielectricProps
{
  double eps_r = 1.0; ///< relative permittivity, > 0
  double sigma = 0.0; ///< conductivity [S/m], >= 0

  friend bool operator==(const DielectricProps &, const DielectricProps &) = default;
};

struct ParticleModel
{
  double          radius = 0.0; ///< m
  DielectricProps props;

  friend bool operator==(const ParticleModel &, const ParticleModel &) = default;
};

void validate(const DielectricProps &p);

double angular_frequency(double hz);

/// eps0 * eps_r - j * sigma / omega. Throws ZeroFrequency for omega <= 0.
std::complex<double> complex_permittivity(const DielectricProps &p, double omega);

/// Clausius-Mossotti factor (eps_p* - eps_m*) / (eps_p* + 2 eps_m*).
std::complex<double> cm_factor(const DielectricProps &particle, const DielectricProps &medium,
                               double omega);

struct CMSpectrum
{
  std::vector<double> frequencies; ///< Hz, strictly increasing
  std::vector<double> re_k;
  std::vector<double> im_k;
  DielectricProps     particle;
  DielectricProps     medium;
};

/// Log-spaced scan from f_min to f_max (both included).
CMSpectrum cm_spectrum(const DielectricProps &particle, const DielectricProps &medium,
                       double f_min, double f_max, unsigned points_per_decade);

/// First sign change of Re[K*] in [1 Hz, 1 THz], bisected in log-frequency;
/// empty when Re[K*] keeps one sign over the whole range.
std::optional<double> crossover_frequency(const DielectricProps &particle,
                                          const DielectricProps &medium);

/// 2 pi r^3 eps0 eps_m Re[K*]: the factor that turns grad(E_rms^2) into force.
double dep_prefactor(const ParticleModel &model, const DielectricProps &medium, double omega);

VectorField3 dep_force_field(const ParticleModel &model, const DielectricProps &medium,
                             double omega, const VectorField3 &grad_e2);

} // namespace idep
