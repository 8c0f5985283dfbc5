#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tdbem/common.h"

namespace tdbem {

enum class CornerCondition { dirichlet, neumann, wave_dirichlet, wave_neumann };

struct ExponentProblem {
  double opening_angle = 2.0 * pi;  // omega in (0, 2 pi]
  CornerCondition bc = CornerCondition::dirichlet;
  double kolosov = 5.0 / 3.0;       // k* = 3 - 4 nu, > 1
};

struct ConeExponentProblem {
  double opening_angle = 0.5 * pi;  // omega in (0, pi)
  double poisson = 0.25;            // nu in (0, 1/2)
};

// No root in the scanned range; the message carries the scan diagnostics.
struct SearchRangeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Smallest positive root of sin^2(nu omega) = (nu sin(omega) / kappa)^2 with
// kappa = k* (Dirichlet) or 1 (Neumann); wave conditions give pi / omega.
double exponent_elastic(const ExponentProblem& p);

// All roots in (0, cap], ascending. branch = +1 or -1 keeps only the roots of
// sin(nu omega) = branch * (nu / kappa) sin(omega); 0 keeps both.
std::vector<double> exponent_elastic_roots(const ExponentProblem& p, double cap = 2.0, int branch = 0);

// k pi / omega
double exponent_wave(double omega, int k);

// near_2pi follows the '+' branch; the smallest root near 2 pi is on the '-'
// branch, 1/2 + eps (1 - 1/k*) / (4 pi) to first order.
enum class AngleRegime { small_angle, near_2pi };
double exponent_asymptotics(double omega, double kolosov, AngleRegime regime);

// Legendre function of the first kind, real degree, x in (-1, 1].
double legendre_p(double alpha, double x);

// Right side of the cone equation at alpha (zero at an exponent).
double cone_residual(const ConeExponentProblem& p, double alpha);

struct ConeRoots {
  std::vector<double> roots;
  // near-zero minima of |residual| without a sign change (possible double roots)
  std::vector<double> suspected_double;
};

ConeRoots exponent_cone(const ConeExponentProblem& p, double upper = 2.0, double scan_step = 1e-3);

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double residual = 0.0;  // RMS in log coordinates
  bool sign_change = false;
};

// Least squares fit of log|v| = exponent log r + log prefactor.
PowerLawFit fit_power_law(const std::vector<double>& r, const std::vector<double>& v);

// CSV rows "omega,nu_exterior,nu_interior" for interior angles omega; NaN when
// no root lies in (0, 2].
void write_exponent_curve(std::ostream& os, double kolosov, const std::vector<double>& omegas);

}  // namespace tdbem
