#include "tdbem/singular_analysis.h"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <ostream>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

namespace tdbem {
namespace {

constexpr double kScanStep = 1e-3;
constexpr double kScanStart = 1e-3;

void check(const ExponentProblem& p) {
  if (!(p.opening_angle > 0.0 && p.opening_angle <= 2.0 * pi + 1e-14))
    throw ParameterError("opening angle must lie in (0, 2pi]");
  if (!(p.kolosov > 1.0)) throw ParameterError("Kolosov constant must exceed 1");
}

template <class F>
double refine(F f, double a, double b, double fa, double fb, double tol) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  std::uintmax_t it = 200;
  auto stop = [tol](double x, double y) { return std::abs(x - y) <= tol; };
  const auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, stop, it);
  return 0.5 * (r.first + r.second);
}

// Roots of f on (start, cap] found by sign scan; fa == 0 at a grid point counts once.
template <class F>
std::vector<double> scan_roots(F f, double start, double cap, double step, double tol) {
  std::vector<double> out;
  double a = start, fa = f(a);
  if (fa == 0.0) out.push_back(a);
  while (a < cap) {
    const double b = std::min(cap, a + step);
    const double fb = f(b);
    if (fb == 0.0)
      out.push_back(b);
    else if (fa != 0.0 && (fa < 0.0) != (fb < 0.0))
      out.push_back(refine(f, a, b, fa, fb, tol));
    a = b;
    fa = fb;
  }
  return out;
}

// series about x = 1: 2F1(-a, a + 1; 1; z), z = (1 - x) / 2 <= 1/2
double legendre_series(double a, double z) {
  double term = 1.0, sum = 1.0;
  for (int n = 0; n < 200; ++n) {
    term *= (n - a) * (n + a + 1.0) / ((n + 1.0) * (n + 1.0)) * z;
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum) && n > 2) break;
  }
  return sum;
}

// Mehler-Dirichlet integral after sin(phi/2) = sin(theta/2) sin(psi)
double legendre_mehler(double a, double x) {
  const double s = std::sqrt(0.5 * (1.0 - x));
  auto g = [a, s](double psi) {
    const double h = s * std::sin(psi);
    const double phi = 2.0 * std::asin(h);
    return std::cos((a + 0.5) * phi) / std::sqrt(1.0 - h * h);
  };
  using boost::math::quadrature::gauss_kronrod;
  const double v = gauss_kronrod<double, 31>::integrate(g, 0.0, 0.5 * pi, 12, 1e-13);
  return 2.0 / pi * v;
}

}  // namespace

std::vector<double> exponent_elastic_roots(const ExponentProblem& p, double cap, int branch) {
  check(p);
  const double w = p.opening_angle;
  if (p.bc == CornerCondition::wave_dirichlet || p.bc == CornerCondition::wave_neumann) {
    std::vector<double> out;
    for (int k = 1; exponent_wave(w, k) <= cap; ++k) out.push_back(exponent_wave(w, k));
    return out;
  }
  const double kappa = p.bc == CornerCondition::dirichlet ? p.kolosov : 1.0;
  const double sw = std::sin(w) / kappa;
  std::vector<double> out;
  for (double sgn : {1.0, -1.0}) {
    if (branch != 0 && (branch > 0) != (sgn > 0)) continue;
    auto f = [w, sw, sgn](double nu) { return std::sin(nu * w) - sgn * nu * sw; };
    const auto r = scan_roots(f, kScanStart, cap, kScanStep, 1e-13);
    out.insert(out.end(), r.begin(), r.end());
  }
  std::sort(out.begin(), out.end());
  // the two branches share roots where sin(nu w) = 0 and sin(w) = 0
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-9; }),
            out.end());
  return out;
}

double exponent_elastic(const ExponentProblem& p) {
  const auto r = exponent_elastic_roots(p, 2.0);
  if (r.empty()) {
    std::ostringstream os;
    os << "no exponent in (0, 2] for omega=" << p.opening_angle << " k*=" << p.kolosov
       << " (scan step " << kScanStep << ")";
    throw SearchRangeError(os.str());
  }
  return r.front();
}

double exponent_wave(double omega, int k) {
  if (!(omega > 0.0)) throw ParameterError("opening angle must be positive");
  return k * pi / omega;
}

double exponent_asymptotics(double omega, double kolosov, AngleRegime regime) {
  if (regime == AngleRegime::near_2pi)
    return 0.5 + (2.0 * pi - omega) / (4.0 * pi) * (1.0 + 1.0 / kolosov);
  if (!(kolosov > 1.0)) throw ParameterError("Kolosov constant must exceed 1");
  // sin(c)/c decreases from 1 to 0 on (0, pi)
  auto f = [kolosov](double c) { return std::sin(c) / c - 1.0 / kolosov; };
  const double c = refine(f, 1e-9, pi, f(1e-9), f(pi), 1e-15);
  return c / omega;
}

double legendre_p(double alpha, double x) {
  if (!(x > -1.0) || x > 1.0) throw DomainError("legendre_p needs x in (-1, 1]");
  if (x == 1.0) return 1.0;
  // P_{-a-1} = P_a
  if (alpha < -0.5) alpha = -alpha - 1.0;
  if (x >= 0.0) return legendre_series(alpha, 0.5 * (1.0 - x));
  return legendre_mehler(alpha, x);
}

double cone_residual(const ConeExponentProblem& p, double alpha) {
  const double c = std::cos(p.opening_angle), s = std::sin(p.opening_angle);
  const double nu = p.poisson;
  const double pa = legendre_p(alpha, c), pb = legendre_p(alpha + 1.0, c);
  return -(alpha + 1.0) / s *
         (pa * pa * c * (alpha + 4.0 * nu - 3.0) + pa * pb * (3.0 - 4.0 * nu - c * c * (2.0 * alpha + 1.0)) +
          pb * pb * c * (alpha + 1.0));
}

ConeRoots exponent_cone(const ConeExponentProblem& p, double upper, double scan_step) {
  if (!(p.opening_angle > 0.0 && p.opening_angle < pi))
    throw ParameterError("cone opening angle must lie in (0, pi)");
  if (!(p.poisson > 0.0 && p.poisson < 0.5)) throw ParameterError("Poisson number must lie in (0, 1/2)");
  auto f = [&p](double a) { return cone_residual(p, a); };
  ConeRoots out;
  out.roots = scan_roots(f, scan_step, upper, scan_step, 1e-12);

  // interior local minima of |f| with no sign change that come close to zero
  std::vector<double> xs, fs;
  for (double a = scan_step; a <= upper + 1e-15; a += scan_step) {
    xs.push_back(a);
    fs.push_back(f(a));
  }
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    const double l = std::abs(fs[i - 1]), m = std::abs(fs[i]), r = std::abs(fs[i + 1]);
    if (!(m < l && m < r)) continue;
    if ((fs[i - 1] < 0.0) != (fs[i + 1] < 0.0) || (fs[i] < 0.0) != (fs[i - 1] < 0.0)) continue;
    auto g = [&f](double a) { return std::abs(f(a)); };
    const auto mn = boost::math::tools::brent_find_minima(g, xs[i - 1], xs[i + 1], 40);
    const double scale = std::max({l, r, 1.0});
    if (mn.second < 1e-6 * scale) out.suspected_double.push_back(mn.first);
  }
  return out;
}

PowerLawFit fit_power_law(const std::vector<double>& r, const std::vector<double>& v) {
  if (r.size() != v.size()) throw ParameterError("fit_power_law: size mismatch");
  if (r.size() < 3) throw ParameterError("fit_power_law needs at least 3 samples");
  PowerLawFit out;
  const double n = static_cast<double>(r.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  bool pos = false, neg = false;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0.0)) throw ParameterError("fit_power_law needs r > 0");
    if (v[i] == 0.0) throw ParameterError("fit_power_law needs nonzero values");
    (v[i] > 0 ? pos : neg) = true;
    const double x = std::log(r[i]), y = std::log(std::abs(v[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  if (!(std::abs(den) > 0.0)) throw ParameterError("fit_power_law needs distinct r");
  out.exponent = (n * sxy - sx * sy) / den;
  const double b = (sy - out.exponent * sx) / n;
  out.prefactor = std::exp(b);
  double ss = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double e = std::log(std::abs(v[i])) - (out.exponent * std::log(r[i]) + b);
    ss += e * e;
  }
  out.residual = std::sqrt(ss / n);
  out.sign_change = pos && neg;
  return out;
}

void write_exponent_curve(std::ostream& os, double kolosov, const std::vector<double>& omegas) {
  os << "omega,nu_exterior,nu_interior\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto solve = [kolosov, nan](double w) {
    try {
      return exponent_elastic({w, CornerCondition::dirichlet, kolosov});
    } catch (const SearchRangeError&) {
      return nan;
    }
  };
  os.precision(12);
  for (double w : omegas) os << w << ',' << solve(2.0 * pi - w) << ',' << solve(w) << '\n';
}

}  // namespace tdbem
