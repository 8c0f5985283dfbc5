#include "tdbem/kernels.h"

#include <limits>

#include "tdbem/quadrature.h"

namespace tdbem {

KernelArgs make_kernel_args(Vec2 r_vec, double delta, const Material& m) {
  if (delta < 0.0) throw ParameterError("negative time difference");
  return {r_vec, norm(r_vec), delta, m};
}

WavefrontState wavefront_state(double r, double delta, const Material& m) {
  return {r < m.c_s * delta, r < m.c_p * delta};
}

double fundamental_solution(int i, int j, Vec2 rv, double elapsed, const Material& m) {
  const double r = norm(rv);
  const double ri[2] = {rv.x, rv.y};
  const double rirj = ri[i] * ri[j];
  const double dij = i == j ? 1.0 : 0.0;
  const double r2 = r * r, r4 = r2 * r2;
  const double pref = 1.0 / (2.0 * pi * m.rho);
  double g = 0.0;
  const double cp = m.c_p, cs = m.c_s;
  if (r < cp * elapsed) {
    const double ct2 = cp * cp * elapsed * elapsed;
    const double ph = std::sqrt(ct2 - r2);
    g += pref / cp * (rirj / r4 * (2.0 * ct2 - r2) / ph - dij / r2 * ph);
  }
  if (r < cs * elapsed) {
    const double ct2 = cs * cs * elapsed * elapsed;
    const double ph = std::sqrt(ct2 - r2);
    g -= pref / cs * (rirj / r4 * (2.0 * ct2 - r2) / ph - dij / r2 * ct2 / ph);
  }
  if (r == cp * elapsed || r == cs * elapsed) return std::numeric_limits<double>::infinity();
  return g;
}

double phi_gamma(double r, double delta, double c) {
  const double a = c * delta;
  if (r > a) throw DomainError("phi_gamma evaluated outside the wavefront");
  return std::sqrt((a - r) * (a + r));
}

double phi_hat_gamma(double r, double delta, double c) {
  if (r == 0.0) return std::numeric_limits<double>::infinity();
  return std::log(phi_gamma(r, delta, c) + c * delta) - std::log(r);
}

double kernel_v_general(int i, int j, const KernelArgs& a) {
  const Material& m = a.material;
  const double r = a.r, D = a.delta;
  const double ri[2] = {a.r_vec.x, a.r_vec.y};
  const double dij = i == j ? 1.0 : 0.0;
  const double dir = ri[i] * ri[j] / (r * r * r * r) - 0.5 * dij / (r * r);
  double v = 0.0;
  if (r < m.c_p * D) {
    v += D * dir * phi_gamma(r, D, m.c_p) / m.c_p;
    v += 0.5 * dij * phi_hat_gamma(r, D, m.c_p) / (m.c_p * m.c_p);
  }
  if (r < m.c_s * D) {
    v -= D * dir * phi_gamma(r, D, m.c_s) / m.c_s;
    v += 0.5 * dij * phi_hat_gamma(r, D, m.c_s) / (m.c_s * m.c_s);
  }
  return v;
}

double kernel_v_reduced(int i, int j, const KernelArgs& a) {
  const Material& m = a.material;
  const double r = a.r, D = a.delta, cp = m.c_p, cs = m.c_s;
  if (!(r <= cs * D)) throw DomainError("reduced form needs both fronts passed");
  const double ri[2] = {a.r_vec.x, a.r_vec.y};
  const double dij = i == j ? 1.0 : 0.0;
  const double php = phi_gamma(r, D, cp), phs = phi_gamma(r, D, cs);
  return (cp * cp - cs * cs) / (cp * cs) * (ri[i] * ri[j] / (r * r) - 0.5 * dij) * D /
             (cp * phs + cs * php) -
         (cp * cp + cs * cs) / (cp * cp * cs * cs) * 0.5 * dij * std::log(r) +
         0.5 * dij * (std::log(cp * D + php) / (cp * cp) + std::log(cs * D + phs) / (cs * cs));
}

double kernel_v(int i, int j, const KernelArgs& a) {
  if (a.r == 0.0) throw DomainError("kernel_v is log-singular at r = 0");
  detail::VScalars s;
  detail::add_v_scalars(a.r * a.r, std::log(a.r), a.delta, 1.0, a.material, s);
  const double rh[2] = {a.r_vec.x / a.r, a.r_vec.y / a.r};
  const double dij = i == j ? 1.0 : 0.0;
  return s.d * (rh[i] * rh[j] - 0.5 * dij) + 0.5 * dij * s.e;
}

double kernel_v_primitive(int i, int j, const KernelArgs& a) {
  const Material& m = a.material;
  const double r = a.r, D = a.delta, u = r * r;
  double P = 0.0, B = 0.0;
  const double cs[2] = {m.c_p, m.c_s};
  for (int g = 0; g < 2; ++g) {
    const double c = cs[g], cd = c * D, c4 = c * c * c * c;
    if (r >= cd) continue;
    const double ph = phi_gamma(r, D, c), hat = phi_hat_gamma(r, D, c);
    const double A = (cd * ph * ph * ph / 4.0 - 0.375 * u * cd * ph + 0.375 * u * u * hat) /
                     (3.0 * c4 * u);
    P += g == 0 ? A : -A;
    B += ((0.5 * cd * cd + 0.25 * u) * hat - 0.75 * cd * ph) / c4;
  }
  const double F = -0.5 * P + 0.5 * B;
  const double rh[2] = {a.r_vec.x / r, a.r_vec.y / r};
  return (i == j ? F : 0.0) + P * rh[i] * rh[j];
}

namespace detail {

void w_contract(const WRadial& q, Vec2 rhat, Vec2 nx, Vec2 ny, const Material& m,
                double out[4]) {
  const double rh[2] = {rhat.x, rhat.y};
  const double n1[2] = {nx.x, nx.y};
  const double n2[2] = {ny.x, ny.y};
  double H[2][2][2][2];
  for (int k = 0; k < 2; ++k)
    for (int kp = 0; kp < 2; ++kp)
      for (int l = 0; l < 2; ++l)
        for (int lp = 0; lp < 2; ++lp) {
          const double dll = (l == lp) - rh[l] * rh[lp];
          double h = 0.0;
          if (k == kp) h += q.f2 * rh[l] * rh[lp] + q.f1 * dll;
          h += rh[k] * rh[kp] * (q.q2 * rh[l] * rh[lp] + q.q1 * dll);
          h += q.q1 * (rh[l] * ((lp == k) * rh[kp] + rh[k] * (lp == kp)) +
                       rh[lp] * ((l == k) * rh[kp] + rh[k] * (l == kp)));
          h += q.q0 * ((l == k) * (lp == kp) + (l == kp) * (lp == k));
          H[k][kp][l][lp] = h;
        }
  const double lam = m.lambda, mu = m.mu;
  double X[2][2][2];
  for (int i = 0; i < 2; ++i)
    for (int kp = 0; kp < 2; ++kp)
      for (int lp = 0; lp < 2; ++lp)
        X[i][kp][lp] = lam * n1[i] * (H[0][kp][0][lp] + H[1][kp][1][lp]) +
                       mu * (n1[0] * (H[i][kp][0][lp] + H[0][kp][i][lp]) +
                             n1[1] * (H[i][kp][1][lp] + H[1][kp][i][lp]));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out[2 * i + j] = -(lam * n2[j] * (X[i][0][0] + X[i][1][1]) +
                         mu * (n2[0] * (X[i][j][0] + X[i][0][j]) +
                               n2[1] * (X[i][j][1] + X[i][1][j])));
}

}  // namespace detail

double kernel_w(int i, int j, const KernelArgs& a, Vec2 n_x, Vec2 n_xi) {
  const Material& m = a.material;
  if (a.r == 0.0) throw DomainError("kernel_w is strongly singular at r = 0");
  if (a.r >= m.c_p * a.delta) return 0.0;
  const double u = a.r * a.r;
  detail::WRadial rad = detail::w_static_radial(u, m);
  const double h = 0.5 * a.delta * a.delta;
  rad.f1 *= h;
  rad.f2 *= h;
  rad.q0 *= h;
  rad.q1 *= h;
  rad.q2 *= h;
  detail::add_w_remainder(u, a.delta, 1.0, m, rad);
  double out[4];
  detail::w_contract(rad, (1.0 / a.r) * a.r_vec, n_x, n_xi, m, out);
  return out[2 * i + j];
}

namespace {

// Second time primitive of kernel_v by quadrature in time, independent of
// the closed form: int_0^D (D - s) nu^V(s) ds.
double primitive_by_quadrature(int i, int j, Vec2 rv, double D, const Material& m) {
  static const QuadRule g = gauss_legendre(48);
  const double r = norm(rv);
  double s0 = r / m.c_p, s1 = r / m.c_s;
  double total = 0.0;
  auto piece = [&](double a, double b) {
    // sqrt-type behaviour at the arrival time a
    double acc = 0.0;
    for (std::size_t q = 0; q < g.nodes.size(); ++q) {
      const double tau = g.nodes[q];
      const double s = a + (b - a) * tau * tau;
      const double w = g.weights[q] * 2.0 * (b - a) * tau;
      acc += w * (D - s) * kernel_v_general(i, j, make_kernel_args(rv, s, m));
    }
    return acc;
  };
  if (D > s0) total += piece(s0, std::min(D, s1));
  if (D > s1) total += piece(s1, D);
  return total;
}

}  // namespace

double traction_of_kernel_v_fd(int i, int j, const KernelArgs& a, Vec2 n_x, Vec2 n_xi,
                               double h, bool* unreliable) {
  const Material& m = a.material;
  const double reach = 2.0 * h;
  bool bad = a.r <= 4.0 * h || std::abs(a.r - m.c_p * a.delta) <= reach ||
             std::abs(a.r - m.c_s * a.delta) <= reach;
  if (unreliable) *unreliable = bad;
  if (a.r - reach >= m.c_p * a.delta) return 0.0;
  // Hessian of the primitive w.r.t. r_vec
  double G[2][2][2][2];
  const Vec2 e[2] = {{1.0, 0.0}, {0.0, 1.0}};
  for (int k = 0; k < 2; ++k)
    for (int kp = 0; kp < 2; ++kp)
      for (int l = 0; l < 2; ++l)
        for (int lp = 0; lp < 2; ++lp) {
          auto f = [&](double sl, double slp) {
            Vec2 rr = a.r_vec + (sl * h) * e[l] + (slp * h) * e[lp];
            return primitive_by_quadrature(k, kp, rr, a.delta, m);
          };
          G[k][kp][l][lp] = (f(1, 1) - f(1, -1) - f(-1, 1) + f(-1, -1)) / (4.0 * h * h);
        }
  const double nx[2] = {n_x.x, n_x.y}, ny[2] = {n_xi.x, n_xi.y};
  auto C = [&](int p, int q, int r, int s) {
    return m.lambda * (p == q) * (r == s) + m.mu * ((p == r) * (q == s) + (p == s) * (q == r));
  };
  // d/dxi = -d/dr
  double t = 0.0;
  for (int h1 = 0; h1 < 2; ++h1)
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l)
        for (int h2 = 0; h2 < 2; ++h2)
          for (int kp = 0; kp < 2; ++kp)
            for (int lp = 0; lp < 2; ++lp)
              t -= C(i, h1, k, l) * nx[h1] * C(j, h2, kp, lp) * ny[h2] * G[k][kp][l][lp];
  return t;
}

}  // namespace tdbem
