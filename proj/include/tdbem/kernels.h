#pragma once

#include "tdbem/core_model.h"

namespace tdbem {

struct KernelArgs {
  Vec2 r_vec;
  double r = 0.0;
  double delta = 0.0;
  Material material;
};

KernelArgs make_kernel_args(Vec2 r_vec, double delta, const Material& m);

struct WavefrontState {
  bool s_active = false;
  bool p_active = false;
};

// Fronts exactly at r = c*delta count as not yet arrived.
WavefrontState wavefront_state(double r, double delta, const Material& m);

// G_ij(x, xi; t, tau) for r_vec = x - xi and elapsed time t - tau.
double fundamental_solution(int i, int j, Vec2 r_vec, double elapsed, const Material& m);

double phi_gamma(double r, double delta, double c);
double phi_hat_gamma(double r, double delta, double c);

// Time-integrated single-layer kernel, scaled by 2*pi*rho.
double kernel_v(int i, int j, const KernelArgs& a);
double kernel_v_general(int i, int j, const KernelArgs& a);
double kernel_v_reduced(int i, int j, const KernelArgs& a);

// Hypersingular kernel for the ramp-in-time basis, scaled by 2*pi*rho:
// the traction operator applied in x and in xi to the second time primitive
// of G. n_x and n_xi are the unit normals at x and xi.
double kernel_w(int i, int j, const KernelArgs& a, Vec2 n_x, Vec2 n_xi);

// Second time primitive of nu^V (third of G, scaled by 2*pi*rho), closed form.
double kernel_v_primitive(int i, int j, const KernelArgs& a);

// Test oracle for kernel_w: central differences of the numerically
// time-integrated kernel_v, contracted with the Hooke tensor and both normals.
double traction_of_kernel_v_fd(int i, int j, const KernelArgs& a, Vec2 n_x, Vec2 n_xi,
                               double step, bool* unreliable = nullptr);

namespace detail {

// nu^V = d (rhat rhat^T - I/2) + e I/2
struct VScalars {
  double d = 0.0;
  double e = 0.0;
};

inline void add_v_scalars(double u, double log_r, double delta, double coef, const Material& m,
                          VScalars& out) {
  const double cp = m.c_p, cs = m.c_s;
  const double Rp = cp * delta, Rs = cs * delta;
  if (u >= Rp * Rp) return;
  const double php = std::sqrt(Rp * Rp - u);
  if (u < Rs * Rs) {
    const double phs = std::sqrt(Rs * Rs - u);
    out.d += coef * (cp * cp - cs * cs) / (cp * cs) * delta / (cp * phs + cs * php);
    out.e += coef * ((std::log(php + Rp) - log_r) / (cp * cp) +
                     (std::log(phs + Rs) - log_r) / (cs * cs));
  } else {
    out.d += coef * delta * php / (cp * u);
    out.e += coef * (std::log(php + Rp) - log_r) / (cp * cp);
  }
}

// Radial data of a kernel built from F(r) I + Q(r) r r^T:
// f1 = F'/r, f2 = F'', q0 = Q, q1 = r Q', q2 = r^2 Q''.
struct WRadial {
  double f1 = 0.0, f2 = 0.0, q0 = 0.0, q1 = 0.0, q2 = 0.0;
};

// Static radial data; the full kernel is (delta^2 / 2) * static + remainder.
inline WRadial w_static_radial(double u, const Material& m) {
  const double ip = 1.0 / (m.c_p * m.c_p), is = 1.0 / (m.c_s * m.c_s);
  const double kap = 0.5 * (ip + is), ap = 0.5 * (is - ip);
  return {-kap / u, kap / u, ap / u, -2.0 * ap / u, 6.0 * ap / u};
}

// Remainder radial data, accumulated with weight coef. Written in
// w = a + sqrt(a^2 - u), a = c delta, so it stays stable as u -> 0.
inline void add_w_remainder(double u, double delta, double coef, const Material& m, WRadial& out) {
  const double cs[2] = {m.c_p, m.c_s};
  const double sg[2] = {1.0, -1.0};
  for (int g = 0; g < 2; ++g) {
    const double c = cs[g], s = sg[g], a = c * delta, a2 = a * a;
    const double c4 = c * c * c * c;
    if (u < a2) {
      const double w = std::sqrt(a2 - u) + a;
      const double w2 = w * w;
      const double z = (u + w2) / (c4 * w2 * w2);
      const double lg = std::log(w / std::sqrt(u)) / (8.0 * c4);
      out.f1 += coef * (-z * (s * u + (3.0 * s - 12.0) * w2) / 96.0 + (2.0 - s) * lg);
      out.f2 += coef * (z * (s * u + (3.0 * s - 4.0) * w2) / 32.0 + (2.0 - s) * lg);
      out.q0 += coef * s * (-z * (u - 9.0 * w2) / 96.0 + lg);
      out.q1 += coef * s * z * (u - 3.0 * w2) / 24.0;
      out.q2 -= coef * s * z * (5.0 * u - 3.0 * w2) / 24.0;
    } else {
      const double k = coef * a2 / (c4 * u * u);
      out.f1 -= k * (a2 * s - 3.0 * u) / 12.0;
      out.f2 -= k * (u - a2 * s) / 4.0;
      out.q0 -= k * s * (a2 - 3.0 * u) / 12.0;
      out.q1 -= k * s * (3.0 * u - 2.0 * a2) / 6.0;
      out.q2 -= k * s * (10.0 * a2 - 9.0 * u) / 6.0;
    }
  }
}

// -C C n_x n_xi applied to the Hessian of F I + Q r r^T; out is row-major 2x2.
void w_contract(const WRadial& rad, Vec2 rhat, Vec2 n_x, Vec2 n_xi, const Material& m,
                double out[4]);

}  // namespace detail

}  // namespace tdbem
