#include "tdbem/quadrature.h"

#include <algorithm>
#include <array>
#include <limits>
#include <memory>
#include <mutex>


namespace tdbem {

QuadRule gauss_legendre(int n) {
  if (n < 1 || n > 64) throw ParameterError("Gauss-Legendre order must lie in [1, 64]");
  QuadRule q;
  q.nodes.resize(n);
  q.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    q.nodes[i] = 0.5 * (1.0 - x);
    q.nodes[n - 1 - i] = 0.5 * (1.0 + x);
    q.weights[i] = q.weights[n - 1 - i] = 0.5 * w;
  }
  if (n % 2 == 1) q.nodes[n / 2] = 0.5;
  return q;
}

const QuadRule& gauss_legendre_cached(int n) {
  static std::array<std::unique_ptr<QuadRule>, 65> cache;
  static std::mutex mtx;
  if (n < 1 || n > 64) throw ParameterError("Gauss-Legendre order must lie in [1, 64]");
  std::lock_guard<std::mutex> lock(mtx);
  if (!cache[n]) cache[n] = std::make_unique<QuadRule>(gauss_legendre(n));
  return *cache[n];
}

SplitSegments split_at_wavefronts(Vec2 a, Vec2 b, Vec2 x, double delta, const Material& m) {
  const double L = norm(b - a);
  const Vec2 t = (1.0 / L) * (b - a);
  const double sp = dot(x - a, t);
  const double dp = std::abs(cross(t, x - a));
  std::vector<double> cuts = {0.0, L};
  for (double c : {m.c_s, m.c_p}) {
    const double R = c * delta;
    if (R <= dp) continue;
    const double h = std::sqrt((R - dp) * (R + dp));
    for (double s : {sp - h, sp + h})
      if (s > 0.0 && s < L) cuts.push_back(s);
  }
  std::sort(cuts.begin(), cuts.end());
  SplitSegments out;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    if (cuts[k + 1] - cuts[k] <= 1e-15 * L) continue;
    const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
    const WavefrontState w = wavefront_state(norm(x - (a + mid * t)), delta, m);
    Regime rg = w.s_active ? Regime::s_and_p : (w.p_active ? Regime::p_only : Regime::none);
    if (!out.pieces.empty() && out.pieces.back().regime == rg) out.pieces.back().s1 = cuts[k + 1];
    else out.pieces.push_back({cuts[k], cuts[k + 1], rg});
  }
  return out;
}

double Stencil::max_delta() const {
  double d = 0.0;
  for (int k = 0; k < terms; ++k) d = std::max(d, delta[k]);
  return d;
}

double Stencil::static_weight() const {
  double s = 0.0;
  for (int k = 0; k < terms; ++k) s += 0.5 * coef[k] * delta[k] * delta[k];
  return s;
}

Stencil block_stencil(int lag, double dt) {
  if (lag < 0) throw ParameterError("negative lag");
  Stencil s;
  s.delta[s.terms] = (lag + 1) * dt;
  s.coef[s.terms++] = 1.0;
  if (lag >= 1) {
    s.delta[s.terms] = lag * dt;
    s.coef[s.terms++] = -2.0;
  }
  if (lag >= 2) {
    s.delta[s.terms] = (lag - 1) * dt;
    s.coef[s.terms++] = 1.0;
  }
  return s;
}

Stencil single_delta(double delta) {
  Stencil s;
  if (delta > 0.0) {
    s.terms = 1;
    s.delta[0] = delta;
    s.coef[0] = 1.0;
  }
  return s;
}

QuadOptions QuadOptions::precise() {
  QuadOptions o;
  o.n_regular = 16;
  o.n_graded = 14;
  o.n_far = 12;
  o.sigma = 0.15;
  o.sigma_near = 0.5;
  o.depth = 1e-6;
  o.near_ratio = 2.0;
  o.far_ratio = 3.0;
  o.front_margin = 2.0;
  return o;
}

QuadOptions QuadOptions::refined() const {
  QuadOptions o = *this;
  o.n_regular = std::min(64, n_regular + 6);
  o.n_graded = std::min(64, n_graded + 6);
  o.n_far = std::min(64, n_far + 6);
  o.depth = depth * 1e-1;
  o.near_ratio = near_ratio * 1.5;
  o.far_ratio = far_ratio * 1.5;
  o.front_margin = front_margin * 1.5;
  return o;
}

QuadOptions QuadOptions::from_tol(double tol) {
  if (!(tol > 0.0)) throw ParameterError("quadrature tolerance must be positive");
  if (tol <= 1e-9) return precise();
  QuadOptions o;
  if (tol <= 1e-6) {
    o.n_regular = 8;
    o.n_graded = 8;
    o.n_far = 6;
    o.depth = 1e-4;
  }
  return o;
}

ElementData element_data(const BasisSpace& space, std::size_t e) {
  const BoundaryMesh& mesh = space.mesh;
  ElementData d;
  d.a = mesh.a(e);
  d.b = mesh.b(e);
  d.len = mesh.length(e);
  d.t = mesh.tangent(e);
  d.n = mesh.normal(e);
  d.degree = space.degree[e];
  d.shapes = &space.shapes[e];
  d.node_a = mesh.elements[e].first;
  d.node_b = mesh.elements[e].second;
  return d;
}

PairGeometry make_pair_geometry(const BasisSpace& test, std::size_t eo, const BasisSpace& trial,
                                std::size_t ei) {
  PairGeometry pg;
  pg.outer = element_data(test, eo);
  pg.inner = element_data(trial, ei);
  pg.coincident = eo == ei;
  if (!pg.coincident) {
    const int on[2] = {pg.outer.node_a, pg.outer.node_b};
    const int in[2] = {pg.inner.node_a, pg.inner.node_b};
    for (int p = 0; p < 2; ++p)
      for (int q = 0; q < 2; ++q)
        if (on[p] == in[q]) pg.shared.push_back({p, q});
  }
  return pg;
}

namespace {

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b, double* s_out) {
  const Vec2 d = b - a;
  const double L2 = dot(d, d);
  double s = std::clamp(dot(p - a, d) / L2, 0.0, 1.0);
  if (s_out) *s_out = s * std::sqrt(L2);
  return norm(p - (a + s * d));
}

bool segments_intersect(Vec2 a1, Vec2 b1, Vec2 a2, Vec2 b2) {
  const double d1 = cross(b1 - a1, a2 - a1), d2 = cross(b1 - a1, b2 - a1);
  const double d3 = cross(b2 - a2, a1 - a2), d4 = cross(b2 - a2, b1 - a2);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 &&
         d4 != 0;
}

}  // namespace

double segment_distance(Vec2 a1, Vec2 b1, Vec2 a2, Vec2 b2, double* s_first) {
  if (segments_intersect(a1, b1, a2, b2)) {
    if (s_first) {
      const Vec2 d1 = b1 - a1, d2 = b2 - a2;
      const double tt = cross(a2 - a1, d2) / cross(d1, d2);
      *s_first = tt * norm(d1);
    }
    return 0.0;
  }
  const double L1 = norm(b1 - a1);
  double best = std::numeric_limits<double>::infinity(), spos = 0.0, s;
  double d = point_segment_distance(a2, a1, b1, &s);
  if (d < best) best = d, spos = s;
  d = point_segment_distance(b2, a1, b1, &s);
  if (d < best) best = d, spos = s;
  d = point_segment_distance(a1, a2, b2, nullptr);
  if (d < best) best = d, spos = 0.0;
  d = point_segment_distance(b1, a2, b2, nullptr);
  if (d < best) best = d, spos = L1;
  if (s_first) *s_first = spos;
  return best;
}

void plan_interval(double L, const std::vector<double>& fronts,
                   const std::vector<std::pair<double, double>>& grades, int n_regular,
                   const QuadOptions& opt, std::vector<double>& nodes,
                   std::vector<double>& weights, std::vector<double>* anchors,
                   std::vector<double>* deltas) {
  nodes.clear();
  weights.clear();
  if (anchors) anchors->clear();
  if (deltas) deltas->clear();
  const double tiny = 1e-13 * L;
  struct Cut {
    double pos;
    bool front;
    bool grade;
    double scale;
  };
  std::vector<Cut> cuts = {{0.0, false, false, 0.0}, {L, false, false, 0.0}};
  for (double f : fronts)
    if (f > -tiny && f < L + tiny) cuts.push_back({std::clamp(f, 0.0, L), true, false, 0.0});
  for (const auto& g : grades)
    if (g.first > -tiny && g.first < L + tiny)
      cuts.push_back({std::clamp(g.first, 0.0, L), false, true, g.second});
  std::sort(cuts.begin(), cuts.end(), [](const Cut& x, const Cut& y) { return x.pos < y.pos; });
  std::vector<Cut> merged;
  for (const Cut& c : cuts) {
    if (!merged.empty() && c.pos - merged.back().pos <= tiny) {
      Cut& mc = merged.back();
      mc.front = mc.front || c.front;
      if (c.grade) {
        mc.scale = mc.grade ? std::min(mc.scale, c.scale) : c.scale;
        mc.grade = true;
        if (mc.pos != 0.0 && mc.pos != L) mc.pos = c.pos;
      }
    } else {
      merged.push_back(c);
    }
  }
  merged.front().pos = 0.0;
  merged.back().pos = L;

  const QuadRule& gr = gauss_legendre_cached(std::clamp(n_regular, 1, 64));
  const QuadRule& gg = gauss_legendre_cached(std::clamp(opt.n_graded, 1, 64));

  auto emit = [&](double anchor, double delta, double w) {
    nodes.push_back(anchor + delta);
    weights.push_back(w);
    if (anchors) anchors->push_back(anchor);
    if (deltas) deltas->push_back(delta);
  };
  // Gauss rule on [anchor + lo, anchor + hi]
  auto rel = [&](double anchor, double lo, double hi, const QuadRule& q) {
    for (std::size_t k = 0; k < q.nodes.size(); ++k)
      emit(anchor, lo + (hi - lo) * q.nodes[k], (hi - lo) * q.weights[k]);
  };
  // square-root behaviour at z, z <= a (left) or z >= b (right)
  auto sqrt_map = [&](double a, double b, double z, bool left) {
    const double ua = std::sqrt(std::max(0.0, left ? a - z : z - b));
    const double ub = std::sqrt(std::max(0.0, left ? b - z : z - a));
    for (std::size_t k = 0; k < gr.nodes.size(); ++k) {
      const double u = ua + (ub - ua) * gr.nodes[k];
      const double w = gr.weights[k] * (ub - ua) * 2.0 * u;
      const double x = left ? z + u * u : z - u * u;
      emit(a, x - a, w);
    }
  };
  // geometric layers toward the special end; an exact singularity gets a
  // polynomially mapped innermost piece
  auto graded = [&](double a, double b, double scale, bool left) {
    const double len = b - a;
    const double anchor = left ? a : b;
    const double sg = left ? 1.0 : -1.0;
    // near-singular points are resolved down to their distance
    const bool exact = scale <= 0.0;
    const double stop = exact ? opt.depth * L : scale;
    const double ratio = exact ? opt.sigma : opt.sigma_near;
    double outer = len;
    while ((exact ? outer * ratio > stop : outer > stop) && outer > 0.0) {
      const double inner = outer * ratio;
      if (left) rel(anchor, inner, outer, gg);
      else rel(anchor, -outer, -inner, gg);
      outer = inner;
    }
    if (!exact) {
      if (left) rel(anchor, 0.0, outer, gg);
      else rel(anchor, -outer, 0.0, gg);
      return;
    }
    for (std::size_t k = 0; k < gg.nodes.size(); ++k) {
      const double u = gg.nodes[k], u3 = u * u * u;
      emit(anchor, sg * outer * u3 * u, gg.weights[k] * outer * 4.0 * u3);
    }
  };
  // end treatment: 0 none, 1 grade, 2 exact front, 3 virtual front
  struct End {
    int type = 0;
    double z = 0.0;
    double scale = 0.0;
  };
  auto left_end = [&](std::size_t j, double len) {
    End e;
    const Cut& c = merged[j];
    if (c.grade) return End{1, c.pos, c.scale};
    if (c.front) return End{2, c.pos, 0.0};
    double best = -std::numeric_limits<double>::infinity();
    for (double f : fronts)
      if (f < c.pos - tiny && f > best) best = f;
    if (c.pos - best < len) e = {3, best, 0.0};
    return e;
  };
  auto right_end = [&](std::size_t j, double len) {
    End e;
    const Cut& c = merged[j];
    if (c.grade) return End{1, c.pos, c.scale};
    if (c.front) return End{2, c.pos, 0.0};
    double best = std::numeric_limits<double>::infinity();
    for (double f : fronts)
      if (f > c.pos + tiny && f < best) best = f;
    if (best - c.pos < len) e = {3, best, 0.0};
    return e;
  };
  auto one_sided = [&](double a, double b, End e, bool left) {
    switch (e.type) {
      case 0: rel(a, 0.0, b - a, gr); break;
      case 1:
        if (e.scale >= (b - a)) rel(a, 0.0, b - a, gr);
        else graded(a, b, e.scale, left);
        break;
      default: sqrt_map(a, b, e.z, left); break;
    }
  };

  for (std::size_t j = 0; j + 1 < merged.size(); ++j) {
    const double a = merged[j].pos, b = merged[j + 1].pos;
    const double len = b - a;
    if (len <= 0.0) continue;
    End el = left_end(j, len), er = right_end(j + 1, len);
    if (el.type != 0 && er.type != 0) {
      const double mid = 0.5 * (a + b);
      one_sided(a, mid, el, true);
      one_sided(mid, b, er, false);
    } else if (er.type != 0) {
      one_sided(a, b, er, false);
    } else {
      one_sided(a, b, el, true);
    }
  }
}

namespace {

// shape values of an element at arclength s
inline void shape_values(const ElementData& e, double s, double* out) {
  e.shapes->values(s / e.len, out);
}

// f.p. int_0^L N(s) / (s - s0)^2 ds for every shape N of the element
void hadamard_coincident(const ElementData& e, double s0, double l, double* out) {
  const int p = e.degree;
  const double L = e.len;
  double I[16];
  I[0] = -1.0 / l - 1.0 / s0;
  if (p >= 1) I[1] = std::log(l / s0);
  for (int k = 2; k <= p; ++k) I[k] = (std::pow(l, k - 1) - std::pow(-s0, k - 1)) / (k - 1);
  for (int b = 0; b <= p; ++b) {
    const double* a = &e.shapes->coeffs[b * (p + 1)];
    double v = 0.0;
    for (int k = 0; k <= p; ++k) {
      // Taylor coefficient of N_b at s0 of order k
      double ck = 0.0, binom = 1.0;
      for (int mm = k; mm <= p; ++mm) {
        if (mm > k) binom = binom * mm / (mm - k);
        ck += a[mm] * binom * std::pow(s0, mm - k) / std::pow(L, mm);
      }
      v += ck * I[k];
    }
    out[b] = v;
  }
}

// int_0^inf T_static(e_x - tau e_xi) dtau, the 1/d coefficient of the inner
// integral near a shared vertex. The static kernel is T(rhat) / |r|^2, and
// along the ray d theta = sin(alpha) dtau / |r|^2, so the integral becomes a
// trigonometric polynomial over the swept angle.
void vertex_static_coefficient(Vec2 ex, Vec2 exi, Vec2 nx, Vec2 nxi, const Material& m,
                               double out[4]) {
  const double sn = cross(ex, exi);
  if (std::abs(sn) < 1e-13 && dot(ex, exi) < 0.0) {
    detail::w_contract(detail::w_static_radial(1.0, m), ex, nx, nxi, m, out);
    return;
  }
  const Vec2 end = -1.0 * exi;
  const double th0 = std::atan2(ex.y, ex.x);
  const double sweep = std::atan2(cross(ex, end), dot(ex, end));
  const QuadRule& q = gauss_legendre_cached(24);
  const detail::WRadial unit = detail::w_static_radial(1.0, m);
  for (int c = 0; c < 4; ++c) out[c] = 0.0;
  for (std::size_t k = 0; k < q.nodes.size(); ++k) {
    const double th = th0 + sweep * q.nodes[k];
    double v[4];
    detail::w_contract(unit, {std::cos(th), std::sin(th)}, nx, nxi, m, v);
    for (int c = 0; c < 4; ++c) out[c] += q.weights[k] * std::abs(sweep) * v[c];
  }
  for (int c = 0; c < 4; ++c) out[c] /= std::abs(sn);
}

struct Workspace {
  std::vector<double> on, ow, in_, iw, oa, od, ia, id;
  std::vector<double> F;
  std::vector<double> fronts;
  std::vector<std::pair<double, double>> grades;
};

// Kernel sum at r_vec: writes 4 entries (row-major 2x2).
// With external_static the static part is integrated elsewhere over the whole
// element, so points outside every front still carry the remainder.
inline void kernel_sum(KernelKind kind, Vec2 rv, const Stencil& st, double static_weight,
                       const Material& m, Vec2 nx, Vec2 nxi, double K[4],
                       bool external_static = false) {
  const double u = dot(rv, rv);
  const double r = std::sqrt(u);
  const Vec2 rh = (1.0 / r) * rv;
  if (kind == KernelKind::single_layer) {
    detail::VScalars s;
    const double lr = std::log(r);
    for (int k = 0; k < st.terms; ++k) detail::add_v_scalars(u, lr, st.delta[k], st.coef[k], m, s);
    K[0] = s.d * (rh.x * rh.x - 0.5) + 0.5 * s.e;
    K[1] = K[2] = s.d * rh.x * rh.y;
    K[3] = s.d * (rh.y * rh.y - 0.5) + 0.5 * s.e;
    return;
  }
  detail::WRadial rad;
  bool any = external_static;
  for (int k = 0; k < st.terms; ++k)
    if (r < m.c_p * st.delta[k]) any = true;
  if (!any) {
    K[0] = K[1] = K[2] = K[3] = 0.0;
    return;
  }
  if (static_weight != 0.0) {
    rad = detail::w_static_radial(u, m);
    rad.f1 *= static_weight;
    rad.f2 *= static_weight;
    rad.q0 *= static_weight;
    rad.q1 *= static_weight;
    rad.q2 *= static_weight;
  }
  for (int k = 0; k < st.terms; ++k) detail::add_w_remainder(u, st.delta[k], st.coef[k], m, rad);
  detail::w_contract(rad, rh, nx, nxi, m, K);
}

void add_line_fronts(double s_proj, double dperp, const Stencil& st, const Material& m,
                     std::vector<double>& fronts) {
  for (int k = 0; k < st.terms; ++k)
    for (double c : {m.c_p, m.c_s}) {
      const double R = c * st.delta[k];
      if (R <= dperp) continue;
      const double h = std::sqrt((R - dperp) * (R + dperp));
      fronts.push_back(s_proj - h);
      fronts.push_back(s_proj + h);
    }
}

}  // namespace

void integrate_pair(KernelKind kind, const PairGeometry& pg, const Stencil& st, const Material& m,
                    const QuadOptions& opt, std::vector<double>& out) {
  const ElementData& eo = pg.outer;
  const ElementData& ei = pg.inner;
  const int no = eo.degree + 1, ni = ei.degree + 1;
  out.assign(4 * no * ni, 0.0);
  if (st.terms == 0) return;
  const bool hyper = kind == KernelKind::hypersingular;
  const double Lmax = std::max(eo.len, ei.len);

  double s_close = 0.0;
  const double r_min = pg.coincident ? 0.0 : segment_distance(eo.a, eo.b, ei.a, ei.b, &s_close);
  if (r_min >= m.c_p * st.max_delta()) return;
  double r_max = 0.0;
  for (Vec2 p : {eo.a, eo.b})
    for (Vec2 q : {ei.a, ei.b}) r_max = std::max(r_max, norm(p - q));

  const bool touching = pg.coincident || !pg.shared.empty();
  bool fast = !touching && r_min >= opt.far_ratio * Lmax;
  if (fast) {
    for (int k = 0; k < st.terms && fast; ++k)
      for (double c : {m.c_p, m.c_s}) {
        const double R = c * st.delta[k];
        if (R > r_min && R < r_max + opt.front_margin * Lmax) fast = false;
      }
  }

  double Ko[4];
  double sv_o[16], sv_i[16];
  if (fast) {
    const int n = std::min(64, std::max(opt.n_far, (std::max(eo.degree, ei.degree) + 1) / 2 + 3));
    const QuadRule& q = gauss_legendre_cached(n);
    for (int a = 0; a < n; ++a) {
      const double so = eo.len * q.nodes[a];
      const Vec2 x = eo.a + so * eo.t;
      shape_values(eo, so, sv_o);
      for (int b = 0; b < n; ++b) {
        const double si = ei.len * q.nodes[b];
        const Vec2 xi = ei.a + si * ei.t;
        kernel_sum(kind, x - xi, st, hyper ? st.static_weight() : 0.0, m, eo.n, ei.n, Ko);
        shape_values(ei, si, sv_i);
        const double w = q.weights[a] * q.weights[b] * eo.len * ei.len;
        for (int c = 0; c < 4; ++c) {
          if (!hyper && c == 2) continue;
          const double kc = w * Ko[c];
          for (int ia = 0; ia < no; ++ia) {
            double* row = &out[(c * no + ia) * ni];
            const double kv = kc * sv_o[ia];
            for (int ib = 0; ib < ni; ++ib) row[ib] += kv * sv_i[ib];
          }
        }
      }
    }
    if (!hyper)
      for (int i = 0; i < no * ni; ++i) out[2 * no * ni + i] = out[1 * no * ni + i];
    return;
  }

  thread_local Workspace ws;
  const int n_reg_o = std::max(opt.n_regular, eo.degree + 3);
  const int n_reg_i = std::max(opt.n_regular, ei.degree + 3);
  const double st_sum = st.static_weight();
  const bool finite_part = hyper && st_sum != 0.0 && touching;

  // outer plan
  ws.fronts.clear();
  ws.grades.clear();
  for (int k = 0; k < st.terms; ++k)
    for (double c : {m.c_p, m.c_s}) {
      const double R = c * st.delta[k];
      for (Vec2 P : {ei.a, ei.b}) {
        const double sp = dot(P - eo.a, eo.t);
        const double dp = std::abs(cross(eo.t, P - eo.a));
        if (R > dp) {
          const double h = std::sqrt((R - dp) * (R + dp));
          ws.fronts.push_back(sp - h);
          ws.fronts.push_back(sp + h);
        }
      }
      const double sn = cross(ei.t, eo.t);
      if (std::abs(sn) > 1e-12) {
        const double d0 = cross(ei.t, eo.a - ei.a);
        for (double sgn : {-1.0, 1.0}) {
          const double so = (sgn * R - d0) / sn;
          const Vec2 x = eo.a + so * eo.t;
          const double foot = dot(x - ei.a, ei.t);
          if (foot > 0.0 && foot < ei.len) ws.fronts.push_back(so);
        }
      }
    }
  if (pg.coincident) {
    ws.grades.push_back({0.0, 0.0});
    ws.grades.push_back({eo.len, 0.0});
  } else if (!pg.shared.empty()) {
    for (auto sh : pg.shared) ws.grades.push_back({sh.first == 0 ? 0.0 : eo.len, 0.0});
  } else if (r_min < opt.near_ratio * eo.len) {
    ws.grades.push_back({s_close, r_min});
  }
  plan_interval(eo.len, ws.fronts, ws.grades, n_reg_o, opt, ws.on, ws.ow, &ws.oa, &ws.od);

  // finite-part data at singular outer ends
  struct SingEnd {
    double pos;                  // arclength of the end on the outer element
    std::vector<double> A;       // [c * ni + b]
  };
  std::vector<SingEnd> sing;
  double S[4] = {0, 0, 0, 0};
  if (finite_part) {
    detail::w_contract(detail::w_static_radial(1.0, m), ei.t, ei.n, ei.n, m, S);
    if (pg.coincident) {
      for (int end = 0; end < 2; ++end) {
        SingEnd se{end == 0 ? 0.0 : eo.len, std::vector<double>(4 * ni)};
        shape_values(ei, se.pos, sv_i);
        for (int c = 0; c < 4; ++c)
          for (int b = 0; b < ni; ++b) se.A[c * ni + b] = -st_sum * S[c] * sv_i[b];
        sing.push_back(std::move(se));
      }
    } else {
      for (auto sh : pg.shared) {
        const Vec2 ex = sh.first == 0 ? eo.t : -1.0 * eo.t;
        const Vec2 exi = sh.second == 0 ? ei.t : -1.0 * ei.t;
        double J[4];
        vertex_static_coefficient(ex, exi, eo.n, ei.n, m, J);
        SingEnd se{sh.first == 0 ? 0.0 : eo.len, std::vector<double>(4 * ni)};
        shape_values(ei, sh.second == 0 ? 0.0 : ei.len, sv_i);
        for (int c = 0; c < 4; ++c)
          for (int b = 0; b < ni; ++b) se.A[c * ni + b] = st_sum * J[c] * sv_i[b];
        sing.push_back(std::move(se));
      }
    }
  }

  ws.F.assign(4 * ni, 0.0);
  const double hfp_weight = (hyper && pg.coincident) ? st_sum : 0.0;
  const double kernel_static_weight = (hyper && !pg.coincident) ? st_sum : 0.0;
  for (std::size_t q = 0; q < ws.on.size(); ++q) {
    const double so = ws.on[q];
    const double ao = ws.oa[q], dlo = ws.od[q];
    // anchor point plus a small offset keeps positions accurate next to cuts
    const Vec2 xo_anchor = ao == 0.0 ? eo.a : (ao == eo.len ? eo.b : eo.a + ao * eo.t);
    const Vec2 x = xo_anchor + dlo * eo.t;
    std::fill(ws.F.begin(), ws.F.end(), 0.0);

    // inner plan
    ws.fronts.clear();
    ws.grades.clear();
    const double sp = dot(x - ei.a, ei.t);
    const double dp = pg.coincident ? 0.0 : std::abs(cross(ei.t, x - ei.a));
    add_line_fronts(sp, dp, st, m, ws.fronts);
    if (pg.coincident) {
      ws.grades.push_back({so, 0.0});
    } else {
      const double sc = std::clamp(sp, 0.0, ei.len);
      const double dist = norm(x - (ei.a + sc * ei.t));
      if (dist < opt.near_ratio * ei.len) ws.grades.push_back({sc, dist});
    }
    plan_interval(ei.len, ws.fronts, ws.grades, n_reg_i, opt, ws.in_, ws.iw, &ws.ia, &ws.id);

    for (std::size_t k = 0; k < ws.in_.size(); ++k) {
      const double si = ws.in_[k];
      const double ai = ws.ia[k], dli = ws.id[k];
      Vec2 rv;
      if (pg.coincident) {
        double diff;
        if (ai == so) diff = -dli;
        else if (ai == ao) diff = dlo - dli;
        else diff = so - si;
        rv = diff * ei.t;
      } else {
        const Vec2 xi_anchor = ai == 0.0 ? ei.a : (ai == ei.len ? ei.b : ei.a + ai * ei.t);
        rv = (xo_anchor - xi_anchor) + (dlo * eo.t - dli * ei.t);
      }
      if (rv.x == 0.0 && rv.y == 0.0) continue;
      kernel_sum(kind, rv, st, kernel_static_weight, m, eo.n, ei.n, Ko, hfp_weight != 0.0);
      shape_values(ei, si, sv_i);
      const double w = ws.iw[k];
      for (int c = 0; c < 4; ++c) {
        if (!hyper && c == 2) continue;
        const double kc = w * Ko[c];
        double* Fc = &ws.F[c * ni];
        for (int b = 0; b < ni; ++b) Fc[b] += kc * sv_i[b];
      }
    }
    if (!hyper)
      for (int b = 0; b < ni; ++b) ws.F[2 * ni + b] = ws.F[ni + b];
    if (hfp_weight != 0.0) {
      double hv[16];
      const double s0 = ao == 0.0 ? dlo : so;
      const double l = ao == eo.len ? -dlo : eo.len - so;
      hadamard_coincident(ei, s0, l, hv);
      for (int c = 0; c < 4; ++c)
        for (int b = 0; b < ni; ++b) ws.F[c * ni + b] += hfp_weight * S[c] * hv[b];
    }

    shape_values(eo, so, sv_o);
    const double wq = ws.ow[q];
    for (int c = 0; c < 4; ++c)
      for (int a = 0; a < no; ++a) {
        double* row = &out[(c * no + a) * ni];
        const double wa = wq * sv_o[a];
        for (int b = 0; b < ni; ++b) row[b] += wa * ws.F[c * ni + b];
      }
    for (const SingEnd& se : sing) {
      const double d = ao == se.pos ? std::abs(dlo) : std::abs(so - se.pos);
      double sv_end[16];
      shape_values(eo, se.pos, sv_end);
      for (int c = 0; c < 4; ++c)
        for (int a = 0; a < no; ++a) {
          double* row = &out[(c * no + a) * ni];
          const double wa = wq * sv_end[a] / d;
          for (int b = 0; b < ni; ++b) row[b] -= wa * se.A[c * ni + b];
        }
    }
  }
  // analytic outer finite part of the subtracted 1/d terms
  for (const SingEnd& se : sing) {
    double sv_end[16];
    shape_values(eo, se.pos, sv_end);
    const double lg = std::log(eo.len);
    for (int c = 0; c < 4; ++c)
      for (int a = 0; a < no; ++a)
        for (int b = 0; b < ni; ++b)
          out[(c * no + a) * ni + b] += sv_end[a] * se.A[c * ni + b] * lg;
  }
}

namespace {

PairIntegral single_entry(KernelKind kind, const PairGeometry& pg, int a, int b, int i, int j,
                          double delta, const Material& m, double tol) {
  const int no = pg.outer.degree + 1, ni = pg.inner.degree + 1;
  if (a < 0 || a >= no || b < 0 || b >= ni || i < 0 || i > 1 || j < 0 || j > 1)
    throw std::out_of_range("pair integral index out of range");
  const Stencil st = single_delta(delta);
  QuadOptions opt = QuadOptions::from_tol(tol);
  std::vector<double> v1, v2;
  const int c = 2 * i + j;
  integrate_pair(kind, pg, st, m, opt, v1);
  double prev = v1[(c * no + a) * ni + b];
  for (int level = 0; level < 3; ++level) {
    opt = opt.refined();
    integrate_pair(kind, pg, st, m, opt, v2);
    const double cur = v2[(c * no + a) * ni + b];
    const double err = std::abs(cur - prev);
    if (err <= tol * (1.0 + std::abs(cur))) return {cur, err};
    prev = cur;
  }
  throw AccuracyError("pair integral did not reach the requested tolerance", prev);
}

}  // namespace

PairIntegral integrate_pair_v(const PairGeometry& pg, int a, int b, int i, int j, double delta,
                              const Material& m, double tol) {
  return single_entry(KernelKind::single_layer, pg, a, b, i, j, delta, m, tol);
}

PairIntegral integrate_pair_w(const PairGeometry& pg, int a, int b, int i, int j, double delta,
                              const Material& m, double tol) {
  return single_entry(KernelKind::hypersingular, pg, a, b, i, j, delta, m, tol);
}

}  // namespace tdbem
