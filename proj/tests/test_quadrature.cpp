#include <doctest.h>

#include <algorithm>
#include <random>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "tdbem/quadrature.h"

using namespace tdbem;

namespace {

const Material kMat = make_material(2.0, 1.0, 1.0);

const ShapeSet& shapes_of(int p) {
  static std::vector<ShapeSet> cache = [] {
    std::vector<ShapeSet> v;
    for (int k = 0; k <= 4; ++k) v.push_back(lagrange_shapes(k));
    return v;
  }();
  return cache[p];
}

ElementData element(Vec2 a, Vec2 b, int p, int na, int nb) {
  ElementData e;
  e.a = a;
  e.b = b;
  e.len = norm(b - a);
  e.t = (1.0 / e.len) * (b - a);
  e.n = {-e.t.y, e.t.x};
  e.degree = p;
  e.shapes = &shapes_of(p);
  e.node_a = na;
  e.node_b = nb;
  return e;
}

PairGeometry pair(const ElementData& o, const ElementData& i, bool coincident) {
  PairGeometry pg;
  pg.outer = o;
  pg.inner = i;
  pg.coincident = coincident;
  if (!coincident) {
    const int on[2] = {o.node_a, o.node_b}, in[2] = {i.node_a, i.node_b};
    for (int p = 0; p < 2; ++p)
      for (int q = 0; q < 2; ++q)
        if (on[p] == in[q]) pg.shared.push_back({p, q});
  }
  return pg;
}

// Brute-force reference: nested tanh-sinh, split by hand at every point
// where the integrand or the inner integral loses smoothness.
struct Oracle {
  const PairGeometry& pg;
  int a, b, i, j;
  double delta;
  boost::math::quadrature::tanh_sinh<double> ts{15};

  double shape(const ElementData& e, int k, double s) const { return e.shapes->value(k, s / e.len); }

  double inner(Vec2 x) {
    const ElementData& e = pg.inner;
    std::vector<double> cuts = {0.0, e.len};
    const double sp = dot(x - e.a, e.t);
    const double dp = std::abs(cross(e.t, x - e.a));
    cuts.push_back(sp);
    for (double c : {kMat.c_s, kMat.c_p}) {
      const double R = c * delta;
      if (R > dp) {
        const double h = std::sqrt(R * R - dp * dp);
        cuts.push_back(sp - h);
        cuts.push_back(sp + h);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    auto f = [&](double s) {
      const Vec2 r = x - (e.a + s * e.t);
      if (norm(r) == 0.0) return 0.0;
      return shape(e, b, s) * kernel_v(i, j, make_kernel_args(r, delta, kMat));
    };
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double s0 = std::max(cuts[k], 0.0), s1 = std::min(cuts[k + 1], e.len);
      if (s1 - s0 <= 1e-14) continue;
      total += ts.integrate(f, s0, s1, 1e-13);
    }
    return total;
  }

  double value() {
    const ElementData& o = pg.outer;
    const ElementData& e = pg.inner;
    std::vector<double> cuts = {0.0, o.len};
    const double k = cross(e.t, o.t);
    const double d0 = cross(e.t, o.a - e.a);
    for (double c : {kMat.c_s, kMat.c_p}) {
      const double R = c * delta;
      // front through an inner end point
      for (Vec2 q : {e.a, e.b}) {
        const double sp = dot(q - o.a, o.t), dp = cross(o.t, q - o.a);
        if (R > std::abs(dp)) {
          const double h = std::sqrt(R * R - dp * dp);
          cuts.push_back(sp - h);
          cuts.push_back(sp + h);
        }
      }
      // front tangent to the inner line
      if (std::abs(k) > 1e-14)
        for (double sg : {-1.0, 1.0}) cuts.push_back((sg * R - d0) / k);
    }
    // projections of the inner end points
    for (Vec2 q : {e.a, e.b}) cuts.push_back(dot(q - o.a, o.t));
    std::sort(cuts.begin(), cuts.end());
    auto g = [&](double s) { return shape(o, a, s) * inner(o.a + s * o.t); };
    double total = 0.0;
    for (std::size_t q = 0; q + 1 < cuts.size(); ++q) {
      const double s0 = std::max(cuts[q], 0.0), s1 = std::min(cuts[q + 1], o.len);
      if (s1 - s0 <= 1e-14) continue;
      total += ts.integrate(g, s0, s1, 1e-12);
    }
    return total;
  }
};

}  // namespace

TEST_SUITE("quadrature") {

TEST_CASE("Gauss-Legendre rules") {
  const QuadRule q = gauss_legendre(3);
  CHECK(q.nodes[1] == doctest::Approx(0.5));
  CHECK(q.nodes[0] == doctest::Approx(0.5 - 0.5 * std::sqrt(0.6)).epsilon(1e-15));
  CHECK(q.weights[0] == doctest::Approx(5.0 / 18.0).epsilon(1e-15));
  for (int n : {1, 4, 10, 32, 64}) {
    const QuadRule& r = gauss_legendre_cached(n);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0.0;
      for (int m = 0; m < n; ++m) s += r.weights[m] * std::pow(r.nodes[m], k);
      CHECK(std::abs(s - 1.0 / (k + 1)) <= 1e-14);
    }
  }
  CHECK_THROWS_AS(gauss_legendre(0), ParameterError);
  CHECK_THROWS_AS(gauss_legendre(65), ParameterError);
}

TEST_CASE("split at the fronts: example") {
  const Material m = material_from_speeds(1.6, 1.0, 1.0);
  const SplitSegments s = split_at_wavefronts({0, 0}, {1, 0}, {0, 0}, 0.5, m);
  REQUIRE(s.pieces.size() == 3u);
  CHECK(s.pieces[0].s1 == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s.pieces[1].s1 == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(s.pieces[0].regime == Regime::s_and_p);
  CHECK(s.pieces[1].regime == Regime::p_only);
  CHECK(s.pieces[2].regime == Regime::none);
}

TEST_CASE("split regimes match the fronts at every quadrature node") {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const QuadRule& q = gauss_legendre_cached(12);
  for (int trial = 0; trial < 200; ++trial) {
    const Vec2 a{u(rng), u(rng)}, b{u(rng), u(rng)}, x{u(rng), u(rng)};
    const double D = 0.05 + std::abs(u(rng));
    const SplitSegments s = split_at_wavefronts(a, b, x, D, kMat);
    const Vec2 t = (1.0 / norm(b - a)) * (b - a);
    REQUIRE_FALSE(s.pieces.empty());
    CHECK(s.pieces.front().s0 == 0.0);
    CHECK(s.pieces.back().s1 == doctest::Approx(norm(b - a)));
    for (const SplitPiece& p : s.pieces)
      for (double node : q.nodes) {
        const double sp = p.s0 + node * (p.s1 - p.s0);
        const WavefrontState w = wavefront_state(norm(x - (a + sp * t)), D, kMat);
        const Regime r = w.s_active ? Regime::s_and_p : (w.p_active ? Regime::p_only : Regime::none);
        CHECK(r == p.regime);
      }
  }
}

TEST_CASE("planned rules integrate polynomials exactly") {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  QuadOptions opt;
  opt.n_graded = 10;
  std::vector<double> nodes, weights;
  auto check = [&](double L, int max_deg) {
    for (int k = 0; k <= max_deg; ++k) {
      double s = 0.0;
      for (std::size_t m = 0; m < nodes.size(); ++m) s += weights[m] * std::pow(nodes[m] / L, k);
      CHECK(std::abs(s - L / (k + 1)) <= 1e-13 * L);
    }
  };
  for (int trial = 0; trial < 50; ++trial) {
    const double L = 0.1 + u(rng);
    // plain and near-singular pieces: Gauss rules, degree 2n - 1
    plan_interval(L, {}, {{L * u(rng), 0.05 * L}}, 6, opt, nodes, weights);
    check(L, 11);
    // pieces next to a front use s = z + u^2: exact up to degree n - 1 in s
    plan_interval(L, {L * u(rng), L * u(rng), -0.3}, {}, 6, opt, nodes, weights);
    check(L, 5);
    // an exact singularity gets s = u^4 in its last layer: degree (n_graded - 2) / 2
    plan_interval(L, {}, {{L * u(rng), 0.0}}, 6, opt, nodes, weights);
    check(L, 4);
  }
}

TEST_CASE("single-layer pair integrals against a brute-force oracle") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int counts[3] = {0, 0, 0};
  int regimes[3] = {0, 0, 0};
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int kind = trial % 3;  // coincident, adjacent, separated
    const double L1 = 0.05 + 0.3 * u(rng), L2 = 0.05 + 0.3 * u(rng);
    const Vec2 a{0.0, 0.0};
    const Vec2 b = a + L1 * Vec2{1.0, 0.0};
    ElementData eo = element(a, b, int(3 * u(rng)), 0, 1), ei;
    if (kind == 0) {
      ei = eo;
    } else if (kind == 1) {
      const double th = (0.15 + 0.85 * u(rng)) * pi;  // angle at the shared node
      ei = element(b, b + L2 * Vec2{-std::cos(th), std::sin(th)}, int(3 * u(rng)), 1, 2);
    } else {
      const Vec2 c{L1 * (2.0 * u(rng) - 0.5), 0.05 + 0.4 * u(rng)};
      const double th = 2.0 * pi * u(rng);
      ei = element(c, c + L2 * Vec2{std::cos(th), std::sin(th)}, int(3 * u(rng)), 2, 3);
      if (segment_distance(eo.a, eo.b, ei.a, ei.b) < 0.02) {
        --trial;
        continue;
      }
    }
    const PairGeometry pg = pair(eo, ei, kind == 0);
    // pick delta so that the P front reaches, the S front crosses, or both cover the pair
    const double rmin = segment_distance(eo.a, eo.b, ei.a, ei.b);
    double rmax = 0.0;
    for (Vec2 p : {eo.a, eo.b})
      for (Vec2 q : {ei.a, ei.b}) rmax = std::max(rmax, norm(p - q));
    const int regime = trial % 3;
    double D;
    if (regime == 0) D = (rmin + (rmax - rmin) * u(rng)) / kMat.c_p + 1e-3;  // P front crossing
    else if (regime == 1) D = (rmin + (rmax - rmin) * u(rng)) / kMat.c_s + 1e-3;  // S front crossing
    else D = 1.2 * rmax / kMat.c_s + 0.01;  // both fronts have passed
    ++counts[kind];
    ++regimes[regime];
    const int ia = int(u(rng) * (eo.degree + 1)), ib = int(u(rng) * (ei.degree + 1));
    int i = int(2 * u(rng)), j = int(2 * u(rng));
    if (kind == 0) j = i;  // off-diagonal entries vanish on a line
    Oracle ref{pg, ia, ib, i, j, D};
    const double exact = ref.value();
    const PairIntegral got = integrate_pair_v(pg, ia, ib, i, j, D, kMat, 1e-11);
    const double rel = std::abs(got.value - exact) / std::abs(exact);
    worst = std::max(worst, rel);
    INFO("trial " << trial << " kind " << kind << " regime " << regime << " ref " << exact
                  << " got " << got.value);
    CHECK(rel <= 1e-8);
  }
  MESSAGE("worst relative deviation " << worst);
  CHECK(counts[0] > 0);
  CHECK(counts[1] > 0);
  CHECK(counts[2] > 0);
}

TEST_CASE("tolerance halving stays within the error estimate") {
  const ElementData eo = element({0, 0}, {0.2, 0}, 1, 0, 1);
  const ElementData ei = element({0.2, 0}, {0.3, 0.15}, 2, 1, 2);
  const PairGeometry pg = pair(eo, ei, false);
  for (double tol : {1e-6, 1e-8}) {
    const PairIntegral p1 = integrate_pair_v(pg, 1, 0, 0, 0, 0.13, kMat, tol);
    const PairIntegral p2 = integrate_pair_v(pg, 1, 0, 0, 0, 0.13, kMat, 0.5 * tol);
    CHECK(std::abs(p1.value - p2.value) <= p1.error_estimate + p2.error_estimate + 1e-15);
  }
}

TEST_CASE("hypersingular pair integrals are symmetric") {
  const ElementData e1 = element({0, 0}, {0.2, 0}, 1, 0, 1);
  const ElementData e2 = element({0.2, 0}, {0.3, 0.15}, 1, 1, 2);
  const ElementData e3 = element({-0.1, 0.3}, {0.15, 0.35}, 2, 3, 4);
  for (const auto& [x, y] : {std::pair{e1, e2}, std::pair{e1, e3}, std::pair{e2, e3}}) {
    const PairGeometry p = pair(x, y, false), q = pair(y, x, false);
    for (double D : {0.05, 0.2, 0.5})
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          const double v1 = integrate_pair_w(p, 0, 1, i, j, D, kMat, 1e-11).value;
          const double v2 = integrate_pair_w(q, 1, 0, j, i, D, kMat, 1e-11).value;
          CHECK(std::abs(v1 - v2) <= 1e-10 * std::max(1.0, std::abs(v1)));
        }
  }
}

TEST_CASE("segment distance") {
  CHECK(segment_distance({0, 0}, {1, 0}, {0.5, 1}, {0.5, 2}) == doctest::Approx(1.0));
  CHECK(segment_distance({0, 0}, {1, 0}, {0.5, -1}, {0.5, 1}) == 0.0);
  double s = -1;
  CHECK(segment_distance({0, 0}, {1, 0}, {2, 1}, {3, 1}, &s) == doctest::Approx(std::sqrt(2.0)));
  CHECK(s == doctest::Approx(1.0));
}

}  // TEST_SUITE
