#include <doctest.h>

#include <random>
#include <sstream>

#include "tdbem/basis.h"

using namespace tdbem;

TEST_SUITE("core_model") {

TEST_CASE("material from Lame parameters") {
  const Material m = make_material(2.0, 1.0, 1.0);
  CHECK(m.c_p == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(m.c_s == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m.poisson == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(m.kolosov == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(make_material(-1.0, 1.0, 1.0), ParameterError);
  CHECK_THROWS_AS(material_from_speeds(1.0, 1.0, 1.0), ParameterError);
}

TEST_CASE("kolosov constant agrees two ways") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  for (int k = 0; k < 50; ++k) {
    const double lam = u(rng), mu = u(rng);
    const Material m = make_material(lam, mu, 1.0);
    CHECK(std::abs(m.kolosov - (3.0 - 2.0 * lam / (lam + mu))) <= 1e-14);
  }
  const Material s = material_from_speeds(3.0, 1.0, 1.0);
  CHECK(s.lambda == doctest::Approx(7.0));
  CHECK(s.mu == doctest::Approx(1.0));
}

TEST_CASE("algebraic grading matches the node rule") {
  for (double beta : {1.0, 2.0, 3.0}) {
    for (int nl : {5, 10, 20}) {
      const BoundaryMesh mesh =
          make_mesh(BoundaryGeometry::segment({-0.5, 0}, {0.5, 0}), MeshSpec::algebraic(beta, nl));
      REQUIRE(mesh.element_count() == std::size_t(2 * nl));
      // on [-1,1]: x_k = -1 + (k / nl)^beta, mirrored; the segment is half of it
      for (int k = 0; k <= nl; ++k) {
        const double x = -1.0 + std::pow(double(k) / nl, beta);
        CHECK(std::abs(mesh.nodes[k].x - 0.5 * x) <= 1e-14);
        CHECK(std::abs(mesh.nodes[2 * nl - k].x + 0.5 * x) <= 1e-14);
      }
    }
  }
}

TEST_CASE("geometric grading matches the node rule") {
  const double sigma = 0.2;
  const BoundaryMesh mesh =
      make_mesh(BoundaryGeometry::segment({-0.5, 0}, {0.5, 0}), MeshSpec::geometric(sigma, 3));
  REQUIRE(mesh.element_count() == 8u);
  const double expect[9] = {0.0,
                            0.5 * sigma * sigma * sigma,
                            0.5 * sigma * sigma,
                            0.5 * sigma,
                            0.5,
                            1 - 0.5 * sigma,
                            1 - 0.5 * sigma * sigma,
                            1 - 0.5 * sigma * sigma * sigma,
                            1.0};
  for (int k = 0; k < 9; ++k) CHECK(std::abs(mesh.nodes[k].x - (expect[k] - 0.5)) <= 1e-14);
}

TEST_CASE("refinement shrinks both element sizes") {
  for (double beta : {1.5, 2.0, 3.0}) {
    double hmax = 1e9, hmin = 1e9;
    for (int nl : {5, 10, 20, 40}) {
      const BoundaryMesh m =
          make_mesh(BoundaryGeometry::segment({-0.5, 0}, {0.5, 0}), MeshSpec::algebraic(beta, nl));
      CHECK(m.h_max < hmax);
      CHECK(m.h_min < hmin);
      hmax = m.h_max;
      hmin = m.h_min;
    }
  }
}

TEST_CASE("closed polygons close") {
  const BoundaryGeometry g =
      BoundaryGeometry::polygon({{-0.5, 0}, {0.5, 0}, {0, 0.86602540378443865}});
  MeshSpec spec = MeshSpec::algebraic(2.0, 5);
  spec.side_elements = {7, 10, 10};
  const BoundaryMesh m = make_mesh(g, spec);
  CHECK(m.closed);
  CHECK(m.element_count() == 27u);
  Vec2 sum;
  for (std::size_t e = 0; e < m.element_count(); ++e) sum = sum + (m.b(e) - m.a(e));
  CHECK(std::abs(sum.x) <= 1e-15);
  CHECK(std::abs(sum.y) <= 1e-15);
}

TEST_CASE("polygon orientation and errors") {
  const BoundaryGeometry g = BoundaryGeometry::polygon({{0, 0}, {0, 1}, {1, 0}});
  double area = 0.0;
  for (std::size_t i = 0; i < 3; ++i) area += cross(g.vertices[i], g.vertices[(i + 1) % 3]);
  CHECK(area > 0.0);
  CHECK_THROWS_AS(BoundaryGeometry::polygon({{0, 0}, {1, 0}, {2, 0}}), GeometryError);
  CHECK_THROWS_AS(BoundaryGeometry::segment({1, 1}, {1, 1}), GeometryError);
  CHECK_THROWS_AS(make_mesh(BoundaryGeometry::segment({0, 0}, {1, 0}), MeshSpec::algebraic(0.5, 3)),
                  ParameterError);
}

TEST_CASE("mesh text round trip") {
  const BoundaryMesh m =
      make_mesh(BoundaryGeometry::segment({-0.5, 0}, {0.5, 0}), MeshSpec::algebraic(3.0, 4));
  std::stringstream ss;
  write_mesh(ss, m);
  const BoundaryMesh r = read_mesh(ss);
  REQUIRE(r.nodes.size() == m.nodes.size());
  for (std::size_t k = 0; k < m.nodes.size(); ++k) CHECK(r.nodes[k].x == m.nodes[k].x);
  CHECK(r.h_min == m.h_min);
  std::istringstream bad("open 2 1\n0 0\n1 0\n0 5\n");
  CHECK_THROWS_AS(read_mesh(bad), GeometryError);
}

TEST_CASE("time grids") {
  const TimeGrid g = time_grid_from_dt(1.0, 1.25e-2);
  CHECK(g.n_steps == 80);
  CHECK(g.t(80) == doctest::Approx(1.0));
  CHECK_THROWS_AS(time_grid_from_dt(1.0, 0.3), ParameterError);
}

}  // TEST_SUITE

TEST_SUITE("basis") {

TEST_CASE("DOF counts over a randomized sweep") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> ne_d(1, 20), p_d(0, 7);
  for (int trial = 0; trial < 200; ++trial) {
    const int ne = ne_d(rng);
    const BoundaryMesh open =
        make_mesh(BoundaryGeometry::segment({0, 0}, {1, 0}), MeshSpec::uniform(ne));
    std::vector<int> deg(ne);
    int sum = 0;
    bool all_pos = true;
    for (int& p : deg) {
      p = p_d(rng);
      sum += p;
      all_pos = all_pos && p >= 1;
    }
    CHECK(build_space(open, deg, Continuity::discontinuous).dof_count == sum + ne);
    if (all_pos) {
      CHECK(build_space(open, deg, Continuity::continuous).dof_count == sum + 1);
      CHECK(build_space(open, deg, Continuity::continuous_vanishing_at_tips).dof_count == sum - 1);
    } else {
      CHECK_THROWS_AS(build_space(open, deg, Continuity::continuous), SpaceError);
    }
  }
  const BoundaryMesh tri = make_mesh(BoundaryGeometry::polygon({{0, 0}, {1, 0}, {0, 1}}),
                                     MeshSpec::uniform(4));
  CHECK(build_space(tri, 3, Continuity::continuous).dof_count == 36);
  CHECK_THROWS_AS(build_space(tri, 1, Continuity::continuous_vanishing_at_tips), SpaceError);
}

TEST_CASE("shape functions reproduce polynomials") {
  for (int p = 0; p <= 7; ++p) {
    const ShapeSet s = lagrange_shapes(p);
    double v[16];
    for (int k = 0; k <= p; ++k) {
      for (double t : {0.0, 0.13, 0.5, 0.77, 1.0}) {
        s.values(t, v);
        double interp = 0.0;
        for (int j = 0; j <= p; ++j) interp += v[j] * std::pow(p == 0 ? 0.0 : double(j) / p, k);
        if (p == 0) interp = v[0];  // constants only
        CHECK(std::abs(interp - (p == 0 ? 1.0 : std::pow(t, k))) <= 1e-12);
      }
    }
  }
}

TEST_CASE("continuity across shared nodes and tip constraint") {
  const BoundaryMesh m =
      make_mesh(BoundaryGeometry::segment({-0.5, 0}, {0.5, 0}), MeshSpec::algebraic(2.0, 3));
  const std::vector<int> deg = {1, 2, 3, 3, 2, 1};
  for (Continuity c : {Continuity::continuous, Continuity::continuous_vanishing_at_tips}) {
    const BasisSpace sp = build_space(m, deg, c);
    std::vector<double> coef(sp.dof_count);
    for (int g = 0; g < sp.dof_count; ++g) coef[g] = std::sin(1.0 + g);
    auto field = [&](std::size_t e, double t) {
      double v = 0.0;
      for (int k = 0; k <= sp.degree[e]; ++k)
        if (sp.dof_map[e][k] >= 0) v += coef[sp.dof_map[e][k]] * eval_shape(sp, e, t, k);
      return v;
    };
    for (std::size_t e = 0; e + 1 < m.element_count(); ++e)
      CHECK(std::abs(field(e, 1.0) - field(e + 1, 0.0)) <= 1e-14);
    if (c == Continuity::continuous_vanishing_at_tips) {
      CHECK(field(0, 0.0) == 0.0);
      CHECK(field(m.element_count() - 1, 1.0) == 0.0);
    }
  }
}

TEST_CASE("linear slope degrees grow away from the tips") {
  const BoundaryMesh m =
      make_mesh(BoundaryGeometry::segment({-0.5, 0}, {0.5, 0}), MeshSpec::geometric(0.2, 4));
  const std::vector<int> d = linear_slope_degrees(m, 1.0, 5);
  REQUIRE(d.size() == 10u);
  CHECK(d.front() == 1);
  CHECK(d.back() == 1);
  for (std::size_t e = 1; e < 5; ++e) CHECK(d[e] >= d[e - 1]);
}

TEST_CASE("time basis") {
  TimeBasis tb;
  tb.grid = make_time_grid(1.0, 4);
  CHECK(eval_time_basis(tb, 1, 0.3) == 1.0);
  CHECK(eval_time_basis(tb, 1, 0.6) == 0.0);
  tb.kind = TimeBasisKind::piecewise_linear_hat;
  CHECK(eval_time_basis(tb, 1, 0.25) == 0.0);
  CHECK(eval_time_basis(tb, 1, 0.375) == doctest::Approx(0.5));
  CHECK(eval_time_basis(tb, 1, 0.9) == doctest::Approx(1.0));
}

}  // TEST_SUITE
