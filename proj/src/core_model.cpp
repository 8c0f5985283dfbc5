#include "tdbem/core_model.h"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace tdbem {

Material make_material(double lambda, double mu, double rho) {
  if (!(lambda > 0.0) || !(mu > 0.0) || !(rho > 0.0))
    throw ParameterError("material parameters must be positive");
  Material m;
  m.lambda = lambda;
  m.mu = mu;
  m.rho = rho;
  m.c_p = std::sqrt((lambda + 2.0 * mu) / rho);
  m.c_s = std::sqrt(mu / rho);
  m.poisson = lambda / (2.0 * (lambda + mu));
  m.kolosov = 3.0 - 4.0 * m.poisson;
  return m;
}

Material material_from_speeds(double c_p, double c_s, double rho) {
  if (!(c_s > 0.0) || !(c_p > c_s) || !(rho > 0.0))
    throw ParameterError("wave speeds must satisfy c_p > c_s > 0");
  double mu = rho * c_s * c_s;
  double lambda = rho * c_p * c_p - 2.0 * mu;
  return make_material(lambda, mu, rho);
}

BoundaryGeometry BoundaryGeometry::segment(Vec2 a, Vec2 b) {
  if (norm(b - a) == 0.0) throw GeometryError("segment endpoints coincide");
  BoundaryGeometry g;
  g.kind = Kind::open_segment;
  g.vertices = {a, b};
  return g;
}

BoundaryGeometry BoundaryGeometry::polygon(std::vector<Vec2> v) {
  const std::size_t n = v.size();
  if (n < 3) throw GeometryError("polygon needs at least three vertices");
  double area = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p = v[i], q = v[(i + 1) % n], r = v[(i + 2) % n];
    if (norm(q - p) == 0.0) throw GeometryError("repeated polygon vertex");
    if (std::abs(cross(q - p, r - q)) <= 1e-14 * norm(q - p) * norm(r - q))
      throw GeometryError("consecutive polygon vertices are collinear");
    area += cross(p, q);
  }
  if (area < 0.0) std::reverse(v.begin(), v.end());
  BoundaryGeometry g;
  g.kind = Kind::polygon;
  g.vertices = std::move(v);
  return g;
}

std::size_t BoundaryGeometry::side_count() const {
  return kind == Kind::open_segment ? 1 : vertices.size();
}

MeshSpec MeshSpec::uniform(int m) {
  MeshSpec s;
  s.refinement = Refinement::uniform;
  s.elements = m;
  return s;
}

MeshSpec MeshSpec::algebraic(double beta, int n_l) {
  MeshSpec s;
  s.refinement = Refinement::algebraic;
  s.beta = beta;
  s.n_l = n_l;
  return s;
}

MeshSpec MeshSpec::geometric(double sigma, int n_l) {
  MeshSpec s;
  s.refinement = Refinement::geometric;
  s.sigma = sigma;
  s.n_l = n_l;
  return s;
}

Vec2 BoundaryMesh::tangent(std::size_t e) const {
  Vec2 d = b(e) - a(e);
  return (1.0 / norm(d)) * d;
}

Vec2 BoundaryMesh::normal(std::size_t e) const {
  Vec2 t = tangent(e);
  return {-t.y, t.x};
}

namespace {

void validate(const MeshSpec& s) {
  switch (s.refinement) {
    case MeshSpec::Refinement::uniform:
      if (s.elements < 1 && s.side_elements.empty())
        throw ParameterError("uniform mesh needs at least one element");
      break;
    case MeshSpec::Refinement::algebraic:
      if (!(s.beta >= 1.0)) throw ParameterError("grading exponent must be >= 1");
      if (s.n_l < 1 && s.side_elements.empty()) throw ParameterError("N_l must be >= 1");
      break;
    case MeshSpec::Refinement::geometric:
      if (!(s.sigma > 0.0 && s.sigma <= 0.5)) throw ParameterError("sigma must lie in (0, 1/2]");
      if (s.n_l < 0) throw ParameterError("N_l must be >= 0");
      break;
  }
  for (int n : s.side_elements)
    if (n < 1) throw ParameterError("per-side element count must be positive");
}

}  // namespace

std::vector<double> side_parameters(const MeshSpec& spec, int override_n) {
  std::vector<double> t;
  switch (spec.refinement) {
    case MeshSpec::Refinement::uniform: {
      int m = override_n > 0 ? override_n : spec.elements;
      for (int k = 0; k <= m; ++k) t.push_back(double(k) / m);
      break;
    }
    case MeshSpec::Refinement::algebraic: {
      int n = override_n > 0 ? override_n : 2 * spec.n_l;
      // half-interval rule; an odd count leaves one element straddling the midpoint
      double half = 0.5 * n;
      int m = n / 2;
      std::vector<double> left;
      for (int k = 0; k <= m; ++k) left.push_back(0.5 * std::pow(k / half, spec.beta));
      t = left;
      int start = (n % 2 == 0) ? m - 1 : m;
      for (int k = start; k >= 0; --k) t.push_back(1.0 - left[k]);
      break;
    }
    case MeshSpec::Refinement::geometric: {
      int n = spec.n_l;
      t.push_back(0.0);
      for (int j = n; j >= 1; --j) t.push_back(0.5 * std::pow(spec.sigma, j));
      t.push_back(0.5);
      for (int j = 1; j <= n; ++j) t.push_back(1.0 - 0.5 * std::pow(spec.sigma, j));
      t.push_back(1.0);
      break;
    }
  }
  t.front() = 0.0;
  t.back() = 1.0;
  return t;
}

BoundaryMesh make_mesh(const BoundaryGeometry& g, const MeshSpec& spec) {
  validate(spec);
  const std::size_t sides = g.side_count();
  if (!spec.side_elements.empty() && spec.side_elements.size() != sides)
    throw ParameterError("per-side element list does not match the side count");
  if (!spec.side_elements.empty() && spec.refinement == MeshSpec::Refinement::geometric)
    throw ParameterError("per-side counts are not supported for geometric meshes");

  BoundaryMesh mesh;
  mesh.closed = g.kind == BoundaryGeometry::Kind::polygon;
  for (std::size_t s = 0; s < sides; ++s) {
    const Vec2 p = g.vertices[s];
    const Vec2 q = g.vertices[(s + 1) % g.vertices.size()];
    const Vec2 d = q - p;
    int n_override = spec.side_elements.empty() ? -1 : spec.side_elements[s];
    std::vector<double> t = side_parameters(spec, n_override);
    // the closing vertex of each side is the opening vertex of the next
    std::size_t last = (mesh.closed || s + 1 < sides) ? t.size() - 1 : t.size();
    for (std::size_t k = 0; k < last; ++k) {
      // exact endpoints, affine map elsewhere
      if (k == 0) mesh.nodes.push_back(p);
      else if (k + 1 == t.size()) mesh.nodes.push_back(q);
      else mesh.nodes.push_back(p + t[k] * d);
    }
  }
  const int nn = int(mesh.nodes.size());
  const int ne = mesh.closed ? nn : nn - 1;
  for (int e = 0; e < ne; ++e) mesh.elements.push_back({e, (e + 1) % nn});

  mesh.h_max = 0.0;
  mesh.h_min = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    double l = mesh.length(e);
    if (!(l > 0.0)) throw GeometryError("degenerate element generated");
    mesh.h_max = std::max(mesh.h_max, l);
    mesh.h_min = std::min(mesh.h_min, l);
  }
  return mesh;
}

MeshStats mesh_stats(const BoundaryMesh& mesh) {
  return {mesh.h_max, mesh.h_min, mesh.element_count()};
}

void write_mesh(std::ostream& os, const BoundaryMesh& mesh) {
  std::ostringstream ss;
  ss << std::setprecision(17);
  ss << (mesh.closed ? "closed" : "open") << ' ' << mesh.nodes.size() << ' '
     << mesh.elements.size() << '\n';
  for (const Vec2& p : mesh.nodes) ss << p.x << ' ' << p.y << '\n';
  for (const auto& e : mesh.elements) ss << e.first << ' ' << e.second << '\n';
  os << ss.str();
}

BoundaryMesh read_mesh(std::istream& is) {
  BoundaryMesh mesh;
  std::string topo;
  std::size_t nn = 0, ne = 0;
  if (!(is >> topo >> nn >> ne) || (topo != "open" && topo != "closed"))
    throw GeometryError("malformed mesh header");
  mesh.closed = topo == "closed";
  mesh.nodes.resize(nn);
  for (auto& p : mesh.nodes)
    if (!(is >> p.x >> p.y)) throw GeometryError("malformed mesh node line");
  mesh.elements.resize(ne);
  for (auto& e : mesh.elements) {
    if (!(is >> e.first >> e.second)) throw GeometryError("malformed mesh element line");
    if (e.first < 0 || e.second < 0 || std::size_t(e.first) >= nn || std::size_t(e.second) >= nn)
      throw GeometryError("element references a missing node");
  }
  mesh.h_max = 0.0;
  mesh.h_min = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < ne; ++e) {
    mesh.h_max = std::max(mesh.h_max, mesh.length(e));
    mesh.h_min = std::min(mesh.h_min, mesh.length(e));
  }
  return mesh;
}

TimeGrid make_time_grid(double T, int n_steps) {
  if (!(T > 0.0) || n_steps < 1) throw ParameterError("time grid needs T > 0 and n_steps >= 1");
  return {T, n_steps, T / n_steps};
}

TimeGrid time_grid_from_dt(double T, double dt) {
  if (!(dt > 0.0)) throw ParameterError("time step must be positive");
  long n = std::lround(T / dt);
  if (n < 1 || std::abs(n * dt - T) > 1e-9 * T)
    throw ParameterError("T is not an integer multiple of dt");
  return {T, int(n), dt};
}

}  // namespace tdbem
