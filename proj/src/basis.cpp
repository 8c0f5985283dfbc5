#include "tdbem/basis.h"

#include <algorithm>
#include <map>

namespace tdbem {

// product form; the monomial coefficients lose digits at higher degree
double ShapeSet::value(int k, double t) const {
  if (degree == 0) return 1.0;
  const double p = degree;
  double v = 1.0;
  for (int j = 0; j <= degree; ++j)
    if (j != k) v *= (t - j / p) / ((k - j) / p);
  return v;
}

void ShapeSet::values(double t, double* out) const {
  for (int k = 0; k <= degree; ++k) out[k] = value(k, t);
}

ShapeSet lagrange_shapes(int p) {
  if (p < 0) throw SpaceError("negative polynomial degree");
  ShapeSet s;
  s.degree = p;
  s.coeffs.assign((p + 1) * (p + 1), 0.0);
  if (p == 0) {
    s.coeffs[0] = 1.0;
    return s;
  }
  for (int k = 0; k <= p; ++k) {
    // expand prod_{j != k} (t - t_j) / (t_k - t_j)
    std::vector<double> poly(1, 1.0);
    const double tk = double(k) / p;
    for (int j = 0; j <= p; ++j) {
      if (j == k) continue;
      const double tj = double(j) / p;
      const double s_ = 1.0 / (tk - tj);
      std::vector<double> next(poly.size() + 1, 0.0);
      for (std::size_t m = 0; m < poly.size(); ++m) {
        next[m + 1] += poly[m] * s_;
        next[m] -= poly[m] * tj * s_;
      }
      poly.swap(next);
    }
    for (int m = 0; m <= p; ++m) s.coeffs[k * (p + 1) + m] = poly[m];
  }
  return s;
}

BasisSpace build_space(const BoundaryMesh& mesh, int degree, Continuity c) {
  return build_space(mesh, std::vector<int>(mesh.element_count(), degree), c);
}

BasisSpace build_space(const BoundaryMesh& mesh, const std::vector<int>& degrees, Continuity c) {
  const std::size_t ne = mesh.element_count();
  if (degrees.size() != ne) throw SpaceError("degree list does not match the element count");
  for (int p : degrees) {
    if (p < 0 || p > 12) throw SpaceError("polynomial degree out of range");
    if (c != Continuity::discontinuous && p < 1)
      throw SpaceError("continuous spaces need degree >= 1");
  }
  if (c == Continuity::continuous_vanishing_at_tips && mesh.closed)
    throw SpaceError("tip constraint applies to open arcs only");

  BasisSpace sp;
  sp.mesh = mesh;
  sp.degree = degrees;
  sp.continuity = c;
  sp.dof_map.resize(ne);
  std::map<int, ShapeSet> cache;
  for (std::size_t e = 0; e < ne; ++e) {
    int p = degrees[e];
    if (!cache.count(p)) cache[p] = lagrange_shapes(p);
    sp.shapes.push_back(cache[p]);
  }

  if (c == Continuity::discontinuous) {
    int next = 0;
    for (std::size_t e = 0; e < ne; ++e)
      for (int k = 0; k <= degrees[e]; ++k) sp.dof_map[e].push_back(next++);
    sp.dof_count = next;
    return sp;
  }

  // numbering runs along the arc: start vertex, interior nodes, end vertex
  int next = 0;
  const bool tips = c == Continuity::continuous_vanishing_at_tips;
  int first_vertex = tips ? -1 : next++;
  int left = first_vertex;
  for (std::size_t e = 0; e < ne; ++e) {
    const int p = degrees[e];
    std::vector<int>& map = sp.dof_map[e];
    map.assign(p + 1, -1);
    map[0] = left;
    for (int k = 1; k < p; ++k) map[k] = next++;
    int right;
    if (e + 1 == ne) {
      if (mesh.closed) right = first_vertex;
      else right = tips ? -1 : next++;
    } else {
      right = next++;
    }
    map[p] = right;
    left = right;
  }
  sp.dof_count = next;
  return sp;
}

std::vector<int> linear_slope_degrees(const BoundaryMesh& mesh, double slope, int max_degree) {
  // layer index: rank of the element length from the shortest one
  const std::size_t ne = mesh.element_count();
  std::vector<double> len(ne);
  for (std::size_t e = 0; e < ne; ++e) len[e] = mesh.length(e);
  std::vector<double> sorted = len;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end(),
                           [](double a, double b) { return std::abs(a - b) <= 1e-12 * b; }),
               sorted.end());
  std::vector<int> deg(ne);
  for (std::size_t e = 0; e < ne; ++e) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), len[e] * (1 - 1e-12));
    int layer = int(it - sorted.begin());
    deg[e] = std::clamp(int(std::floor(slope * layer)) + 1, 1, max_degree);
  }
  return deg;
}

double eval_shape(const BasisSpace& space, std::size_t element, double local_coord, int dof_local) {
  if (element >= space.dof_map.size()) throw std::out_of_range("element index out of range");
  if (dof_local < 0 || dof_local > space.degree[element])
    throw std::out_of_range("local shape index out of range");
  if (local_coord < 0.0 || local_coord > 1.0) throw std::out_of_range("local coordinate outside [0,1]");
  return space.shapes[element].value(dof_local, local_coord);
}

double eval_time_basis(const TimeBasis& tb, int n, double t) {
  const double tn = tb.grid.t(n), tn1 = tb.grid.t(n + 1);
  if (tb.kind == TimeBasisKind::piecewise_constant)
    return (t >= tn && t < tn1) ? 1.0 : 0.0;
  auto ramp = [](double s) { return s > 0.0 ? s : 0.0; };
  return (ramp(t - tn) - ramp(t - tn1)) / tb.grid.dt;
}

}  // namespace tdbem
