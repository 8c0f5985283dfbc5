#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tdbem/common.h"

namespace tdbem {

struct Material {
  double lambda = 0.0;
  double mu = 0.0;
  double rho = 0.0;
  double c_p = 0.0;
  double c_s = 0.0;
  double poisson = 0.0;
  double kolosov = 0.0;
};

Material make_material(double lambda, double mu, double rho);
// Lamé parameters recovered from wave speeds.
Material material_from_speeds(double c_p, double c_s, double rho);

struct BoundaryGeometry {
  enum class Kind { open_segment, polygon };
  Kind kind = Kind::open_segment;
  // Segment: the two endpoints. Polygon: vertices, stored counter-clockwise.
  std::vector<Vec2> vertices;

  static BoundaryGeometry segment(Vec2 a, Vec2 b);
  static BoundaryGeometry polygon(std::vector<Vec2> vertices);
  std::size_t side_count() const;
};

struct MeshSpec {
  enum class Refinement { uniform, algebraic, geometric };
  Refinement refinement = Refinement::uniform;
  int elements = 1;          // uniform: elements per side
  double beta = 1.0;         // algebraic grading exponent
  double sigma = 0.5;        // geometric ratio
  int n_l = 1;               // algebraic: 2 n_l elements per side; geometric: n_l + 1 per half
  std::vector<int> side_elements;  // optional per-side override (uniform / algebraic)

  static MeshSpec uniform(int m);
  static MeshSpec algebraic(double beta, int n_l);
  static MeshSpec geometric(double sigma, int n_l);
};

struct BoundaryMesh {
  std::vector<Vec2> nodes;
  std::vector<std::pair<int, int>> elements;
  bool closed = false;
  double h_max = 0.0;
  double h_min = 0.0;

  std::size_t element_count() const { return elements.size(); }
  Vec2 a(std::size_t e) const { return nodes[elements[e].first]; }
  Vec2 b(std::size_t e) const { return nodes[elements[e].second]; }
  double length(std::size_t e) const { return norm(b(e) - a(e)); }
  Vec2 tangent(std::size_t e) const;
  // Left normal of the traversal direction: (0,1) for a screen run left to
  // right, and pointing into the obstacle for counter-clockwise polygons.
  Vec2 normal(std::size_t e) const;
};

BoundaryMesh make_mesh(const BoundaryGeometry& geometry, const MeshSpec& spec);
// Node parameters in [0,1] along one side with n elements.
std::vector<double> side_parameters(const MeshSpec& spec, int side_elements_override = -1);

struct MeshStats {
  double h_max;
  double h_min;
  std::size_t element_count;
};
MeshStats mesh_stats(const BoundaryMesh& mesh);

void write_mesh(std::ostream& os, const BoundaryMesh& mesh);
BoundaryMesh read_mesh(std::istream& is);

struct TimeGrid {
  double T = 1.0;
  int n_steps = 1;
  double dt = 1.0;
  double t(int n) const { return n * dt; }
};

TimeGrid make_time_grid(double T, int n_steps);
TimeGrid time_grid_from_dt(double T, double dt);

}  // namespace tdbem
