#pragma once

#include <vector>

#include "tdbem/core_model.h"

namespace tdbem {

enum class Continuity { discontinuous, continuous, continuous_vanishing_at_tips };

// Lagrange shapes on equispaced nodes t_k = k/p of the unit element.
// Local index k sits at t_k, so 0 and p are the element end nodes.
struct ShapeSet {
  int degree = 0;
  // coefficient of t^m in shape k: coeffs[k * (degree + 1) + m]
  std::vector<double> coeffs;

  double value(int k, double t) const;
  void values(double t, double* out) const;
};

ShapeSet lagrange_shapes(int degree);

struct BasisSpace {
  BoundaryMesh mesh;
  std::vector<int> degree;  // per element
  Continuity continuity = Continuity::discontinuous;
  int dof_count = 0;
  // dof_map[e][k]: global index of local shape k, or -1 when constrained away
  std::vector<std::vector<int>> dof_map;
  std::vector<ShapeSet> shapes;  // per element, shared by degree

  const ShapeSet& shape(std::size_t e) const { return shapes[e]; }
};

BasisSpace build_space(const BoundaryMesh& mesh, const std::vector<int>& degrees, Continuity c);
BasisSpace build_space(const BoundaryMesh& mesh, int degree, Continuity c);
// Linear-slope hp rule: degree grows with the layer index away from the
// singular ends, p_e = floor(slope * layer) with layer 0 at the smallest element.
std::vector<int> linear_slope_degrees(const BoundaryMesh& mesh, double slope, int max_degree);

double eval_shape(const BasisSpace& space, std::size_t element, double local_coord, int dof_local);

enum class TimeBasisKind { piecewise_constant, piecewise_linear_hat };

struct TimeBasis {
  TimeBasisKind kind = TimeBasisKind::piecewise_constant;
  TimeGrid grid;
};

double eval_time_basis(const TimeBasis& tb, int n, double t);

}  // namespace tdbem
