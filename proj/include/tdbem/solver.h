#pragma once

#include <iosfwd>
#include <vector>

#include "tdbem/assembly.h"

namespace tdbem {

struct TimeHistorySolution {
  std::vector<Eigen::VectorXd> coefficients;  // per step, length 2M
  BasisSpace space;
  TimeGrid time;
  UnknownKind unknown_kind = UnknownKind::dirichlet_traction;
  Material material;
};

// Marching on in time with one LU factorisation of E^(0).
TimeHistorySolution mot_solve(const ToeplitzBlockSystem& system, const RhsHistory& rhs);

// max_n |g_n - sum_k E^(k) a_{n-k}| / max_n |g_n|
double mot_residual(const ToeplitzBlockSystem& system, const RhsHistory& rhs,
                    const TimeHistorySolution& sol);

// sum_n a_n^T sum_{l<=n} E^(l) a_{n-l}
double energy(const ToeplitzBlockSystem& system, const TimeHistorySolution& sol);

// Boundary trace at arclength position s (measured along the mesh from its
// first node) and time t.
Vec2 eval_on_boundary(const TimeHistorySolution& sol, double arc_position, double t);
// Same, at the point of element e with local coordinate in [0,1].
Vec2 eval_on_element(const TimeHistorySolution& sol, std::size_t e, double local, double t);
double total_arclength(const BoundaryMesh& mesh);

// Elastostatic crack opening for a constant traction eta on the screen
// [-1/2, 1/2] x {0}.
Vec2 elastostatic_reference(double x, Vec2 eta, const Material& m);
double elastostatic_factor(const Material& m);

// Single-layer potential of a traction history at an off-boundary point.
// Sets *near_boundary when the point is within snapping distance of Gamma.
Vec2 eval_single_layer_potential(const TimeHistorySolution& sol, Vec2 field_point, double t,
                                 bool* near_boundary = nullptr);

// CSV: step,t,then one column per coefficient
void write_coefficients_csv(std::ostream& os, const TimeHistorySolution& sol);

}  // namespace tdbem
