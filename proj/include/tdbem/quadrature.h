#pragma once

#include <vector>

#include "tdbem/basis.h"
#include "tdbem/kernels.h"

namespace tdbem {

struct QuadRule {
  enum class Kind { gauss_legendre, gauss_log, composite };
  Kind kind = Kind::gauss_legendre;
  std::vector<double> nodes;    // on [0,1]
  std::vector<double> weights;
};

QuadRule gauss_legendre(int n);
// Shared read-only copy, n in [1, 64].
const QuadRule& gauss_legendre_cached(int n);

enum class Regime { none, p_only, s_and_p };

struct SplitPiece {
  double s0 = 0.0, s1 = 0.0;  // arclength from the first element node
  Regime regime = Regime::none;
};

struct SplitSegments {
  std::vector<SplitPiece> pieces;
};

SplitSegments split_at_wavefronts(Vec2 a, Vec2 b, Vec2 field_point, double delta, const Material& m);

// Sums of time-shifted kernel evaluations, sum_k coef_k nu(delta_k).
struct Stencil {
  int terms = 0;
  double delta[3] = {0.0, 0.0, 0.0};
  double coef[3] = {0.0, 0.0, 0.0};
  double max_delta() const;
  double static_weight() const;  // sum_k coef_k delta_k^2 / 2
};

// Second difference J(lag+1) - 2 J(lag) + J(lag-1) with J(k) the kernel at k*dt;
// non-positive time differences are dropped.
Stencil block_stencil(int lag, double dt);
Stencil single_delta(double delta);

enum class KernelKind { single_layer, hypersingular };

struct QuadOptions {
  int n_regular = 6;     // Gauss points per smooth piece
  int n_graded = 6;      // points per geometrically graded sub-piece
  int n_far = 4;         // tensor rule for separated pairs away from fronts
  double sigma = 0.2;    // grading ratio toward singular points
  double sigma_near = 0.35;  // grading ratio toward nearly singular points
  double depth = 1e-3;   // relative size of the innermost graded piece
  double near_ratio = 1.0;
  double far_ratio = 1.0;
  double front_margin = 1.0;

  static QuadOptions precise();
  static QuadOptions from_tol(double tol);
  QuadOptions refined() const;
};

struct ElementData {
  Vec2 a, b, t, n;
  double len = 0.0;
  int degree = 0;
  const ShapeSet* shapes = nullptr;
  int node_a = -1, node_b = -1;
};

struct PairGeometry {
  ElementData outer, inner;
  bool coincident = false;
  // (outer end, inner end) pairs of shared mesh nodes, end 0 = a, 1 = b
  std::vector<std::pair<int, int>> shared;
};

ElementData element_data(const BasisSpace& space, std::size_t e);
PairGeometry make_pair_geometry(const BasisSpace& test, std::size_t e_out, const BasisSpace& trial,
                                std::size_t e_in);

// Local Galerkin integrals of sum_k coef_k nu_ij(delta_k) against outer shape
// a and inner shape b: out[((2 i + j) * n_out + a) * n_in + b]. The kernel is
// scaled by 2 pi rho (no prefactor applied). For the hypersingular kernel the
// strongly singular part is a Hadamard finite part (inner finite part on
// coincident elements, outer finite part at shared vertices).
void integrate_pair(KernelKind kind, const PairGeometry& pg, const Stencil& st, const Material& m,
                    const QuadOptions& opt, std::vector<double>& out);

struct PairIntegral {
  double value = 0.0;
  double error_estimate = 0.0;
};

// Single-entry wrappers with a tolerance-driven error estimate.
PairIntegral integrate_pair_v(const PairGeometry& pg, int a, int b, int i, int j, double delta,
                              const Material& m, double tol);
PairIntegral integrate_pair_w(const PairGeometry& pg, int a, int b, int i, int j, double delta,
                              const Material& m, double tol);

// Nodes and weights on [0, L] for a piecewise smooth integrand. fronts are
// points (possibly outside [0, L]) with square-root type behaviour; grades
// are (position, distance to the singularity) pairs for log or near-singular
// behaviour. Each node is also reported as anchor + delta, with the anchor a
// cut point (interval end, grade point) and delta accurate to full relative
// precision near it.
void plan_interval(double L, const std::vector<double>& fronts,
                   const std::vector<std::pair<double, double>>& grades, int n_regular,
                   const QuadOptions& opt, std::vector<double>& nodes, std::vector<double>& weights,
                   std::vector<double>* anchors = nullptr, std::vector<double>* deltas = nullptr);

// Distance between two segments and the arclength position on the first
// segment of a closest point.
double segment_distance(Vec2 a1, Vec2 b1, Vec2 a2, Vec2 b2, double* s_on_first = nullptr);

}  // namespace tdbem
