#include "tdbem/solver.h"

#include <algorithm>
#include <iomanip>
#include <ostream>

namespace tdbem {

namespace {

void check_sizes(const ToeplitzBlockSystem& sys, std::size_t steps) {
  if (sys.blocks.empty()) throw ParameterError("empty block system");
  if (steps > sys.blocks.size()) throw ParameterError("more steps than assembled blocks");
}

Eigen::VectorXd history_product(const ToeplitzBlockSystem& sys,
                                const std::vector<Eigen::VectorXd>& a, std::size_t n,
                                std::size_t first_lag) {
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(sys.blocks[0].rows());
  for (std::size_t k = first_lag; k <= n; ++k) {
    const Eigen::MatrixXd& E = sys.blocks[k];
    if (E.isZero(0.0)) continue;
    acc.noalias() += E * a[n - k];
  }
  return acc;
}

}  // namespace

TimeHistorySolution mot_solve(const ToeplitzBlockSystem& sys, const RhsHistory& rhs) {
  check_sizes(sys, rhs.vectors.size());
  const Eigen::MatrixXd& E0 = sys.blocks[0];
  if (E0.rows() != 2 * sys.space.dof_count) throw ParameterError("block size mismatch");
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(E0);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-14)) throw ConditioningError("E^(0) is singular to working precision", 1.0 / rcond);

  // zero blocks are skipped in the history sums
  std::vector<char> nonzero(sys.blocks.size());
  for (std::size_t k = 0; k < sys.blocks.size(); ++k) nonzero[k] = !sys.blocks[k].isZero(0.0);

  TimeHistorySolution sol;
  sol.space = sys.space;
  sol.time = sys.time;
  sol.unknown_kind = sys.unknown_kind;
  sol.material = sys.material;
  sol.coefficients.reserve(rhs.vectors.size());
  for (std::size_t n = 0; n < rhs.vectors.size(); ++n) {
    Eigen::VectorXd g = rhs.vectors[n];
    if (g.size() != E0.rows()) throw ParameterError("right-hand side size mismatch");
    for (std::size_t k = 1; k <= n; ++k)
      if (nonzero[k]) g.noalias() -= sys.blocks[k] * sol.coefficients[n - k];
    sol.coefficients.push_back(lu.solve(g));
  }
  return sol;
}

double mot_residual(const ToeplitzBlockSystem& sys, const RhsHistory& rhs,
                    const TimeHistorySolution& sol) {
  check_sizes(sys, sol.coefficients.size());
  double num = 0.0, den = 0.0;
  for (std::size_t n = 0; n < sol.coefficients.size(); ++n) {
    const Eigen::VectorXd r = history_product(sys, sol.coefficients, n, 0) - rhs.vectors[n];
    num = std::max(num, r.lpNorm<Eigen::Infinity>());
    den = std::max(den, rhs.vectors[n].lpNorm<Eigen::Infinity>());
  }
  return den > 0.0 ? num / den : num;
}

double energy(const ToeplitzBlockSystem& sys, const TimeHistorySolution& sol) {
  check_sizes(sys, sol.coefficients.size());
  double e = 0.0;
  for (std::size_t n = 0; n < sol.coefficients.size(); ++n) {
    if (sol.coefficients[n].size() != sys.blocks[0].rows())
      throw ParameterError("solution size mismatch");
    e += sol.coefficients[n].dot(history_product(sys, sol.coefficients, n, 0));
  }
  return e;
}

double total_arclength(const BoundaryMesh& mesh) {
  double s = 0.0;
  for (std::size_t e = 0; e < mesh.element_count(); ++e) s += mesh.length(e);
  return s;
}

Vec2 eval_on_element(const TimeHistorySolution& sol, std::size_t e, double local, double t) {
  const BasisSpace& sp = sol.space;
  if (e >= sp.mesh.element_count()) throw DomainError("element index out of range");
  double sv[16];
  sp.shapes[e].values(std::clamp(local, 0.0, 1.0), sv);
  const int M = sp.dof_count;
  TimeBasis tb;
  tb.kind = sol.unknown_kind == UnknownKind::dirichlet_traction
                ? TimeBasisKind::piecewise_constant
                : TimeBasisKind::piecewise_linear_hat;
  tb.grid = sol.time;
  // piecewise constants take the last step's value at the final instant
  const double t_end = sol.time.t(static_cast<int>(sol.coefficients.size()));
  if (tb.kind == TimeBasisKind::piecewise_constant && std::abs(t - t_end) <= 1e-9 * sol.time.dt)
    t = t_end - 0.5 * sol.time.dt;
  Vec2 v;
  for (std::size_t n = 0; n < sol.coefficients.size(); ++n) {
    const double tw = eval_time_basis(tb, static_cast<int>(n), t);
    if (tw == 0.0) continue;
    for (int a = 0; a <= sp.degree[e]; ++a) {
      const int g = sp.dof_map[e][a];
      if (g < 0) continue;
      v.x += tw * sv[a] * sol.coefficients[n](g);
      v.y += tw * sv[a] * sol.coefficients[n](M + g);
    }
  }
  return v;
}

Vec2 eval_on_boundary(const TimeHistorySolution& sol, double s, double t) {
  const BoundaryMesh& mesh = sol.space.mesh;
  const double total = total_arclength(mesh);
  const double snap = 1e-10 * total;
  if (s < -snap || s > total + snap) throw DomainError("arc position off the boundary");
  s = std::clamp(s, 0.0, total);
  double acc = 0.0;
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    const double L = mesh.length(e);
    if (s <= acc + L || e + 1 == mesh.element_count())
      return eval_on_element(sol, e, (s - acc) / L, t);
    acc += L;
  }
  return {};
}

double elastostatic_factor(const Material& m) {
  const double cp2 = m.c_p * m.c_p, cs2 = m.c_s * m.c_s;
  return -cp2 / (m.rho * cs2 * (cp2 - cs2));
}

Vec2 elastostatic_reference(double x, Vec2 eta, const Material& m) {
  if (std::abs(x) > 0.5) throw DomainError("point outside the screen");
  const double r = std::sqrt(std::max(0.0, 0.25 - x * x));
  const double k = elastostatic_factor(m);
  return {k * eta.x * r, k * eta.y * r};
}

Vec2 eval_single_layer_potential(const TimeHistorySolution& sol, Vec2 x, double t,
                                 bool* near_boundary) {
  const BasisSpace& sp = sol.space;
  const BoundaryMesh& mesh = sp.mesh;
  const Material& m = sol.material;
  if (sol.unknown_kind != UnknownKind::dirichlet_traction)
    throw ParameterError("single-layer potential needs a traction history");
  double dmin = 1e300;
  for (std::size_t e = 0; e < mesh.element_count(); ++e)
    dmin = std::min(dmin, segment_distance(mesh.a(e), mesh.b(e), x, x));
  if (near_boundary) *near_boundary = dmin < 1e-8 * total_arclength(mesh);
  if (dmin <= 0.0) throw DomainError("field point on the boundary");

  const int M = sp.dof_count;
  const QuadOptions opt = QuadOptions::precise();
  std::vector<double> fronts, nodes, weights;
  std::vector<std::pair<double, double>> grades;
  double sv[16];
  double ux = 0.0, uy = 0.0;
  for (std::size_t n = 0; n < sol.coefficients.size(); ++n) {
    const double d0 = t - sol.time.t(static_cast<int>(n));
    if (d0 <= 0.0 || m.c_p * d0 <= dmin) continue;
    const double d1 = t - sol.time.t(static_cast<int>(n) + 1);
    const Eigen::VectorXd& c = sol.coefficients[n];
    for (std::size_t e = 0; e < mesh.element_count(); ++e) {
      const Vec2 a = mesh.a(e), tv = mesh.tangent(e);
      const double L = mesh.length(e);
      const double sproj = dot(x - a, tv);
      const double dperp = std::abs(cross(tv, x - a));
      fronts.clear();
      grades.clear();
      for (double dl : {d0, d1}) {
        if (dl <= 0.0) continue;
        for (double cc : {m.c_p, m.c_s}) {
          const double R = cc * dl;
          if (R <= dperp) continue;
          const double h = std::sqrt((R - dperp) * (R + dperp));
          fronts.push_back(sproj - h);
          fronts.push_back(sproj + h);
        }
      }
      const double sc = std::clamp(sproj, 0.0, L);
      const double dist = norm(x - (a + sc * tv));
      if (m.c_p * d0 <= dist) continue;
      if (dist < L) grades.push_back({sc, dist});
      plan_interval(L, fronts, grades, std::max(opt.n_regular, sp.degree[e] + 3), opt, nodes,
                    weights);
      for (std::size_t q = 0; q < nodes.size(); ++q) {
        const Vec2 xi = a + nodes[q] * tv;
        const Vec2 r = x - xi;
        const double u = dot(r, r);
        const double lr = 0.5 * std::log(u);
        detail::VScalars vs;
        detail::add_v_scalars(u, lr, d0, 1.0, m, vs);
        if (d1 > 0.0) detail::add_v_scalars(u, lr, d1, -1.0, m, vs);
        const Vec2 rh = (1.0 / std::sqrt(u)) * r;
        const double k11 = vs.d * (rh.x * rh.x - 0.5) + 0.5 * vs.e;
        const double k12 = vs.d * rh.x * rh.y;
        const double k22 = vs.d * (rh.y * rh.y - 0.5) + 0.5 * vs.e;
        sp.shapes[e].values(nodes[q] / L, sv);
        double p1 = 0.0, p2 = 0.0;
        for (int k = 0; k <= sp.degree[e]; ++k) {
          const int g = sp.dof_map[e][k];
          if (g < 0) continue;
          p1 += sv[k] * c(g);
          p2 += sv[k] * c(M + g);
        }
        ux += weights[q] * (k11 * p1 + k12 * p2);
        uy += weights[q] * (k12 * p1 + k22 * p2);
      }
    }
  }
  const double s = 1.0 / (2.0 * pi * m.rho);
  return {s * ux, s * uy};
}

void write_coefficients_csv(std::ostream& os, const TimeHistorySolution& sol) {
  os << "step,t";
  const int n = sol.coefficients.empty() ? 0 : static_cast<int>(sol.coefficients[0].size());
  for (int k = 0; k < n; ++k) os << ",c" << k;
  os << '\n' << std::setprecision(17);
  for (std::size_t s = 0; s < sol.coefficients.size(); ++s) {
    os << s << ',' << sol.time.t(static_cast<int>(s));
    for (int k = 0; k < n; ++k) os << ',' << sol.coefficients[s](k);
    os << '\n';
  }
}

}  // namespace tdbem
