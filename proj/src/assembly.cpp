#include "tdbem/assembly.h"

#include <algorithm>
#include <cstring>
#include <istream>
#include <ostream>
#include <thread>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace tdbem {

double smooth_step_profile(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 0.125) return 1.0;
  const double s = std::sin(4.0 * pi * t);
  return s * s;
}

double heaviside_profile(double t) { return t > 0.0 ? 1.0 : 0.0; }

double BoundaryDatum::value(int i, Vec2 x, double t) const {
  if (field) return field(i, x, t);
  if (!profile || !spatial[i]) return 0.0;
  return profile(t) * spatial[i](x);
}

BoundaryDatum datum_polynomial(double c1, double c2, double power) {
  BoundaryDatum d;
  d.profile = smooth_step_profile;
  if (c1 != 0.0) d.spatial[0] = [c1, power](Vec2 x) { return c1 * std::pow(x.x, power); };
  if (c2 != 0.0) d.spatial[1] = [c2, power](Vec2 x) { return c2 * std::pow(x.x, power); };
  return d;
}

BoundaryDatum datum_abs_power(double c1, double c2, double power) {
  BoundaryDatum d;
  d.profile = smooth_step_profile;
  if (c1 != 0.0) d.spatial[0] = [c1, power](Vec2 x) { return c1 * std::pow(std::abs(x.x), power); };
  if (c2 != 0.0) d.spatial[1] = [c2, power](Vec2 x) { return c2 * std::pow(std::abs(x.x), power); };
  d.kinks_x.push_back(0.0);
  return d;
}

BoundaryDatum datum_constant(double eta1, double eta2) {
  BoundaryDatum d;
  d.profile = heaviside_profile;
  d.spatial[0] = [eta1](Vec2) { return eta1; };
  d.spatial[1] = [eta2](Vec2) { return eta2; };
  return d;
}

BoundaryDatum datum_ramp(double eta1, double eta2, double width) {
  BoundaryDatum d = datum_constant(eta1, eta2);
  d.profile = [width](double t) { return std::clamp(t / width, 0.0, 1.0); };
  return d;
}

BoundaryDatum as_field(const BoundaryDatum& d) {
  BoundaryDatum f;
  f.kinks_x = d.kinks_x;
  auto prof = d.profile;
  auto sp = d.spatial;
  f.field = [prof, sp](int i, Vec2 x, double t) {
    if (!sp[i]) return 0.0;
    return prof(t) * sp[i](x);
  };
  return f;
}

AssemblyOptions assembly_options_from_tol(double tol) {
  AssemblyOptions o;
  o.quad = QuadOptions::from_tol(tol);
  return o;
}

double min_element_gap(const BoundaryMesh& mesh, std::size_t e1, std::size_t e2) {
  if (e1 == e2) return 0.0;
  return segment_distance(mesh.a(e1), mesh.b(e1), mesh.a(e2), mesh.b(e2));
}

namespace {

Eigen::MatrixXd assemble_block(KernelKind kind, const BasisSpace& space, const TimeGrid& time,
                               const Material& m, int lag, const AssemblyOptions& opt) {
  if (lag < 0 || lag >= time.n_steps) throw ParameterError("lag outside the time grid");
  const int M = space.dof_count;
  const std::size_t ne = space.mesh.element_count();
  const Stencil st = block_stencil(lag, time.dt);
  const double scale = kind == KernelKind::single_layer
                           ? 1.0 / (2.0 * pi * m.rho)
                           : -1.0 / (2.0 * pi * m.rho * time.dt * time.dt);
  const double reach = m.c_p * st.max_delta();

  auto work = [&](std::size_t first, std::size_t stride, Eigen::MatrixXd& E) {
    std::vector<double> loc;
    for (std::size_t eo = first; eo < ne; eo += stride) {
      for (std::size_t ei = 0; ei < ne; ++ei) {
        if (eo != ei && min_element_gap(space.mesh, eo, ei) >= reach) continue;
        const PairGeometry pg = make_pair_geometry(space, eo, space, ei);
        try {
          integrate_pair(kind, pg, st, m, opt.quad, loc);
        } catch (const AccuracyError& e) {
          throw AccuracyError("element pair (" + std::to_string(eo) + ", " + std::to_string(ei) +
                                  "), lag " + std::to_string(lag) + ": " + e.what(),
                              e.best_estimate);
        }
        const int no = pg.outer.degree + 1, ni = pg.inner.degree + 1;
        const auto& mo = space.dof_map[eo];
        const auto& mi = space.dof_map[ei];
        for (int c = 0; c < 4; ++c) {
          const int i = c / 2, j = c % 2;
          for (int a = 0; a < no; ++a) {
            if (mo[a] < 0) continue;
            for (int b = 0; b < ni; ++b) {
              if (mi[b] < 0) continue;
              E(i * M + mo[a], j * M + mi[b]) += scale * loc[(c * no + a) * ni + b];
            }
          }
        }
      }
    }
  };

  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(2 * M, 2 * M);
  const int nt = std::max(1, std::min<int>(opt.threads, static_cast<int>(ne)));
  if (nt == 1) {
    work(0, 1, E);
  } else {
    std::vector<Eigen::MatrixXd> parts(nt, Eigen::MatrixXd::Zero(2 * M, 2 * M));
    std::vector<std::exception_ptr> errs(nt);
    std::vector<std::thread> pool;
    for (int t = 0; t < nt; ++t)
      pool.emplace_back([&, t] {
        try {
          work(t, nt, parts[t]);
        } catch (...) {
          errs[t] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errs)
      if (e) std::rethrow_exception(e);
    for (auto& p : parts) E += p;
  }
  // exact component symmetry E_12 = E_21 (the kernel is symmetric in i, j)
  if (kind == KernelKind::single_layer) {
    E.block(M, 0, M, M) = E.block(0, M, M, M);
  }
  return E;
}

}  // namespace

Eigen::MatrixXd assemble_block_v(const BasisSpace& space, const TimeGrid& time, const Material& m,
                                 int lag, const AssemblyOptions& opt) {
  return assemble_block(KernelKind::single_layer, space, time, m, lag, opt);
}

Eigen::MatrixXd assemble_block_w(const BasisSpace& space, const TimeGrid& time, const Material& m,
                                 int lag, const AssemblyOptions& opt) {
  if (space.continuity != Continuity::continuous_vanishing_at_tips &&
      space.continuity != Continuity::continuous)
    throw SpaceError("hypersingular assembly needs a continuous space");
  return assemble_block(KernelKind::hypersingular, space, time, m, lag, opt);
}

ToeplitzBlockSystem assemble_system(UnknownKind kind, const BasisSpace& space,
                                    const TimeGrid& time, const Material& m,
                                    const AssemblyOptions& opt) {
  ToeplitzBlockSystem sys;
  sys.unknown_kind = kind;
  sys.space = space;
  sys.time = time;
  sys.material = m;
  sys.blocks.reserve(time.n_steps);
  for (int l = 0; l < time.n_steps; ++l) {
    if (kind == UnknownKind::dirichlet_traction)
      sys.blocks.push_back(assemble_block_v(space, time, m, l, opt));
    else
      sys.blocks.push_back(assemble_block_w(space, time, m, l, opt));
  }
  return sys;
}

namespace {

// For each element: quadrature points and weights in arclength, split at
// datum kinks.
void element_rule(const BoundaryMesh& mesh, std::size_t e, const std::vector<double>& kinks,
                  std::vector<double>& s, std::vector<double>& w) {
  const QuadRule& q = gauss_legendre_cached(16);
  const double L = mesh.length(e);
  const Vec2 a = mesh.a(e), b = mesh.b(e);
  std::vector<double> cuts = {0.0, L};
  if (std::abs(b.x - a.x) > 0.0)
    for (double k : kinks) {
      const double tt = (k - a.x) / (b.x - a.x);
      if (tt > 1e-14 && tt < 1.0 - 1e-14) cuts.push_back(tt * L);
    }
  std::sort(cuts.begin(), cuts.end());
  s.clear();
  w.clear();
  for (std::size_t j = 0; j + 1 < cuts.size(); ++j)
    for (std::size_t k = 0; k < q.nodes.size(); ++k) {
      s.push_back(cuts[j] + (cuts[j + 1] - cuts[j]) * q.nodes[k]);
      w.push_back((cuts[j + 1] - cuts[j]) * q.weights[k]);
    }
}

// Per-step time functional of a datum: the increment over the step, or the
// step average.
enum class TimeFunctional { increment, average };

double step_value(const std::function<double(double)>& f, const TimeGrid& time, int n,
                  TimeFunctional kind) {
  const double t0 = time.t(n), t1 = time.t(n + 1);
  if (kind == TimeFunctional::increment) return f(t1) - f(t0);
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 15>::integrate(f, t0, t1, 12, 1e-13) / time.dt;
}

// Entries  int w_m T[g](x, n) dGamma  for every step n, T the time functional.
RhsHistory time_moments(const BasisSpace& space, const TimeGrid& time, const BoundaryDatum& d,
                        TimeFunctional kind, double factor) {
  const int M = space.dof_count;
  const BoundaryMesh& mesh = space.mesh;
  RhsHistory rhs;
  rhs.vectors.assign(time.n_steps, Eigen::VectorXd::Zero(2 * M));
  std::vector<double> s, w;
  double sv[16];
  if (d.separable()) {
    Eigen::VectorXd base = Eigen::VectorXd::Zero(2 * M);
    for (std::size_t e = 0; e < mesh.element_count(); ++e) {
      element_rule(mesh, e, d.kinks_x, s, w);
      const double L = mesh.length(e);
      const int nl = space.degree[e] + 1;
      for (std::size_t q = 0; q < s.size(); ++q) {
        const Vec2 x = mesh.a(e) + s[q] * mesh.tangent(e);
        space.shapes[e].values(s[q] / L, sv);
        for (int i = 0; i < 2; ++i) {
          if (!d.spatial[i]) continue;
          const double g = d.spatial[i](x) * w[q];
          for (int a = 0; a < nl; ++a)
            if (space.dof_map[e][a] >= 0) base(i * M + space.dof_map[e][a]) += g * sv[a];
        }
      }
    }
    for (int n = 0; n < time.n_steps; ++n) {
      const double df = step_value(d.profile, time, n, kind);
      if (df != 0.0) rhs.vectors[n] = factor * df * base;
    }
    return rhs;
  }
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    element_rule(mesh, e, d.kinks_x, s, w);
    const double L = mesh.length(e);
    const int nl = space.degree[e] + 1;
    for (std::size_t q = 0; q < s.size(); ++q) {
      const Vec2 x = mesh.a(e) + s[q] * mesh.tangent(e);
      space.shapes[e].values(s[q] / L, sv);
      for (int n = 0; n < time.n_steps; ++n)
        for (int i = 0; i < 2; ++i) {
          const auto f = [&](double t) { return d.value(i, x, t); };
          const double g = factor * step_value(f, time, n, kind) * w[q];
          if (g == 0.0) continue;
          for (int a = 0; a < nl; ++a)
            if (space.dof_map[e][a] >= 0) rhs.vectors[n](i * M + space.dof_map[e][a]) += g * sv[a];
        }
    }
  }
  return rhs;
}

}  // namespace

RhsHistory assemble_rhs_dirichlet(const BasisSpace& space, const TimeGrid& time,
                                  const BoundaryDatum& datum) {
  return time_moments(space, time, datum, TimeFunctional::increment, 1.0);
}

// The hypersingular rows are tested with the time derivative of the ramp
// functions, a piecewise constant of height 1/dt, so each entry holds the
// step average of h with the sign of the assembled W blocks.
RhsHistory assemble_rhs_neumann(const BasisSpace& space, const TimeGrid& time,
                                const BoundaryDatum& datum) {
  return time_moments(space, time, datum, TimeFunctional::average, -1.0);
}

namespace {

struct Hasher {
  std::uint64_t h = 1469598103934665603ull;
  void bytes(const void* p, std::size_t n) {
    const unsigned char* c = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= c[i];
      h *= 1099511628211ull;
    }
  }
  template <class T>
  void add(const T& v) {
    bytes(&v, sizeof(T));
  }
};

constexpr char kMagic[8] = {'T', 'D', 'B', 'E', 'M', 'B', 'L', 'K'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

std::uint64_t cache_key(const BasisSpace& space, const TimeGrid& time, const Material& m,
                        UnknownKind kind, const QuadOptions& q) {
  Hasher h;
  for (const Vec2& p : space.mesh.nodes) {
    h.add(p.x);
    h.add(p.y);
  }
  for (const auto& e : space.mesh.elements) {
    h.add(e.first);
    h.add(e.second);
  }
  for (int d : space.degree) h.add(d);
  h.add(static_cast<int>(space.continuity));
  h.add(time.dt);
  h.add(time.n_steps);
  h.add(m.lambda);
  h.add(m.mu);
  h.add(m.rho);
  h.add(static_cast<int>(kind));
  h.add(q.n_regular);
  h.add(q.n_graded);
  h.add(q.n_far);
  h.add(q.sigma);
  h.add(q.depth);
  h.add(q.near_ratio);
  h.add(q.far_ratio);
  h.add(q.front_margin);
  return h.h;
}

void write_block_cache(std::ostream& os, const ToeplitzBlockSystem& sys, std::uint64_t key) {
  static_assert(sizeof(double) == 8);
  os.write(kMagic, 8);
  os.write(reinterpret_cast<const char*>(&kVersion), 4);
  os.write(reinterpret_cast<const char*>(&key), 8);
  const std::uint64_t M = sys.space.dof_count, N = sys.blocks.size();
  os.write(reinterpret_cast<const char*>(&M), 8);
  os.write(reinterpret_cast<const char*>(&N), 8);
  for (const auto& B : sys.blocks) {
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> R = B;
    os.write(reinterpret_cast<const char*>(R.data()), sizeof(double) * R.size());
  }
}

bool read_block_cache(std::istream& is, ToeplitzBlockSystem& sys, std::uint64_t key) {
  char magic[8];
  std::uint32_t version = 0;
  std::uint64_t k = 0, M = 0, N = 0;
  if (!is.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) return false;
  if (!is.read(reinterpret_cast<char*>(&version), 4) || version != kVersion) return false;
  if (!is.read(reinterpret_cast<char*>(&k), 8) || k != key) return false;
  if (!is.read(reinterpret_cast<char*>(&M), 8) || !is.read(reinterpret_cast<char*>(&N), 8))
    return false;
  if (M != static_cast<std::uint64_t>(sys.space.dof_count)) return false;
  std::vector<Eigen::MatrixXd> blocks;
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> R(2 * M, 2 * M);
  for (std::uint64_t n = 0; n < N; ++n) {
    if (!is.read(reinterpret_cast<char*>(R.data()), sizeof(double) * R.size())) return false;
    blocks.push_back(R);
  }
  sys.blocks = std::move(blocks);
  return true;
}

}  // namespace tdbem
