#include "tdbem/experiments.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

namespace tdbem {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const char* b = v.data();
  const char* e = v.data() + v.size();
  const auto r = std::from_chars(b, e, x);
  if (r.ec != std::errc() || r.ptr != e) throw ConfigError("bad number for " + key + ": '" + v + "'");
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  int x = 0;
  const char* e = v.data() + v.size();
  const auto r = std::from_chars(v.data(), e, x);
  if (r.ec != std::errc() || r.ptr != e) throw ConfigError("bad integer for " + key + ": '" + v + "'");
  return x;
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& s : split(v, ',')) out.push_back(to_double(key, s));
  return out;
}

Vec2 to_point(const std::string& key, const std::string& v) {
  const auto xs = to_doubles(key, v);
  if (xs.size() != 2) throw ConfigError(key + " needs two coordinates");
  return {xs[0], xs[1]};
}

MeshSpec parse_mesh(const std::string& key, const std::string& v) {
  const auto f = split(v, ':');
  if (f.empty()) throw ConfigError("empty mesh spec");
  if (f[0] == "uniform" && f.size() == 2) return MeshSpec::uniform(to_int(key, f[1]));
  if (f[0] == "algebraic" && f.size() == 3) return MeshSpec::algebraic(to_double(key, f[1]), to_int(key, f[2]));
  if (f[0] == "geometric" && f.size() == 3) return MeshSpec::geometric(to_double(key, f[1]), to_int(key, f[2]));
  throw ConfigError("bad mesh spec '" + v + "' (uniform:M, algebraic:beta:N, geometric:sigma:N)");
}

std::string mesh_string(const MeshSpec& m) {
  std::ostringstream os;
  os << std::setprecision(17);
  switch (m.refinement) {
    case MeshSpec::Refinement::uniform: os << "uniform:" << m.elements; break;
    case MeshSpec::Refinement::algebraic: os << "algebraic:" << m.beta << ':' << m.n_l; break;
    case MeshSpec::Refinement::geometric: os << "geometric:" << m.sigma << ':' << m.n_l; break;
  }
  return os.str();
}

Continuity parse_continuity(const std::string& v) {
  if (v == "discontinuous") return Continuity::discontinuous;
  if (v == "continuous") return Continuity::continuous;
  if (v == "vanishing_at_tips") return Continuity::continuous_vanishing_at_tips;
  throw ConfigError("bad continuity '" + v + "'");
}

const char* continuity_string(Continuity c) {
  switch (c) {
    case Continuity::discontinuous: return "discontinuous";
    case Continuity::continuous: return "continuous";
    case Continuity::continuous_vanishing_at_tips: return "vanishing_at_tips";
  }
  return "";
}

Continuity default_continuity(const ExperimentConfig& c, const LevelSpec& l) {
  if (l.continuity) return *l.continuity;
  if (c.problem == ProblemKind::neumann_w)
    return c.geometry.kind == BoundaryGeometry::Kind::open_segment ? Continuity::continuous_vanishing_at_tips
                                                                   : Continuity::continuous;
  return l.degree == 0 ? Continuity::discontinuous : Continuity::continuous;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

void write_file(const std::filesystem::path& p, void (*w)(std::ostream&, const ConvergenceReport&),
                const ConvergenceReport& r) {
  std::ofstream os(p);
  if (!os) throw ConfigError("cannot write " + p.string());
  w(os, r);
  if (!os) throw ConfigError("write failed for " + p.string());
}

// arclength position of the boundary point closest to x
double arc_position(const BoundaryMesh& mesh, Vec2 x) {
  double best = std::numeric_limits<double>::infinity(), pos = 0.0, acc = 0.0;
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    const Vec2 a = mesh.a(e), d = mesh.b(e) - a;
    const double L = mesh.length(e);
    const double s = std::clamp(dot(x - a, d) / (L * L), 0.0, 1.0);
    const double dist = norm(a + s * d - x);
    if (dist < best - 1e-14) {
      best = dist;
      pos = acc + s * L;
    }
    acc += L;
  }
  return pos;
}

}  // namespace

ExperimentConfig parse_config(std::istream& is) {
  ExperimentConfig c;
  std::optional<double> cp, cs;
  std::string line;
  int lineno = 0;
  bool have_vertices = false;
  std::string geometry = "segment";
  std::vector<Vec2> vertices;
  while (std::getline(is, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
    const std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
    auto level = [&]() -> LevelSpec& {
      if (c.levels.empty()) throw ConfigError("line " + std::to_string(lineno) + ": " + k + " before level.mesh");
      return c.levels.back();
    };
    try {
      if (k == "name") c.name = v;
      else if (k == "problem") {
        if (v == "dirichlet_v") c.problem = ProblemKind::dirichlet_v;
        else if (v == "neumann_w") c.problem = ProblemKind::neumann_w;
        else throw ConfigError("bad problem '" + v + "'");
      } else if (k == "geometry") geometry = v;
      else if (k == "vertices") {
        vertices.clear();
        for (const auto& p : split(v, ';')) vertices.push_back(to_point(k, p));
        have_vertices = true;
      } else if (k == "material.lambda") c.lambda = to_double(k, v);
      else if (k == "material.mu") c.mu = to_double(k, v);
      else if (k == "material.rho") c.rho = to_double(k, v);
      else if (k == "material.cp") cp = to_double(k, v);
      else if (k == "material.cs") cs = to_double(k, v);
      else if (k == "datum") c.datum = v;
      else if (k == "datum.coef1") c.coef1 = to_double(k, v);
      else if (k == "datum.coef2") c.coef2 = to_double(k, v);
      else if (k == "T") c.T = to_double(k, v);
      else if (k == "quad.tol") c.quad_tol = to_double(k, v);
      else if (k == "threads") c.threads = to_int(k, v);
      else if (k == "benchmark") c.benchmark = to_double(k, v);
      else if (k == "benchmark.source") c.benchmark_source = v;
      else if (k == "output.trace_times") c.trace_times = to_doubles(k, v);
      else if (k == "output.tip") c.tip = to_point(k, v);
      else if (k == "output.tip_radius") c.tip_radius = to_double(k, v);
      else if (k == "output.history_point") c.history_point = to_point(k, v);
      else if (k == "level.mesh") {
        c.levels.push_back({});
        c.levels.back().mesh = parse_mesh(k, v);
      } else if (k == "level.sides") {
        level().mesh.side_elements.clear();
        for (const auto& s : split(v, ',')) level().mesh.side_elements.push_back(to_int(k, s));
      } else if (k == "level.degree") level().degree = to_int(k, v);
      else if (k == "level.dt") level().dt = to_double(k, v);
      else if (k == "level.continuity") level().continuity = parse_continuity(v);
      else throw ConfigError("unknown key '" + k + "'");
    } catch (const ConfigError& e) {
      const std::string msg = e.what();
      if (msg.rfind("line ", 0) == 0) throw;
      throw ConfigError("line " + std::to_string(lineno) + ": " + msg);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (cp || cs) {
    if (!cp || !cs) throw ConfigError("material.cp and material.cs go together");
    const Material m = material_from_speeds(*cp, *cs, c.rho);
    c.lambda = m.lambda;
    c.mu = m.mu;
  }
  try {
    if (geometry == "segment") {
      if (!have_vertices) vertices = {{-0.5, 0.0}, {0.5, 0.0}};
      if (vertices.size() != 2) throw ConfigError("segment needs two vertices");
      c.geometry = BoundaryGeometry::segment(vertices[0], vertices[1]);
    } else if (geometry == "polygon") {
      c.geometry = BoundaryGeometry::polygon(vertices);
    } else {
      throw ConfigError("bad geometry '" + geometry + "'");
    }
    (void)c.material();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (c.levels.empty()) throw ConfigError("no levels given");
  for (std::size_t i = 0; i < c.levels.size(); ++i) {
    const auto& l = c.levels[i];
    if (!(l.dt > 0.0)) throw ConfigError("level " + std::to_string(i) + ": level.dt must be positive");
    if (l.degree < 0) throw ConfigError("level " + std::to_string(i) + ": negative degree");
  }
  if (!(c.T > 0.0)) throw ConfigError("T must be positive");
  (void)make_datum(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config " + path.string());
  return parse_config(is);
}

void write_config(std::ostream& os, const ExperimentConfig& c) {
  os << "name=" << c.name << '\n';
  os << "problem=" << (c.problem == ProblemKind::dirichlet_v ? "dirichlet_v" : "neumann_w") << '\n';
  const bool seg = c.geometry.kind == BoundaryGeometry::Kind::open_segment;
  os << "geometry=" << (seg ? "segment" : "polygon") << '\n';
  os << "vertices=";
  for (std::size_t i = 0; i < c.geometry.vertices.size(); ++i)
    os << (i ? ";" : "") << fmt(c.geometry.vertices[i].x) << ',' << fmt(c.geometry.vertices[i].y);
  os << '\n';
  os << "material.lambda=" << fmt(c.lambda) << "\nmaterial.mu=" << fmt(c.mu) << "\nmaterial.rho=" << fmt(c.rho)
     << '\n';
  os << "datum=" << c.datum << "\ndatum.coef1=" << fmt(c.coef1) << "\ndatum.coef2=" << fmt(c.coef2) << '\n';
  os << "T=" << fmt(c.T) << '\n';
  if (c.quad_tol > 0.0) os << "quad.tol=" << fmt(c.quad_tol) << '\n';
  if (c.threads != 1) os << "threads=" << c.threads << '\n';
  if (c.benchmark) os << "benchmark=" << fmt(*c.benchmark) << '\n';
  if (!c.benchmark_source.empty()) os << "benchmark.source=" << c.benchmark_source << '\n';
  if (!c.trace_times.empty()) {
    os << "output.trace_times=";
    for (std::size_t i = 0; i < c.trace_times.size(); ++i) os << (i ? "," : "") << fmt(c.trace_times[i]);
    os << '\n';
  }
  if (c.tip) os << "output.tip=" << fmt(c.tip->x) << ',' << fmt(c.tip->y) << '\n';
  os << "output.tip_radius=" << fmt(c.tip_radius) << '\n';
  if (c.history_point) os << "output.history_point=" << fmt(c.history_point->x) << ',' << fmt(c.history_point->y) << '\n';
  for (const auto& l : c.levels) {
    os << "level.mesh=" << mesh_string(l.mesh) << '\n';
    if (!l.mesh.side_elements.empty()) {
      os << "level.sides=";
      for (std::size_t i = 0; i < l.mesh.side_elements.size(); ++i) os << (i ? "," : "") << l.mesh.side_elements[i];
      os << '\n';
    }
    os << "level.degree=" << l.degree << '\n';
    if (l.continuity) os << "level.continuity=" << continuity_string(*l.continuity) << '\n';
    os << "level.dt=" << fmt(l.dt) << '\n';
  }
}

ExperimentConfig preset(const std::string& name) {
  std::istringstream is(preset_text(name));
  return parse_config(is);
}

BoundaryDatum make_datum(const ExperimentConfig& c) {
  if (c.datum == "x4_profile") return datum_polynomial(c.coef1, c.coef2, 4.0);
  if (c.datum == "x_profile") return datum_polynomial(c.coef1, c.coef2, 1.0);
  if (c.datum == "unit_profile") return datum_polynomial(c.coef1, c.coef2, 0.0);
  if (c.datum == "abs_x_9p5") return datum_abs_power(c.coef1, c.coef2, 9.5);
  if (c.datum == "constant_eta") return datum_constant(c.coef1, c.coef2);
  throw ConfigError("unknown datum '" + c.datum + "'");
}

TimeHistorySolution solve_level(const ExperimentConfig& c, const LevelSpec& l, const AssemblyOptions& ao,
                                double* energy_out, double* residual_out) {
  const Material m = c.material();
  const BoundaryMesh mesh = make_mesh(c.geometry, l.mesh);
  const BasisSpace space = build_space(mesh, l.degree, default_continuity(c, l));
  const TimeGrid time = time_grid_from_dt(c.T, l.dt);
  const bool dir = c.problem == ProblemKind::dirichlet_v;
  const auto sys = assemble_system(dir ? UnknownKind::dirichlet_traction : UnknownKind::neumann_displacement,
                                   space, time, m, ao);
  const BoundaryDatum d = make_datum(c);
  const RhsHistory rhs = dir ? assemble_rhs_dirichlet(space, time, d) : assemble_rhs_neumann(space, time, d);
  TimeHistorySolution sol = mot_solve(sys, rhs);
  if (energy_out) *energy_out = energy(sys, sol);
  if (residual_out) *residual_out = mot_residual(sys, rhs, sol);
  return sol;
}

std::vector<TipSample> tip_sweep(const TimeHistorySolution& sol, Vec2 tip, double radius, double t) {
  const BoundaryMesh& mesh = sol.space.mesh;
  std::vector<TipSample> out;
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    const Vec2 a = mesh.a(e), b = mesh.b(e);
    const double L = mesh.length(e);
    if (std::abs(cross(b - a, tip - a)) > 1e-12 * L) continue;  // not on an incident side
    if (norm(a - tip) < 1e-12 || norm(b - tip) < 1e-12) continue;  // the element at the vertex
    const Vec2 mid = 0.5 * (a + b);
    const double r = norm(mid - tip);
    if (r > radius) continue;
    const Vec2 v = eval_on_element(sol, e, 0.5, t);
    TipSample smp{r, v.x, v.y, t};
    if (sol.space.degree[e] == 0) {
      smp.r0 = std::min(norm(a - tip), norm(b - tip));
      smp.r1 = std::max(norm(a - tip), norm(b - tip));
      smp.averaged = true;
    }
    out.push_back(smp);
  }
  std::sort(out.begin(), out.end(), [](const TipSample& x, const TipSample& y) { return x.r < y.r; });
  return out;
}

PowerLawFit fit_tip(const std::vector<TipSample>& samples) {
  std::vector<double> r, v;
  for (const auto& s : samples) {
    r.push_back(s.r);
    v.push_back(std::hypot(s.c1, s.c2));
  }
  PowerLawFit f = fit_power_law(r, v);
  const bool averaged = std::all_of(samples.begin(), samples.end(), [](const TipSample& s) { return s.averaged; });
  if (!averaged) return f;
  // fixed point: place each mean at the r where r^g equals the element mean of r^g
  for (int it = 0; it < 50; ++it) {
    const double g = f.exponent;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double a = samples[i].r0, b = samples[i].r1;
      const double mean = std::abs(g + 1.0) < 1e-12 ? std::log(b / a) / (b - a)
                                                     : (std::pow(b, g + 1.0) - std::pow(a, g + 1.0)) / ((g + 1.0) * (b - a));
      r[i] = std::abs(g) < 1e-12 ? samples[i].r : std::pow(mean, 1.0 / g);
    }
    const PowerLawFit next = fit_power_law(r, v);
    const bool done = std::abs(next.exponent - f.exponent) < 1e-12;
    f = next;
    if (done) break;
  }
  return f;
}

RateTable rate_table(const std::vector<int>& dof, const std::vector<double>& err) {
  if (dof.size() != err.size()) throw ParameterError("rate_table: size mismatch");
  RateTable t;
  std::vector<double> x, y;
  for (std::size_t i = 0; i < dof.size(); ++i) {
    if (!(err[i] > 0.0)) {
      t.reliable = false;
      t.note += "level " + std::to_string(i) + " has non-positive error; ";
      continue;
    }
    x.push_back(std::log(double(dof[i])));
    y.push_back(std::log(err[i]));
  }
  if (x.size() < 3) throw ParameterError("rate_table needs at least 3 levels with positive error");
  for (std::size_t i = 1; i < x.size(); ++i) {
    t.local.push_back((y[i] - y[i - 1]) / (x[i] - x[i - 1]));
    if (!(y[i] < y[i - 1])) {
      t.reliable = false;
      t.note += "error not decreasing at level " + std::to_string(i) + "; ";
    }
  }
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  t.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return t;
}

RateTable rate_table(const ConvergenceReport& r) {
  if (!r.benchmark) throw ParameterError("rate_table needs a benchmark");
  std::vector<int> dof;
  std::vector<double> err;
  for (const auto& row : r.rows) {
    dof.push_back(row.dof);
    err.push_back(row.sq_error);
  }
  RateTable t = rate_table(dof, err);
  if (!r.monotone) {
    t.reliable = false;
    t.note += "energy ladder not monotone; ";
  }
  return t;
}

ConvergenceReport run_experiment(const ExperimentConfig& c, const RunOptions& opt) {
  ConvergenceReport rep;
  rep.name = c.name;
  rep.benchmark = c.benchmark;
  rep.benchmark_source = c.benchmark_source;
  AssemblyOptions ao;
  const double tol = opt.tol.value_or(c.quad_tol);
  if (tol > 0.0) ao = assembly_options_from_tol(tol);
  ao.threads = opt.threads.value_or(c.threads);
  if (opt.out_dir) std::filesystem::create_directories(*opt.out_dir);

  const int last = opt.last_level < 0 ? int(c.levels.size()) - 1 : std::min(opt.last_level, int(c.levels.size()) - 1);
  if (opt.first_level < 0 || opt.first_level > last) throw ConfigError("empty level range");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int i = opt.first_level; i <= last; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    LevelRow row;
    row.level = i;
    row.dt = c.levels[i].dt;
    TimeHistorySolution sol;
    try {
      sol = solve_level(c, c.levels[i], ao, &row.energy, &row.residual);
      if (!(row.residual <= 1e-8))
        throw AccuracyError("marching residual " + fmt(row.residual) + " above 1e-8", row.residual);
    } catch (const AccuracyError& e) {
      if (opt.out_dir) write_file(*opt.out_dir / "energy_ladder.csv", write_energy_ladder, rep);
      throw AccuracyError(c.name + " level " + std::to_string(i) + ": " + e.what(), e.best_estimate);
    } catch (const ConfigError& e) {
      if (opt.out_dir) write_file(*opt.out_dir / "energy_ladder.csv", write_energy_ladder, rep);
      throw ConfigError(c.name + " level " + std::to_string(i) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      if (opt.out_dir) write_file(*opt.out_dir / "energy_ladder.csv", write_energy_ladder, rep);
      throw ConfigError(c.name + " level " + std::to_string(i) + ": " + e.what());
    }
    row.dof = sol.space.dof_count;
    row.sq_error = c.benchmark ? *c.benchmark - row.energy : nan;
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!rep.rows.empty() && row.energy < rep.rows.back().energy) {
      rep.monotone = false;
      rep.warnings.push_back("energy decreases at level " + std::to_string(i));
    }
    if (c.benchmark && row.sq_error < -1e-6 * std::abs(*c.benchmark))
      rep.warnings.push_back("energy above benchmark at level " + std::to_string(i));
    rep.rows.push_back(row);
    if (!opt.quiet)
      std::cerr << c.name << " level " << i << ": dof " << row.dof << " dt " << row.dt << " energy "
                << std::setprecision(6) << row.energy << " (" << std::setprecision(3) << row.seconds << " s)\n";
    if (opt.out_dir) write_file(*opt.out_dir / "energy_ladder.csv", write_energy_ladder, rep);

    if (i != last) continue;
    const BoundaryMesh& mesh = sol.space.mesh;
    for (double t : c.trace_times) {
      if (c.tip) {
        const auto s = tip_sweep(sol, *c.tip, c.tip_radius, t);
        rep.tip_sweep.insert(rep.tip_sweep.end(), s.begin(), s.end());
        try {
          if (s.size() >= 3) rep.tip_fits.push_back({t, fit_tip(s)});
        } catch (const ParameterError& e) {
          rep.warnings.push_back("no tip fit at t=" + fmt(t) + ": " + e.what());
        }
      }
      double acc = 0.0;
      for (std::size_t e = 0; e < mesh.element_count(); ++e) {
        const double L = mesh.length(e);
        for (double u : {0.25, 0.5, 0.75}) {
          const Vec2 x = mesh.a(e) + u * (mesh.b(e) - mesh.a(e));
          const Vec2 v = eval_on_element(sol, e, u, t);
          rep.trace.push_back({acc + u * L, x.x, x.y, v.x, v.y, t});
        }
        acc += L;
      }
    }
    if (c.history_point) {
      const double s = arc_position(mesh, *c.history_point);
      for (int n = 0; n <= sol.time.n_steps; ++n) {
        const double t = sol.time.t(n);
        const Vec2 v = eval_on_boundary(sol, s, t);
        rep.history.push_back({t, v.x, v.y});
      }
    }
  }
  if (opt.out_dir) emit_plot_data(rep, *opt.out_dir);
  return rep;
}

void write_energy_ladder(std::ostream& os, const ConvergenceReport& r) {
  os << "level,dof,dt,energy,sq_error\n";
  for (const auto& row : r.rows)
    os << row.level << ',' << row.dof << ',' << fmt(row.dt) << ',' << fmt(row.energy) << ',' << fmt(row.sq_error)
       << '\n';
}

void write_tip_sweep(std::ostream& os, const ConvergenceReport& r) {
  os << "r,component1,component2,t\n";
  for (const auto& s : r.tip_sweep) os << fmt(s.r) << ',' << fmt(s.c1) << ',' << fmt(s.c2) << ',' << fmt(s.t) << '\n';
}

void write_history(std::ostream& os, const ConvergenceReport& r) {
  os << "t,component1,component2\n";
  for (const auto& s : r.history) os << fmt(s.t) << ',' << fmt(s.c1) << ',' << fmt(s.c2) << '\n';
}

void write_trace(std::ostream& os, const ConvergenceReport& r) {
  os << "s,x,y,component1,component2,t\n";
  for (const auto& s : r.trace)
    os << fmt(s.s) << ',' << fmt(s.x) << ',' << fmt(s.y) << ',' << fmt(s.c1) << ',' << fmt(s.c2) << ',' << fmt(s.t)
       << '\n';
}

std::vector<LevelRow> read_energy_ladder(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || trim(line) != "level,dof,dt,energy,sq_error")
    throw ConfigError("not an energy ladder file");
  std::vector<LevelRow> rows;
  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 5) throw ConfigError("bad energy ladder row: " + line);
    LevelRow r;
    r.level = to_int("level", f[0]);
    r.dof = to_int("dof", f[1]);
    r.dt = to_double("dt", f[2]);
    r.energy = to_double("energy", f[3]);
    r.sq_error = f[4] == "nan" || f[4] == "-nan" ? std::numeric_limits<double>::quiet_NaN()
                                                 : to_double("sq_error", f[4]);
    rows.push_back(r);
  }
  return rows;
}

void emit_plot_data(const ConvergenceReport& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file(dir / "energy_ladder.csv", write_energy_ladder, r);
  write_file(dir / "tip_sweep.csv", write_tip_sweep, r);
  write_file(dir / "history.csv", write_history, r);
  write_file(dir / "trace.csv", write_trace, r);
}

}  // namespace tdbem
