#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tdbem/singular_analysis.h"
#include "tdbem/solver.h"

namespace tdbem {

enum class ProblemKind { dirichlet_v, neumann_w };

struct LevelSpec {
  MeshSpec mesh;
  int degree = 0;
  std::optional<Continuity> continuity;  // default from problem and degree
  double dt = 0.0;
};

// Flat key=value configuration. Ladder entries use `level.` keys; a
// `level.mesh` line opens a new level and later `level.*` keys refine it.
struct ExperimentConfig {
  std::string name;
  ProblemKind problem = ProblemKind::dirichlet_v;
  BoundaryGeometry geometry = BoundaryGeometry::segment({-0.5, 0.0}, {0.5, 0.0});
  std::vector<LevelSpec> levels;
  double lambda = 2.0, mu = 1.0, rho = 1.0;
  std::string datum = "x4_profile";  // x4_profile, x_profile, unit_profile, abs_x_9p5, constant_eta
  double coef1 = 1.0, coef2 = 1.0;
  double T = 1.0;
  double quad_tol = 0.0;  // 0 keeps the default rule
  int threads = 1;

  std::optional<double> benchmark;
  std::string benchmark_source;

  // optional outputs, evaluated on the finest level
  std::vector<double> trace_times;
  std::optional<Vec2> tip;            // vertex for the near-tip sweep
  double tip_radius = 0.1;            // sweep elements whose midpoint lies within this distance
  std::optional<Vec2> history_point;  // boundary point for the time history

  Material material() const { return make_material(lambda, mu, rho); }
};

ExperimentConfig parse_config(std::istream& is);
ExperimentConfig load_config(const std::filesystem::path& path);
void write_config(std::ostream& os, const ExperimentConfig& c);

std::vector<std::string> preset_names();
// Throws ConfigError for an unknown name.
std::string preset_text(const std::string& name);
ExperimentConfig preset(const std::string& name);

BoundaryDatum make_datum(const ExperimentConfig& c);

struct LevelRow {
  int level = 0;
  int dof = 0;
  double dt = 0.0;
  double energy = 0.0;
  double sq_error = 0.0;  // benchmark - energy; NaN without a benchmark
  double residual = 0.0;
  double seconds = 0.0;
};

struct TipSample {
  double r, c1, c2, t;
  // element end distances; set when the value is an element mean (degree 0)
  double r0 = 0.0, r1 = 0.0;
  bool averaged = false;
};

struct HistorySample {
  double t, c1, c2;
};

struct TraceSample {
  double s, x, y, c1, c2, t;  // arclength position, point, value, time
};

struct TipFit {
  double t = 0.0;
  PowerLawFit fit;
};

struct ConvergenceReport {
  std::string name;
  std::vector<LevelRow> rows;
  std::optional<double> benchmark;
  std::string benchmark_source;
  bool monotone = true;
  std::vector<std::string> warnings;

  std::vector<TipSample> tip_sweep;
  std::vector<TipFit> tip_fits;
  std::vector<HistorySample> history;
  std::vector<TraceSample> trace;
};

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;
  std::optional<double> tol;
  std::optional<int> threads;
  int first_level = 0;
  int last_level = -1;  // inclusive, -1 = all
  bool quiet = true;
};

// Solves every level and fills the report. CSVs go to out_dir when set;
// the energy ladder is rewritten after each level so a failure leaves the
// completed rows on disk. Stage errors are rethrown with level context.
ConvergenceReport run_experiment(const ExperimentConfig& c, const RunOptions& opt = {});

// Solve one level and keep the solution.
TimeHistorySolution solve_level(const ExperimentConfig& c, const LevelSpec& level,
                                const AssemblyOptions& ao, double* energy_out = nullptr,
                                double* residual_out = nullptr);

struct RateTable {
  double slope = 0.0;              // least squares of log(sq_error) vs log(dof)
  std::vector<double> local;       // between consecutive levels
  bool reliable = true;
  std::string note;
};

RateTable rate_table(const ConvergenceReport& report);
RateTable rate_table(const std::vector<int>& dof, const std::vector<double>& sq_error);

// Traction or displacement near a vertex: midpoint samples of the elements on
// the two incident sides within the given radius, skipping the element that
// touches the vertex.
std::vector<TipSample> tip_sweep(const TimeHistorySolution& sol, Vec2 tip, double radius, double t);
// Power-law fit of the magnitude. Element means are fitted against the mean
// of r^g over the element instead of its midpoint value; on graded meshes the
// midpoint rule biases the slope.
PowerLawFit fit_tip(const std::vector<TipSample>& samples);

// CSV layouts:
//   energy_ladder.csv  level,dof,dt,energy,sq_error
//   tip_sweep.csv      r,component1,component2,t
//   history.csv        t,component1,component2
//   trace.csv          s,x,y,component1,component2,t
void write_energy_ladder(std::ostream& os, const ConvergenceReport& r);
void write_tip_sweep(std::ostream& os, const ConvergenceReport& r);
void write_history(std::ostream& os, const ConvergenceReport& r);
void write_trace(std::ostream& os, const ConvergenceReport& r);
std::vector<LevelRow> read_energy_ladder(std::istream& is);
void emit_plot_data(const ConvergenceReport& r, const std::filesystem::path& dir);

}  // namespace tdbem
