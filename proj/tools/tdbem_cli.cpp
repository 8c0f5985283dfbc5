#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>

#include "tdbem/experiments.h"
#include "tdbem/singular_analysis.h"

using namespace tdbem;

namespace {

ExperimentConfig select_config(const std::string& path, const std::string& name) {
  if (!path.empty() && !name.empty()) throw ConfigError("give either --config or --preset");
  if (!path.empty()) return load_config(path);
  if (!name.empty()) return preset(name);
  throw ConfigError("one of --config or --preset is required");
}

void print_report(const ConvergenceReport& r) {
  std::cout << r.name << '\n';
  std::cout << std::setw(6) << "level" << std::setw(7) << "dof" << std::setw(14) << "dt" << std::setw(16)
            << "energy" << std::setw(16) << "sq_error" << '\n';
  for (const auto& row : r.rows)
    std::cout << std::setw(6) << row.level << std::setw(7) << row.dof << std::setw(14) << std::setprecision(6)
              << row.dt << std::setw(16) << std::setprecision(8) << row.energy << std::setw(16)
              << std::setprecision(4) << row.sq_error << '\n';
  if (r.benchmark) std::cout << "benchmark " << *r.benchmark << " (" << r.benchmark_source << ")\n";
  for (const auto& f : r.tip_fits)
    std::cout << "tip exponent at t=" << f.t << ": " << std::setprecision(4) << f.fit.exponent
              << (f.fit.sign_change ? " (values change sign)" : "") << '\n';
  for (const auto& w : r.warnings) std::cout << "warning: " << w << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Space-time Galerkin BEM for 2D elastodynamics"};
  app.require_subcommand(1);

  std::string config, preset_name, out;
  double tol = 0.0;
  int threads = 1;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "key=value experiment file");
    sub->add_option("--preset", preset_name, "named preset");
    sub->add_option("--out", out, "output directory for CSV files");
    sub->add_option("--tol", tol, "quadrature tolerance (0 keeps the default rule)");
    sub->add_option("--threads", threads, "assembly threads")->check(CLI::PositiveNumber);
  };

  auto* solve = app.add_subcommand("solve", "solve the finest level of one config");
  add_common(solve);
  auto* ladder = app.add_subcommand("ladder", "run every level and fit the convergence rate");
  add_common(ladder);

  auto* exps = app.add_subcommand("exponents", "corner exponents over the interior angle");
  double kstar = 5.0 / 3.0;
  int samples = 200;
  exps->add_option("--kstar", kstar, "Kolosov constant")->check(CLI::Range(1.0 + 1e-12, 1e6));
  exps->add_option("--samples", samples, "angles in (0, 2 pi)")->check(CLI::PositiveNumber);
  exps->add_option("--out", out, "output directory for exponent_curve.csv");

  auto* pres = app.add_subcommand("presets", "preset configs");
  pres->require_subcommand(1);
  auto* plist = pres->add_subcommand("list", "list preset names");
  auto* pshow = pres->add_subcommand("show", "print a preset config");
  std::string show_name;
  pshow->add_option("name", show_name)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*solve || *ladder) {
      const ExperimentConfig c = select_config(config, preset_name);
      RunOptions opt;
      if (!out.empty()) opt.out_dir = out;
      if (tol > 0.0) opt.tol = tol;
      opt.threads = threads;
      opt.quiet = false;
      if (*solve) opt.first_level = int(c.levels.size()) - 1;
      const ConvergenceReport r = run_experiment(c, opt);
      print_report(r);
      if (*ladder && r.benchmark && r.rows.size() >= 3) {
        try {
          const RateTable t = rate_table(r);
          std::cout << "fitted slope of sq_error vs dof: " << std::setprecision(4) << t.slope
                    << (t.reliable ? "" : "  (unreliable: " + t.note + ")") << '\n';
        } catch (const ParameterError& e) {
          std::cout << "no rate fit: " << e.what() << '\n';
        }
      }
    } else if (*exps) {
      std::cout << std::setprecision(6);
      for (double f : {7.0 / 24.0, 1.0 / 3.0, 3.0 / 8.0, 3.0 / 5.0})
        std::cout << "interior " << f << " pi: exterior exponent "
                  << exponent_elastic({2.0 * pi - f * pi, CornerCondition::dirichlet, kstar}) << '\n';
      if (!out.empty()) {
        std::filesystem::create_directories(out);
        std::ofstream os(std::filesystem::path(out) / "exponent_curve.csv");
        if (!os) throw ConfigError("cannot write to " + out);
        std::vector<double> w;
        for (int i = 1; i < samples; ++i) w.push_back(2.0 * pi * i / samples);
        write_exponent_curve(os, kstar, w);
      }
    } else if (*plist) {
      for (const auto& n : preset_names()) std::cout << n << '\n';
    } else if (*pshow) {
      std::cout << preset_text(show_name);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "output error: " << e.what() << '\n';
    return 2;
  } catch (const AccuracyError& e) {
    std::cerr << "accuracy failure: " << e.what() << " (best estimate " << e.best_estimate << ")\n";
    return 3;
  } catch (const SearchRangeError& e) {
    std::cerr << "accuracy failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
