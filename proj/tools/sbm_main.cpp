#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "sbm/cli.hpp"
#include "sbm/types.hpp"

namespace {

int reject(const std::string& message) {
  nlohmann::ordered_json err;
  err["type"] = "invalid-parameter";
  err["message"] = message;
  err["code"] = 2;
  nlohmann::ordered_json j;
  j["error"] = std::move(err);
  std::cerr << j.dump() << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
#ifdef _OPENMP
  if (const char* env = std::getenv("SBM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
#endif

  CLI::App app{"spin-boson model with a peaked bath: correlation functions, "
               "population dynamics and approximation validity maps"};
  app.require_subcommand(1);

  sbm::cli::RunConfig cfg;
  std::string model_name = "full";
  std::string format_name;
  double step = 0.0;

  auto add_params = [&](CLI::App* sub) {
    sub->add_option("--w0", cfg.params.w0, "oscillator frequency");
    sub->add_option("--gamma", cfg.params.gamma, "spectral width");
    sub->add_option("--kappa", cfg.params.kappa, "coupling strength");
    sub->add_option("--beta", cfg.params.beta,
                    "inverse temperature, inf for T = 0");
    sub->add_option("--v", cfg.params.v, "tunneling matrix element");
    sub->add_option("--p0", cfg.params.p0, "initial population difference");
  };
  auto add_output = [&](CLI::App* sub, const char* default_format) {
    sub->add_option("--out", cfg.output_path, "output path, default stdout");
    sub->add_option("--format", format_name,
                    std::string("csv or json, default ") + default_format);
  };

  CLI::App* gt =
      app.add_subcommand("gt", "tabulate the bath correlation function G(t)");
  add_params(gt);
  add_output(gt, "csv");
  gt->add_option("--model", model_name,
                 "full | f3 | f3b | st | matsubara | zerot | zerotcrit");
  gt->add_option("--tmax", cfg.t_max, "end of the time window");
  gt->add_option("--steps", cfg.steps, "number of uniform steps");

  CLI::App* pt = app.add_subcommand("pt", "solve the population trace P(t)");
  add_params(pt);
  add_output(pt, "csv");
  pt->add_option("--model", model_name, "kernel model: full | f3 | f3b | st");
  pt->add_flag("--markov", cfg.markov,
               "closed-form rate population instead of the memory solver");
  pt->add_option("--tmax", cfg.t_max, "end of the time window");
  pt->add_option("--steps", cfg.steps,
                 "sample count for the closed-form trace");
  CLI::Option* step_opt =
      pt->add_option("--step", step, "solver step override, default automatic");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "classify approximation validity over (gamma, kappa, beta)");
  add_output(sweep, "json");
  double w0 = 1.0;
  std::size_t points = 20;
  double axis_min = 0.01, axis_max = 100.0;
  sbm::SweepGrid grid_defaults;
  double eps_fine = grid_defaults.eps_fine;
  double eps_coarse = grid_defaults.eps_coarse;
  std::size_t samples = grid_defaults.samples;
  sweep->add_option("--w0", w0, "oscillator frequency of the map");
  sweep->add_option("--points", points, "points per axis");
  sweep->add_option("--axis-min", axis_min, "lower end of every axis");
  sweep->add_option("--axis-max", axis_max, "upper end of every axis");
  sweep->add_option("--eps-fine", eps_fine, "acceptance threshold");
  sweep->add_option("--eps-coarse", eps_coarse, "marginal threshold");
  sweep->add_option("--samples", samples, "resampling points per error read");
  sweep->add_option("--gnuplot", cfg.gnuplot_path,
                    "also write per-beta slices for gnuplot");
  sweep->add_flag("--progress", cfg.progress, "report cells on stderr");

  app.add_subcommand("verify",
                     "cross-check the numerics against slow references");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return reject(e.what());
  }

  std::string command;
  if (gt->parsed()) {
    command = "gt";
    cfg.command = sbm::cli::RunConfig::Command::Gt;
  } else if (pt->parsed()) {
    command = "pt";
    cfg.command = sbm::cli::RunConfig::Command::Pt;
  } else if (sweep->parsed()) {
    command = "sweep";
    cfg.command = sbm::cli::RunConfig::Command::Sweep;
  } else {
    cfg.command = sbm::cli::RunConfig::Command::Verify;
  }

  if (command == "gt" || command == "pt") {
    const auto variant = sbm::cli::variant_from_name(model_name);
    if (!variant) return reject("unknown model name: " + model_name);
    cfg.model.variant = *variant;
    if (step_opt->count() > 0) cfg.step = step;
  }

  if (command == "sweep") {
    sbm::SweepGrid g;
    g.w0 = w0;
    try {
      std::vector<double> axis;
      if (points == 1) {
        if (!(axis_min > 0.0)) throw sbm::DomainError("axis must be positive");
        axis = {axis_min};
      } else {
        axis = sbm::log_axis(axis_min, axis_max, points);
      }
      g.gamma_axis = axis;
      g.kappa_axis = axis;
      g.beta_axis = axis;
    } catch (const sbm::DomainError& e) {
      return reject(e.what());
    }
    g.eps_fine = eps_fine;
    g.eps_coarse = eps_coarse;
    g.samples = samples;
    cfg.grid = g;
  }

  if (!format_name.empty()) {
    if (format_name == "csv") {
      cfg.format = sbm::cli::RunConfig::Format::Csv;
    } else if (format_name == "json") {
      cfg.format = sbm::cli::RunConfig::Format::Json;
    } else {
      return reject("unknown format: " + format_name);
    }
  } else if (command == "sweep") {
    cfg.format = sbm::cli::RunConfig::Format::Json;
  }

  return sbm::cli::run(cfg);
}
