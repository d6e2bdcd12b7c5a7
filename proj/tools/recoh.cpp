/*
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "recoh/channel.hpp"
#include "recoh/dqc1.hpp"
#include "recoh/errors.hpp"
#include "recoh/io.hpp"
#include "recoh/measures.hpp"
#include "recoh/optimize.hpp"
#include "recoh/state.hpp"

namespace {

using namespace recoh;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitCapacity = 4;
constexpr int kExitUnconverged = 5;

struct GlobalOpts {
  std::uint64_t seed = 0;
  int threads = 1;
  std::string tolerance_profile = "standard";
  std::string output = "json";
  Index max_dim = 4096;
};

struct CommandOutput {
  json report;
  json inputs = json::object();
  json config = json::object();
  std::string csv;  // nonempty replaces the JSON report on stdout
  int exit_code = kExitOk;
};

const Tolerances& profile(const GlobalOpts& g) {
  return g.tolerance_profile == "strict" ? strict_tolerances() : standard_tolerances();
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);
  return buf;
}

json complex_to_json(cxd z) {
  return json::array({z.real(), z.imag()});
}

OrthonormalBasis basis_for(const std::string& spec, Index dim, const Tolerances& tol) {
  if (spec == "computational")
    return OrthonormalBasis::computational(dim);
  OrthonormalBasis basis = load_basis(spec, tol);
  if (basis.dim() != dim)
    throw validation_error("basis dimension does not match the control factor");
  return basis;
}

json global_config(const GlobalOpts& g) {
  json cfg;
  cfg["seed"] = g.seed;
  cfg["threads"] = g.threads;
  cfg["tolerance_profile"] = g.tolerance_profile;
  cfg["output"] = g.output;
  cfg["max_dim"] = g.max_dim;
  return cfg;
}

// ---------------------------------------------------------------- measure

struct MeasureArgs {
  std::string state_file;
  std::string basis_spec = "computational";
};

CommandOutput cmd_measure(const GlobalOpts& g, const MeasureArgs& args) {
  const Tolerances& tol = profile(g);
  const DensityMatrix rho = load_state(args.state_file, tol);
  const OrthonormalBasis basis = basis_for(args.basis_spec, rho.dim(0), tol);

  const MeasureResult delta = delta_Z(rho, basis, tol);
  const DensityMatrix rho_a = partial_trace(rho, {0});

  CommandOutput out;
  out.report["delta_bits"] = delta.value_bits;
  out.report["coherence_A_bits"] = coherence_rel_ent(rho_a, basis, tol);
  out.report["is_cq"] = is_cq_state(rho, basis);
  out.report["basis_id"] = args.basis_spec;
  out.inputs["state"] = args.state_file;
  out.inputs["basis"] = args.basis_spec;
  return out;
}

// ----------------------------------------------------- lower-bound / min-basis

struct OptArgs {
  std::string state_file;
  std::string basis_spec = "computational";
  int restarts = 32;
  int max_iters = 500;
  std::string povm_rank = "projective";
};

OptimizerConfig optimizer_config(const GlobalOpts& g, const OptArgs& args) {
  OptimizerConfig config;
  config.restarts = args.restarts;
  config.max_sweeps = args.max_iters;
  config.seed = g.seed;
  config.threads = g.threads;
  config.parameterization = args.povm_rank == "r2" ? MeasurementParam::NaimarkPovm
                                                   : MeasurementParam::Projective;
  return config;
}

json bound_common(const BoundResult& result) {
  json j;
  j["value_bits"] = result.value_bits;
  j["converged"] = result.converged;
  j["restart_values"] = result.restart_values;
  return j;
}

CommandOutput cmd_lower_bound(const GlobalOpts& g, const OptArgs& args) {
  const Tolerances& tol = profile(g);
  const DensityMatrix rho = load_state(args.state_file, tol);
  const OrthonormalBasis basis = basis_for(args.basis_spec, rho.dim(0), tol);

  const BoundResult result = lqicc_lower_bound(rho, basis, optimizer_config(g, args));
  const double delta = delta_Z(rho, basis, tol).value_bits;

  CommandOutput out;
  out.report = bound_common(result);
  out.report["delta_bits"] = delta;
  out.report["gap_bits"] = delta - result.value_bits;
  if (result.povm) {
    json elements = json::array();
    for (const Matrix& m : result.povm->elements)
      elements.push_back(matrix_to_json(m));
    out.report["measurement"] = {{"elements", std::move(elements)},
                                 {"rank_one", result.povm->rank_one}};
  }
  out.inputs["state"] = args.state_file;
  out.inputs["basis"] = args.basis_spec;
  out.config["restarts"] = args.restarts;
  out.config["max_iters"] = args.max_iters;
  out.config["povm_rank"] = args.povm_rank;
  if (!result.converged)
    out.exit_code = kExitUnconverged;
  return out;
}

CommandOutput cmd_min_basis(const GlobalOpts& g, const OptArgs& args) {
  const Tolerances& tol = profile(g);
  const DensityMatrix rho = load_state(args.state_file, tol);

  const BoundResult result = min_basis_delta(rho, optimizer_config(g, args));
  const OrthonormalBasis computational = OrthonormalBasis::computational(rho.dim(0));

  CommandOutput out;
  out.report = bound_common(result);
  out.report["computational_delta_bits"] = delta_Z(rho, computational, tol).value_bits;
  if (result.basis)
    out.report["basis"] = matrix_to_json(result.basis->vectors());
  out.inputs["state"] = args.state_file;
  out.config["restarts"] = args.restarts;
  out.config["max_iters"] = args.max_iters;
  if (!result.converged)
    out.exit_code = kExitUnconverged;
  return out;
}

// ------------------------------------------------------------------ dqc1

struct DqcArgs {
  std::string unitary_file;
  Index haar_dim = 0;
  double probe_p = 0.5;
  double a = 1.0;
  double probe_phase = 0.0;
  std::int64_t runs = 200000;
  std::vector<std::string> sweep;
};

std::vector<double> parse_grid(const std::string& body, const std::string& name) {
  std::vector<double> values;
  try {
    if (body.find(':') != std::string::npos) {
      // start:stop:step, inclusive of stop up to half a step.
      const auto c1 = body.find(':');
      const auto c2 = body.find(':', c1 + 1);
      if (c2 == std::string::npos)
        throw parse_error("sweep range for " + name + " needs start:stop:step");
      const double start = std::stod(body.substr(0, c1));
      const double stop = std::stod(body.substr(c1 + 1, c2 - c1 - 1));
      const double step = std::stod(body.substr(c2 + 1));
      if (!(step > 0.0) || stop < start)
        throw parse_error("sweep range for " + name + " must increase");
      for (double v = start; v <= stop + 0.5 * step; v += step)
        values.push_back(v);
    } else {
      std::size_t pos = 0;
      while (pos <= body.size()) {
        const auto comma = body.find(',', pos);
        const std::string tok =
            body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        values.push_back(std::stod(tok));
        if (comma == std::string::npos)
          break;
        pos = comma + 1;
      }
    }
  } catch (const std::invalid_argument&) {
    throw parse_error("bad number in sweep spec for " + name);
  } catch (const std::out_of_range&) {
    throw parse_error("number out of range in sweep spec for " + name);
  }
  if (values.empty())
    throw parse_error("empty sweep spec for " + name);
  return values;
}

Matrix resolve_unitary(const GlobalOpts& g, const DqcArgs& args, json& inputs) {
  if (!args.unitary_file.empty() && args.haar_dim > 0)
    throw validation_error("give either --unitary or --haar-dim, not both");
  if (!args.unitary_file.empty()) {
    inputs["unitary"] = args.unitary_file;
    return load_unitary(args.unitary_file, profile(g));
  }
  if (args.haar_dim > 0) {
    if (args.haar_dim > max_total_dim())
      throw capacity_error("--haar-dim exceeds the dimension cap");
    inputs["unitary"] = "haar:" + std::to_string(args.haar_dim);
    return haar_unitary(args.haar_dim, g.seed);
  }
  throw validation_error("dqc1 needs a target: --unitary FILE or --haar-dim N");
}

CommandOutput cmd_dqc1(const GlobalOpts& g, const DqcArgs& args) {
  CommandOutput out;
  const Matrix u = resolve_unitary(g, args, out.inputs);
  const ProbeSpec probe{args.probe_p, args.a, args.probe_phase};

  out.config["probe_p"] = args.probe_p;
  out.config["a"] = args.a;
  out.config["probe_phase"] = args.probe_phase;

  if (args.sweep.empty()) {
    if (g.output == "csv")
      throw validation_error("csv output is only available for dqc1 sweeps");
    out.config["runs"] = args.runs;
    const Dqc1Report report = dqc1_sample(probe, u, args.runs, g.seed);
    out.report["dim"] = report.dim;
    out.report["exact_trace_over_dim"] = complex_to_json(report.exact_trace_over_dim);
    out.report["estimate"] = complex_to_json(report.estimate);
    out.report["runs_per_pauli"] = report.runs_per_pauli;
    out.report["analytic_se"] = report.analytic_se;
    out.report["empirical_se"] = report.empirical_se;
    out.report["precision_bits"] = report.precision_bits;
    out.report["probe_coherence_bits"] = report.probe_coherence_bits;
    return out;
  }

  // Sweep: grids over a (probe coherence) and m (probes per Pauli).
  std::vector<double> a_values = {args.a};
  std::vector<std::int64_t> m_values;
  for (const std::string& spec : args.sweep) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos)
      throw parse_error("sweep spec must look like a=0.2:1.0:0.2 or m=100,10000");
    const std::string name = spec.substr(0, eq);
    const std::string body = spec.substr(eq + 1);
    if (name == "a") {
      a_values = parse_grid(body, name);
    } else if (name == "m") {
      m_values.clear();
      for (double v : parse_grid(body, name)) {
        if (v < 1.0 || v != std::floor(v))
          throw parse_error("sweep values for m must be positive integers");
        m_values.push_back(static_cast<std::int64_t>(v));
      }
    } else {
      throw parse_error("unknown sweep variable \"" + name + "\"");
    }
  }
  if (m_values.empty())
    throw parse_error("sweep needs an m spec, e.g. m=100,10000");

  out.config["sweep"] = args.sweep;
  const std::vector<std::string> columns = {"a",           "p", "m",       "prec_emp",
                                            "prec_analytic", "half_log2_mC", "residual"};
  json rows = json::array();
  std::string csv = "a,p,m,prec_emp,prec_analytic,half_log2_mC,residual\n";
  for (double a : a_values) {
    for (std::int64_t m : m_values) {
      const ProbeSpec point{args.probe_p, a, args.probe_phase};
      const PrecisionReport rep = precision_vs_coherence(point, u, m, g.seed);
      rows.push_back(json::array({a, args.probe_p, m, rep.prec_emp, rep.prec_analytic,
                                  rep.half_log2_mc, rep.residual}));
      csv += format_double(a) + "," + format_double(args.probe_p) + "," + std::to_string(m) +
             "," + format_double(rep.prec_emp) + "," + format_double(rep.prec_analytic) + "," +
             format_double(rep.half_log2_mc) + "," + format_double(rep.residual) + "\n";
    }
  }
  out.report["columns"] = columns;
  out.report["rows"] = std::move(rows);
  if (g.output == "csv")
    out.csv = csv;
  return out;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::string suite;
  int n = 0;
};

std::vector<Index> suite_dims(int i) {
  switch (i % 4) {
    case 0: return {2, 2};
    case 1: return {3, 2};
    case 2: return {2, 3};
    default: return {3, 3};
  }
}

CommandOutput cmd_verify(const GlobalOpts& g, const VerifyArgs& args) {
  CommandOutput out;
  bool passed = true;
  json detail;
  const std::uint64_t seed = g.seed;

  if (args.suite == "monotonicity") {
    const int n = args.n > 0 ? args.n : 500;
    double min_slack = 0.0;
    bool have = false;
    for (int i = 0; i < n; ++i) {
      const std::vector<Index> dims = suite_dims(i);
      const std::uint64_t s = splitmix64(seed + static_cast<std::uint64_t>(i));
      const DensityMatrix rho = random_state(dims, dims[0] * dims[1], s);
      const OrthonormalBasis basis = OrthonormalBasis::computational(dims[0]);
      const GoiaProgram prog = random_goia_program(dims, basis, 1 + i % 6, s ^ 0x55);
      const double slack = monotonicity_check(rho, basis, prog);
      if (!have || slack < min_slack)
        min_slack = slack;
      have = true;
    }
    passed = min_slack >= -1e-9;
    detail["checks"] = n;
    detail["min_decrease_bits"] = min_slack;
    detail["threshold"] = -1e-9;
  } else if (args.suite == "additivity") {
    const int n = args.n > 0 ? args.n : 100;
    double max_residual = 0.0;
    for (int i = 0; i < n; ++i) {
      const std::vector<Index> dims = suite_dims(i);
      const std::uint64_t s = splitmix64(seed + static_cast<std::uint64_t>(i));
      const DensityMatrix rho = random_state(dims, dims[0] * dims[1], s);
      const OrthonormalBasis basis = OrthonormalBasis::computational(dims[0]);
      max_residual = std::max(max_residual, additivity_check(rho, basis, 2));
    }
    passed = max_residual < 1e-9;
    detail["checks"] = n;
    detail["max_residual_bits"] = max_residual;
    detail["threshold"] = 1e-9;
  } else if (args.suite == "convexity") {
    const int n = args.n > 0 ? args.n : 100;
    double min_slack = 0.0;
    bool have = false;
    for (int i = 0; i < n; ++i) {
      const std::vector<Index> dims = suite_dims(i);
      const OrthonormalBasis basis = OrthonormalBasis::computational(dims[0]);
      const int k = 2 + i % 3;
      std::vector<DensityMatrix> states;
      std::vector<double> weights;
      double total = 0.0;
      for (int j = 0; j < k; ++j) {
        const std::uint64_t s = splitmix64(seed + static_cast<std::uint64_t>(i * 7 + j));
        states.push_back(random_state(dims, dims[0] * dims[1], s));
        const double w = 1.0 + static_cast<double>(splitmix64(s) % 1000);
        weights.push_back(w);
        total += w;
      }
      for (double& w : weights)
        w /= total;
      const double slack = convexity_check(states, weights, basis);
      if (!have || slack < min_slack)
        min_slack = slack;
      have = true;
    }
    passed = min_slack >= -1e-9;
    detail["checks"] = n;
    detail["min_slack_bits"] = min_slack;
    detail["threshold"] = -1e-9;
  } else if (args.suite == "free-set") {
    const int n = args.n > 0 ? args.n : 200;
    double max_distance = 0.0;
    for (int i = 0; i < n; ++i) {
      const std::vector<Index> dims = suite_dims(i);
      const OrthonormalBasis basis = OrthonormalBasis::computational(dims[0]);
      const std::uint64_t s = splitmix64(seed + static_cast<std::uint64_t>(i));
      const DensityMatrix rho = random_cq_state(dims, basis, s);
      const GoiaProgram prog = random_goia_program(dims, basis, 1 + i % 6, s ^ 0xaa);
      for (const ProgramBranch& branch : run_program(prog, rho, basis)) {
        const DensityMatrix pinched = dephase(branch.state, basis);
        max_distance =
            std::max(max_distance, (branch.state.mat() - pinched.mat()).norm());
      }
    }
    passed = max_distance <= 1e-8;
    detail["checks"] = n;
    detail["max_frobenius_distance"] = max_distance;
    detail["threshold"] = 1e-8;
  } else if (args.suite == "pure-state") {
    const int n = args.n > 0 ? args.n : 50;
    double max_residual = 0.0;
    for (int i = 0; i < n; ++i) {
      const std::vector<Index> dims = suite_dims(i);
      const OrthonormalBasis basis = OrthonormalBasis::computational(dims[0]);
      auto rng = seeded_rng(seed, static_cast<std::uint64_t>(i) + 1);
      const Matrix u = haar_unitary(dims[0] * dims[1], rng);
      const Vector psi = u.col(0);
      const PureStateResult res = pure_state_recoverable(psi, dims[0], dims[1], basis);
      const double delta = delta_Z(pure_state(dims, psi), basis).value_bits;
      max_residual = std::max(max_residual, std::abs(res.delta - delta));
      max_residual = std::max(max_residual, res.translation_residual);
    }
    passed = max_residual <= 1e-9;
    detail["checks"] = n;
    detail["max_residual_bits"] = max_residual;
    detail["threshold"] = 1e-9;
  } else if (args.suite == "dqc1-se") {
    const int n = args.n > 0 ? args.n : 20;
    const std::int64_t runs = 200000;
    double max_rel = 0.0;
    double max_norm_dev = 0.0;
    for (int i = 0; i < n; ++i) {
      const std::uint64_t s = splitmix64(seed + static_cast<std::uint64_t>(i));
      const Matrix u = haar_unitary(8, s);
      const Dqc1Report rep = dqc1_sample({0.5, 1.0, 0.0}, u, runs, s ^ 0x77);
      max_rel = std::max(max_rel,
                         std::abs(rep.empirical_se - rep.analytic_se) / rep.analytic_se);
      max_norm_dev = std::max(
          max_norm_dev,
          std::abs(rep.estimate - rep.exact_trace_over_dim) / rep.analytic_se);
    }
    passed = max_rel <= 0.10 && max_norm_dev <= 6.0;
    detail["checks"] = n;
    detail["max_se_relative_deviation"] = max_rel;
    detail["max_deviation_in_se_units"] = max_norm_dev;
    detail["thresholds"] = json::array({0.10, 6.0});
  } else {
    throw validation_error("unknown suite \"" + args.suite + "\"");
  }

  out.report = std::move(detail);
  out.report["suite"] = args.suite;
  out.report["passed"] = passed;
  out.config["suite"] = args.suite;
  out.config["n"] = args.n;
  if (!passed)
    out.exit_code = kExitCheckFailed;
  return out;
}

// ------------------------------------------------------------------ main

int run(int argc, char** argv) {
  CLI::App app{"coherent-control resource calculator"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "base seed for all randomized work")->capture_default_str();
  app.add_option("--threads", g.threads, "parallelism cap for optimizer restarts")
      ->capture_default_str();
  app.add_option("--tolerance-profile", g.tolerance_profile, "validation tolerances")
      ->check(CLI::IsMember({"standard", "strict"}))
      ->capture_default_str();
  app.add_option("--output", g.output, "report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--max-dim", g.max_dim, "total-dimension cap for any state")
      ->capture_default_str();

  MeasureArgs measure_args;
  CLI::App* measure = app.add_subcommand("measure", "coherence of a control state");
  measure->fallthrough();
  measure->add_option("--state", measure_args.state_file, "state file")->required();
  measure->add_option("--basis", measure_args.basis_spec,
                      "control basis: computational or a basis file");

  OptArgs lower_args;
  CLI::App* lower = app.add_subcommand("lower-bound", "best single-measurement protocol value");
  lower->fallthrough();
  lower->add_option("--state", lower_args.state_file, "state file")->required();
  lower->add_option("--basis", lower_args.basis_spec,
                    "control basis: computational or a basis file");
  lower->add_option("--restarts", lower_args.restarts, "optimizer restarts")
      ->capture_default_str();
  lower->add_option("--max-iters", lower_args.max_iters, "sweep limit per restart")
      ->capture_default_str();
  lower->add_option("--povm-rank", lower_args.povm_rank, "measurement family")
      ->check(CLI::IsMember({"projective", "r2"}))
      ->capture_default_str();

  OptArgs min_args;
  CLI::App* minb = app.add_subcommand("min-basis", "basis minimizing the coherence measure");
  minb->fallthrough();
  minb->add_option("--state", min_args.state_file, "state file")->required();
  minb->add_option("--restarts", min_args.restarts, "optimizer restarts")
      ->capture_default_str();
  minb->add_option("--max-iters", min_args.max_iters, "sweep limit per restart")
      ->capture_default_str();

  DqcArgs dqc_args;
  CLI::App* dqc = app.add_subcommand("dqc1", "one-clean-qubit trace estimation");
  dqc->fallthrough();
  dqc->add_option("--unitary", dqc_args.unitary_file, "target unitary file");
  dqc->add_option("--haar-dim", dqc_args.haar_dim, "draw the target Haar-randomly");
  dqc->add_option("--probe-p", dqc_args.probe_p, "probe population")->capture_default_str();
  dqc->add_option("--a", dqc_args.a, "probe coherence 2|rho01|")->capture_default_str();
  dqc->add_option("--probe-phase", dqc_args.probe_phase, "probe off-diagonal phase")
      ->capture_default_str();
  dqc->add_option("--runs", dqc_args.runs, "total runs, split over sigma_x and sigma_y")
      ->capture_default_str();
  dqc->add_option("--sweep", dqc_args.sweep,
                  "grid specs, e.g. --sweep a=0.2:1.0:0.2 m=100,10000");

  VerifyArgs verify_args;
  CLI::App* verify = app.add_subcommand("verify", "run a property suite");
  verify->fallthrough();
  verify->add_option("--suite", verify_args.suite, "property suite name")
      ->required()
      ->check(CLI::IsMember({"monotonicity", "additivity", "convexity", "free-set",
                             "pure-state", "dqc1-se"}));
  verify->add_option("--n", verify_args.n, "instances to draw (0 = suite default)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitParse;
  }

  set_max_total_dim(g.max_dim);

  const auto started = std::chrono::steady_clock::now();
  CommandOutput out;
  std::string subcommand;
  try {
    if (g.output == "csv" && !dqc->parsed())
      throw validation_error("csv output is only available for dqc1 sweeps");
    if (measure->parsed()) {
      subcommand = "measure";
      out = cmd_measure(g, measure_args);
    } else if (lower->parsed()) {
      subcommand = "lower-bound";
      out = cmd_lower_bound(g, lower_args);
    } else if (minb->parsed()) {
      subcommand = "min-basis";
      out = cmd_min_basis(g, min_args);
    } else if (dqc->parsed()) {
      subcommand = "dqc1";
      out = cmd_dqc1(g, dqc_args);
    } else {
      subcommand = "verify";
      out = cmd_verify(g, verify_args);
    }
  } catch (const parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const capacity_error& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const validation_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const degenerate_branch_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  }
  const double wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
          .count();

  json cfg = global_config(g);
  for (auto it = out.config.begin(); it != out.config.end(); ++it)
    cfg[it.key()] = it.value();

  json manifest;
  manifest["subcommand"] = subcommand;
  manifest["inputs"] = out.inputs;
  manifest["config"] = std::move(cfg);
  manifest["seed"] = g.seed;
  manifest["version"] = RECOH_VERSION;
  manifest["wall_time_ms"] = wall_ms;

  if (!out.csv.empty()) {
    std::cout << "# manifest: " << emit_json_compact(manifest) << "\n" << out.csv;
    return out.exit_code;
  }

  json doc;
  doc["manifest"] = std::move(manifest);
  doc["report"] = std::move(out.report);
  std::cout << emit_json(doc);
  return out.exit_code;
}

} // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}
