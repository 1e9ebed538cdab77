#include "owlreg/cli.hpp"

#include "owlreg/experiment.hpp"
#include "owlreg/io.hpp"
#include "owlreg/weight_spec.hpp"

#include "owl/analysis.hpp"
#include "owl/datagen.hpp"
#include "owl/norm.hpp"
#include "owl/solvers.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

namespace owlreg {

namespace {

namespace fs = std::filesystem;

struct GlobalOptions {
  std::uint64_t seed = 0;
  double tol = 1e-8;
  int max_iters = 100000;
  double cluster_tol = 1e-6;
  int threads = 1;

  owl::SolverConfig solver() const {
    owl::SolverConfig cfg;
    cfg.tol = tol;
    cfg.max_iters = max_iters;
    cfg.seed = seed;
    return cfg;
  }
};

owl::Loss parse_loss(const std::string& s) {
  if (s == "sq") {
    return owl::Loss::SquaredL2;
  }
  if (s == "abs") {
    return owl::Loss::AbsoluteL1;
  }
  throw ParseError("loss must be sq or abs, got '" + s + "'");
}

std::string one_based(const std::vector<Eigen::Index>& members) {
  std::string out;
  for (std::size_t k = 0; k < members.size(); ++k) {
    out += (k ? "," : "") + std::to_string(members[k] + 1);
  }
  return out;
}

// ---------------------------------------------------------------------------

struct ProxArgs {
  std::string input;
  std::string values;
  std::string weights;
};

int cmd_prox(const ProxArgs& a, std::ostream& out) {
  if (a.input.empty() == a.values.empty()) {
    throw ParseError("prox: give exactly one of INPUT and --values");
  }
  const owl::Vector u = a.values.empty() ? read_vector_csv(a.input)
                                         : parse_vector_csv(a.values, "--values");
  const owl::WeightVector w = WeightSpec::parse(a.weights).build(u.size());
  out << format_row(owl::prox_owl(u, w)) << '\n';
  return kOk;
}

struct SolveArgs {
  std::string design;
  std::string y;
  std::string weights;
  std::string loss = "sq";
  std::string formulation = "lagrangian";
  std::optional<double> eps;
  std::string out = "xhat.csv";
};

int cmd_solve(const SolveArgs& a, const GlobalOptions& g, std::ostream& out) {
  owl::Matrix design = read_matrix_csv(a.design);
  owl::Vector y = read_vector_csv(a.y);
  if (design.rows() != y.size()) {
    throw ParseError("solve: design has " + std::to_string(design.rows()) +
                     " rows but y has " + std::to_string(y.size()) + " entries");
  }
  owl::WeightVector w = WeightSpec::parse(a.weights).build(design.cols());
  owl::Formulation form = owl::Lagrangian{};
  if (a.formulation == "constrained") {
    if (!a.eps) {
      throw ParseError("solve: constrained formulation needs --eps");
    }
    form = owl::Constrained{*a.eps};
  } else if (a.formulation != "lagrangian") {
    throw ParseError("solve: formulation must be lagrangian or constrained");
  }
  const owl::ProblemInstance prob(std::move(design), std::move(y), std::move(w),
                                  parse_loss(a.loss), form);
  const owl::Solution sol = owl::solve(prob, g.solver());
  write_vector_csv(fs::path(a.out), sol.x_hat);

  out << "objective=" << format_double(sol.objective)
      << " residual_l2_sq_over_n=" << format_double(sol.residual_l2_sq_over_n)
      << " residual_l1_over_n=" << format_double(sol.residual_l1_over_n)
      << " converged=" << (sol.converged ? "true" : "false")
      << " iterations=" << sol.iterations << '\n';
  const owl::ClusterReport clusters = owl::detect_clusters(sol.x_hat, g.cluster_tol);
  for (const auto& c : clusters.clusters) {
    if (c.members.size() > 1 && c.magnitude > g.cluster_tol) {
      out << "cluster " << one_based(c.members) << " magnitude=" << format_double(c.magnitude)
          << '\n';
    }
  }
  return kOk;
}

struct GenerateArgs {
  std::string groups;
  Eigen::Index p = 0;
  Eigen::Index q = 0;
  Eigen::Index n = 0;
  Eigen::Index s = 0;
  double eps = 0.0;
  bool perturbed = false;
  std::string out_dir = ".";
};

int cmd_generate(const GenerateArgs& a, const GlobalOptions& g, std::ostream& err) {
  std::optional<owl::GroupStructure> gs;
  try {
    if (!a.groups.empty()) {
      gs = owl::GroupStructure::parse(a.groups);
    } else if (a.p > 0 && a.q > 0) {
      gs = owl::GroupStructure::contiguous(a.p, a.q);
    } else {
      throw ParseError("generate: give --groups or both --p and --q");
    }
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("generate: ") + e.what());
  }
  if (a.n < 1 || a.s < 0 || !(a.eps >= 0.0)) {
    throw ParseError("generate: need n >= 1, s >= 0 and eps >= 0");
  }
  if (a.s > gs->q()) {
    throw ParseError("generate: s exceeds the number of groups");
  }
  const owl::GenerativeModel model{*gs, a.n, a.s, a.eps, g.seed, {a.perturbed}};
  std::string warning;
  const owl::Dataset d = owl::generate(model, &warning);
  if (!warning.empty()) {
    err << "warning: " << warning << '\n';
  }

  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  write_matrix_csv(dir / "A.csv", d.a);
  write_vector_csv(dir / "y.csv", d.y);
  write_vector_csv(dir / "xstar.csv", d.x_star);
  write_matrix_csv(dir / "C.csv", owl::replication_matrix(*gs));

  nlohmann::ordered_json meta;
  meta["seed"] = g.seed;
  meta["n"] = a.n;
  meta["p"] = gs->p();
  meta["q"] = gs->q();
  meta["s"] = a.s;
  meta["eps"] = a.eps;
  meta["groups"] = gs->to_string();
  meta["perturbed"] = a.perturbed;
  meta["files"] = {"A.csv", "y.csv", "xstar.csv", "C.csv"};
  write_text_file(dir / "meta.json", meta.dump(2) + "\n");
  return kOk;
}

struct CheckArgs {
  std::string design;
  std::string y;
  std::string solution;
  std::string weights;
  std::string loss = "sq";
};

int cmd_check_clusters(const CheckArgs& a, const GlobalOptions& g, std::ostream& out) {
  const owl::Matrix design = read_matrix_csv(a.design);
  const owl::Vector y = read_vector_csv(a.y);
  const owl::Vector x = read_vector_csv(a.solution);
  if (design.rows() != y.size() || design.cols() != x.size()) {
    throw ParseError("check-clusters: inconsistent dimensions");
  }
  const owl::WeightVector w = WeightSpec::parse(a.weights).build(design.cols());
  const auto checks = owl::verify_clustering(design, y, x, w, parse_loss(a.loss), g.cluster_tol);
  int violations = 0;
  for (const auto& c : checks) {
    out << "pair (" << c.i + 1 << "," << c.j + 1 << "): condition="
        << (c.condition ? "true" : "false") << ", clustered=" << (c.clustered ? "true" : "false");
    if (c.violation()) {
      out << " VIOLATION";
      ++violations;
    }
    out << '\n';
  }
  out << "violations=" << violations << '\n';
  return violations == 0 ? kOk : kViolation;
}

int cmd_experiment(const std::string& config_path, const GlobalOptions& g, bool seed_given,
                   std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg = ExperimentConfig::parse(read_text_file(config_path));
  if (seed_given) {
    cfg.seed = g.seed;
  }
  RunOptions opts;
  opts.solver = g.solver();
  opts.threads = g.threads;
  opts.cluster_tol = g.cluster_tol;
  opts.log = &err;
  const ExperimentReport report = run_experiment(cfg, opts);
  write_text_file(cfg.output, report.to_csv());
  if (cfg.trials_output) {
    write_text_file(*cfg.trials_output, report.trials_csv());
  }
  out << report.to_csv();
  return report.passed() ? kOk : kViolation;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ordered weighted l1 regression: prox, solvers, data generation and experiments",
               "owlreg"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  auto* seed_opt = app.add_option("--seed", g.seed, "Base seed (generation, experiments, solver)");
  app.add_option("--tol", g.tol, "Solver tolerance")->check(CLI::PositiveNumber);
  app.add_option("--max-iters", g.max_iters, "Solver iteration cap")->check(CLI::PositiveNumber);
  app.add_option("--cluster-tol", g.cluster_tol, "Magnitude tolerance for clusters")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--threads", g.threads, "Worker threads for experiments")
      ->check(CLI::PositiveNumber);

  ProxArgs prox;
  auto* prox_cmd = app.add_subcommand("prox", "Evaluate prox_owl on a vector");
  prox_cmd->add_option("input", prox.input, "Vector CSV file (one row or one column)");
  prox_cmd->add_option("--values", prox.values, "Inline vector, e.g. 4,1");
  prox_cmd->add_option("-w,--weights", prox.weights, "Weight spec")->required();

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve a regularized regression problem");
  solve_cmd->add_option("-A,--design", solve.design, "Design matrix CSV")->required();
  solve_cmd->add_option("-y,--y", solve.y, "Observation vector CSV")->required();
  solve_cmd->add_option("-w,--weights", solve.weights, "Weight spec")->required();
  solve_cmd->add_option("--loss", solve.loss, "sq or abs")->capture_default_str();
  solve_cmd->add_option("--formulation", solve.formulation, "lagrangian or constrained")
      ->capture_default_str();
  solve_cmd->add_option("--eps", solve.eps, "Residual bound of the constrained form");
  solve_cmd->add_option("-o,--out", solve.out, "Output CSV for x_hat")->capture_default_str();

  GenerateArgs gen;
  auto* gen_cmd = app.add_subcommand("generate", "Draw a synthetic replication-design dataset");
  gen_cmd->add_option("--groups", gen.groups, "Groups, e.g. \"1,2;3;4\" (one-based)");
  gen_cmd->add_option("--p", gen.p, "Columns, with --q for contiguous groups");
  gen_cmd->add_option("--q", gen.q, "Number of contiguous groups");
  gen_cmd->add_option("--n", gen.n, "Samples")->required();
  gen_cmd->add_option("--s", gen.s, "Active groups")->capture_default_str();
  gen_cmd->add_option("--eps", gen.eps, "Noise level (1/n)||nu||_1")->capture_default_str();
  gen_cmd->add_flag("--perturbed", gen.perturbed, "Perturb magnitudes within groups");
  gen_cmd->add_option("-o,--out-dir", gen.out_dir, "Output directory")->capture_default_str();

  CheckArgs check;
  auto* check_cmd =
      app.add_subcommand("check-clusters", "Check clustering conditions against a solution");
  check_cmd->add_option("-A,--design", check.design, "Design matrix CSV")->required();
  check_cmd->add_option("-y,--y", check.y, "Observation vector CSV")->required();
  check_cmd->add_option("-x,--solution", check.solution, "Solution vector CSV")->required();
  check_cmd->add_option("-w,--weights", check.weights, "Weight spec")->required();
  check_cmd->add_option("--loss", check.loss, "sq or abs")->capture_default_str();

  std::string config_path;
  auto* exp_cmd = app.add_subcommand("experiment", "Run a Monte-Carlo bound experiment");
  exp_cmd->add_option("config", config_path, "Experiment config file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  }

  try {
    if (prox_cmd->parsed()) {
      return cmd_prox(prox, out);
    }
    if (solve_cmd->parsed()) {
      return cmd_solve(solve, g, out);
    }
    if (gen_cmd->parsed()) {
      return cmd_generate(gen, g, err);
    }
    if (check_cmd->parsed()) {
      return cmd_check_clusters(check, g, out);
    }
    return cmd_experiment(config_path, g, seed_opt->count() > 0, out, err);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParseError;
  } catch (const owl::DimensionError& e) {
    err << "dimension error: " << e.what() << '\n';
    return kParseError;
  } catch (const owl::InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace owlreg
