#include <CLI11.hpp>
#include <Eigen/Core>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "scorch/bench.hpp"

namespace {

using namespace scorch;

// "m=200,n=50,seed=7" -> map
std::map<std::string, double> parse_kv(const std::string& text) {
  std::map<std::string, double> params;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--gen", "expected key=value, got " + item);
    params[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
  }
  return params;
}

struct CommonOpts {
  std::string family = "logistic";
  std::string data_file;
  std::string gen_text;
  std::string out_dir = ".";
  std::string algorithm = "prox-n-score";
  double alpha = 1.0;
  double mu = -1.0;
  double beta = -1.0;
  double beta_g = -1.0;
  double tol = 1e-6;
  int max_iters = 1000;
  bool dhat_literal = false;
  bool dhat_def25 = false;
  bool solution = false;
  bool svg = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_alg) {
  cmd->add_option("--family", opts.family,
                  "Problem family: logistic | group-lasso | deconv");
  cmd->add_option("--data", opts.data_file, "LIBSVM input file");
  cmd->add_option("--gen", opts.gen_text,
                  "Generator parameters, e.g. m=200,n=50,seed=7");
  cmd->add_option("--out", opts.out_dir, "Output directory");
  if (with_alg)
    cmd->add_option("--alg", opts.algorithm,
                    "prox-n-score | prox-ggn-score | prox-grad | "
                    "fast-prox-grad");
  cmd->add_option("--alpha", opts.alpha, "Step hyperparameter in (0,1]");
  cmd->add_option("--mu", opts.mu, "Smoothing parameter (family default)");
  cmd->add_option("--beta", opts.beta, "Penalty weight (family default)");
  cmd->add_option("--beta-g", opts.beta_g,
                  "Group penalty weight (family default)");
  cmd->add_option("--tol", opts.tol, "Relative-step termination tolerance");
  cmd->add_option("--max-iters", opts.max_iters, "Iteration cap");
  cmd->add_flag("--prox-dhat-literal", opts.dhat_literal,
                "Use the literal d-hat threshold (beta*alpha*d_i) in the "
                "solver prox (default)");
  cmd->add_flag("--prox-dhat-def25", opts.dhat_def25,
                "Use the exact scaled-prox threshold (beta*alpha/d_i) in the "
                "solver prox");
  cmd->add_flag("--solution", opts.solution, "Also write solution.csv");
  cmd->add_flag("--svg", opts.svg, "Also write objective-vs-iteration SVG");
}

RunSpec build_spec(const CommonOpts& opts) {
  RunSpec spec;
  auto family = family_from_name(opts.family);
  if (!family)
    throw std::invalid_argument("unknown family: " + opts.family);
  spec.family = *family;
  if (!opts.data_file.empty() && !opts.gen_text.empty())
    throw std::invalid_argument("give exactly one of --data and --gen");
  spec.data_file = opts.data_file;
  if (!opts.gen_text.empty()) spec.gen_params = parse_kv(opts.gen_text);
  auto alg = algorithm_from_name(opts.algorithm);
  if (!alg) throw std::invalid_argument("unknown algorithm: " + opts.algorithm);
  spec.solver.algorithm = *alg;
  spec.solver.alpha = opts.alpha;
  spec.solver.tol = opts.tol;
  spec.solver.max_iters = opts.max_iters;
  if (opts.dhat_literal && opts.dhat_def25)
    throw std::invalid_argument(
        "--prox-dhat-literal and --prox-dhat-def25 conflict");
  if (opts.dhat_def25)
    spec.solver.prox_convention = DHatConvention::scaled_inverse;
  if (opts.dhat_literal)
    spec.solver.prox_convention = DHatConvention::literal;
  spec.beta = opts.beta;
  spec.beta_g = opts.beta_g;
  spec.mu = opts.mu;
  spec.solver.mu = opts.mu > 0 ? opts.mu : spec.solver.mu;
  spec.output_dir = opts.out_dir;
  spec.write_solution = opts.solution;
  spec.write_svg = opts.svg;
  return spec;
}

int cmd_solve(const CommonOpts& opts) {
  RunSpec spec = build_spec(opts);
  PreparedProblem prepared = prepare_problem(spec);
  spec.mu = prepared.mu;
  spec.beta = prepared.beta;
  spec.beta_g = prepared.beta_g;
  RunOutcome outcome = run_single(prepared, spec);

  namespace fs = std::filesystem;
  fs::path dir(spec.output_dir);
  write_trace_csv(outcome.result.trace, (dir / "trace.csv").string());
  write_summary_json(outcome.summary, spec, (dir / "summary.json").string());
  if (spec.write_solution)
    write_solution_csv(outcome.result.x, (dir / "solution.csv").string());
  if (spec.write_svg)
    write_trace_svg(outcome.result.trace, outcome.summary.algorithm,
                    (dir / "trace.svg").string());

  std::cout << outcome.summary.algorithm << ": "
            << (outcome.result.status == SolveStatus::converged
                    ? "converged"
                    : outcome.result.status == SolveStatus::max_iters
                          ? "max-iters"
                          : "error")
            << " after " << outcome.summary.iterations
            << " iterations, objective " << outcome.summary.final_objective
            << ", nnz " << outcome.summary.nnz << "\n";
  if (outcome.result.status == SolveStatus::error_nonfinite) return 1;
  return outcome.result.status == SolveStatus::converged ? 0 : 2;
}

int cmd_bench(const CommonOpts& opts, const std::vector<std::string>& algs) {
  if (algs.size() < 2)
    throw std::invalid_argument("bench needs at least two --alg entries");
  RunSpec spec = build_spec(opts);
  std::vector<Algorithm> algorithms;
  for (const auto& name : algs) {
    auto alg = algorithm_from_name(name);
    if (!alg) throw std::invalid_argument("unknown algorithm: " + name);
    algorithms.push_back(*alg);
  }
  PreparedProblem prepared = prepare_problem(spec);
  spec.mu = prepared.mu;
  spec.beta = prepared.beta;
  spec.beta_g = prepared.beta_g;
  auto outcomes = run_bench(prepared, spec, algorithms);

  namespace fs = std::filesystem;
  fs::path dir(spec.output_dir);
  write_bench_csv(outcomes, (dir / "bench.csv").string());
  for (const auto& cell : outcomes) {
    write_trace_csv(cell.result.trace,
                    (dir / (cell.summary.algorithm + "_trace.csv")).string());
    if (spec.write_svg)
      write_trace_svg(cell.result.trace, cell.summary.algorithm,
                      (dir / (cell.summary.algorithm + "_trace.svg")).string());
    std::cout << cell.summary.algorithm << ": nnz " << cell.summary.nnz
              << ", iters " << cell.summary.iterations << ", objective "
              << cell.summary.final_objective;
    if (cell.summary.mse) std::cout << ", mse " << *cell.summary.mse;
    std::cout << "\n";
  }
  return 0;
}

int cmd_gen(const CommonOpts& opts) {
  RunSpec spec = build_spec(opts);
  if (!spec.data_file.empty())
    throw std::invalid_argument("gen takes --gen parameters, not --data");
  PreparedProblem prepared = prepare_problem(spec);

  namespace fs = std::filesystem;
  fs::path dir(spec.output_dir);
  fs::create_directories(dir);
  write_libsvm(prepared.data, (dir / "dataset.libsvm").string());
  if (prepared.truth)
    write_truth_json(*prepared.truth, (dir / "truth.json").string());
  std::cout << "wrote " << (dir / "dataset.libsvm").string() << " (m="
            << prepared.data.samples() << ", n=" << prepared.data.dim();
  if (prepared.truth) std::cout << ", nnz(x*)=" << prepared.truth->nnz();
  std::cout << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("SCORCH_THREADS"))
    Eigen::setNbThreads(std::max(1, std::atoi(threads)));

  CLI::App app{"scorch: proximal Newton-type solvers with self-concordant "
               "smoothing"};
  app.require_subcommand(1);

  CommonOpts solve_opts, bench_opts, gen_opts;
  std::vector<std::string> bench_algs;

  CLI::App* solve = app.add_subcommand("solve", "Run one solver");
  add_common(solve, solve_opts, true);

  CLI::App* bench =
      app.add_subcommand("bench", "Run several algorithms on one dataset");
  add_common(bench, bench_opts, false);
  bench->add_option("--alg", bench_algs, "Algorithms to compare (repeatable)")
      ->required();

  CLI::App* gen = app.add_subcommand("gen", "Generate a dataset");
  add_common(gen, gen_opts, false);

  try {
    app.parse(argc, argv);
    if (solve->parsed()) return cmd_solve(solve_opts);
    if (bench->parsed()) return cmd_bench(bench_opts, bench_algs);
    if (gen->parsed()) return cmd_gen(gen_opts);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
