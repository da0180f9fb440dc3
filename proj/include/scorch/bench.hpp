#pragma once

#include <map>
#include <optional>
#include <string>

#include "scorch/data.hpp"
#include "scorch/solvers.hpp"

namespace scorch {

enum class ProblemFamily { logistic, group_lasso, deconv };

const char* family_name(ProblemFamily family);
std::optional<ProblemFamily> family_from_name(const std::string& name);

// One benchmark cell: problem family, one dataset source (file or generator
// parameters), solver configuration, and output options.
struct RunSpec {
  ProblemFamily family = ProblemFamily::logistic;
  std::string data_file;                     // LIBSVM path, or
  std::map<std::string, double> gen_params;  // generator parameters + seed
  SolverConfig solver;
  double beta = -1.0;    // < 0 -> family default
  double beta_g = -1.0;  // < 0 -> family default (group lasso)
  double mu = -1.0;      // < 0 -> family default
  std::string output_dir;
  bool write_solution = false;
  bool write_svg = false;

  bool uses_generator() const { return data_file.empty(); }
};

struct SummaryRow {
  std::string algorithm;
  int m = 0;
  int n = 0;
  int nnz = 0;
  int iterations = 0;
  double wall_seconds = 0.0;
  double final_objective = 0.0;
  std::optional<double> mse;  // (1/n)||x - x*||^2 when x* is known
  SolveStatus status = SolveStatus::max_iters;
};

struct PreparedProblem {
  Dataset data;
  std::optional<GroundTruth> truth;
  CompositeProblem problem;
  double beta = 0.0;
  double beta_g = 0.0;
  double mu = 0.0;
};

// Builds the dataset (generate or parse) and the composite problem with the
// family defaults for beta/beta_g/mu unless overridden in the spec.
PreparedProblem prepare_problem(const RunSpec& spec);

struct RunOutcome {
  SummaryRow summary;
  SolveResult result;
};

RunOutcome run_single(const PreparedProblem& prepared, const RunSpec& spec);

// Runs each algorithm on the identical prepared problem; order preserved.
std::vector<RunOutcome> run_bench(const PreparedProblem& prepared,
                                  const RunSpec& spec,
                                  const std::vector<Algorithm>& algorithms);

// trace.csv schema (fixed order):
// k,objective,smoothed_objective,alpha_bar,rel_step,residual,nnz,wall_seconds
void write_trace_csv(const std::vector<TraceRecord>& trace,
                     const std::string& path);

void write_summary_json(const SummaryRow& summary, const RunSpec& spec,
                        const std::string& path);

void write_bench_csv(const std::vector<RunOutcome>& outcomes,
                     const std::string& path);

void write_solution_csv(const Vector& x, const std::string& path);

void write_truth_json(const GroundTruth& truth, const std::string& path);

// Objective-vs-iteration line plot.
void write_trace_svg(const std::vector<TraceRecord>& trace,
                     const std::string& title, const std::string& path);

// Checks the step-length rule over a SCORE trace: every alpha_bar in
// (0, alpha], and alpha_bar == alpha on rows where the smoother gradient
// vanished (eta = 0 implies alpha_bar = alpha). Returns an explanation or
// empty string when valid.
std::string validate_score_trace(const std::vector<TraceRecord>& trace,
                                 double alpha);

}  // namespace scorch
