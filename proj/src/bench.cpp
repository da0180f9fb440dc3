#include "scorch/bench.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace scorch {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double get_param(const std::map<std::string, double>& params,
                 const std::string& key, double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

// Atomic write: temp file in the target directory, then rename.
void write_file_atomic(const std::string& path, const std::string& body) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << body;
  }
  fs::rename(tmp, target);
}

}  // namespace

const char* family_name(ProblemFamily family) {
  switch (family) {
    case ProblemFamily::logistic:
      return "logistic";
    case ProblemFamily::group_lasso:
      return "group-lasso";
    case ProblemFamily::deconv:
      return "deconv";
  }
  return "?";
}

std::optional<ProblemFamily> family_from_name(const std::string& name) {
  if (name == "logistic") return ProblemFamily::logistic;
  if (name == "group-lasso" || name == "group_lasso")
    return ProblemFamily::group_lasso;
  if (name == "deconv") return ProblemFamily::deconv;
  return std::nullopt;
}

PreparedProblem prepare_problem(const RunSpec& spec) {
  PreparedProblem out;
  std::optional<GroundTruth> truth;

  switch (spec.family) {
    case ProblemFamily::logistic: {
      if (spec.uses_generator()) {
        LogisticGenConfig gen;
        gen.m = static_cast<int>(get_param(spec.gen_params, "m", gen.m));
        gen.n = static_cast<int>(get_param(spec.gen_params, "n", gen.n));
        gen.seed = static_cast<std::uint64_t>(
            get_param(spec.gen_params, "seed", 0));
        gen.sparsity = get_param(spec.gen_params, "sparsity", gen.sparsity);
        gen.flip_rate = get_param(spec.gen_params, "flip", gen.flip_rate);
        auto [data, gt] = gen_logistic(gen);
        out.data = std::move(data);
        truth = std::move(gt);
        out.beta = spec.beta >= 0 ? spec.beta : 0.2;
      } else {
        out.data = parse_libsvm(spec.data_file);
        out.beta = spec.beta >= 0 ? spec.beta : 1.0;
      }
      out.mu = spec.mu > 0 ? spec.mu : 1.0;
      out.problem = logistic_problem(out.data.A, out.data.y, out.beta, out.mu);
      break;
    }
    case ProblemFamily::group_lasso: {
      if (!spec.uses_generator())
        throw std::invalid_argument(
            "group-lasso runs require generator parameters (the group "
            "structure comes from the generator)");
      GroupLassoGenConfig gen;
      gen.m = static_cast<int>(get_param(spec.gen_params, "m", gen.m));
      gen.n = static_cast<int>(get_param(spec.gen_params, "n", gen.n));
      gen.n_groups =
          static_cast<int>(get_param(spec.gen_params, "ng", gen.n_groups));
      gen.seed =
          static_cast<std::uint64_t>(get_param(spec.gen_params, "seed", 0));
      gen.active_fraction =
          get_param(spec.gen_params, "active", gen.active_fraction);
      gen.within_fraction =
          get_param(spec.gen_params, "within", gen.within_fraction);
      gen.noise_sigma = get_param(spec.gen_params, "noise", gen.noise_sigma);
      auto [data, gt] = gen_group_lasso(gen);
      // beta = tau1*gamma*||A^T y||_inf, beta_g = (10-tau1)*gamma*||A^T y||_inf
      double scale = (data.A.transpose() * data.y).cwiseAbs().maxCoeff();
      double tau1 = get_param(spec.gen_params, "tau1", 0.9);
      double gamma = get_param(spec.gen_params, "gamma", 1e-7);
      out.beta = spec.beta >= 0 ? spec.beta : tau1 * gamma * scale;
      out.beta_g =
          spec.beta_g >= 0 ? spec.beta_g : (10.0 - tau1) * gamma * scale;
      out.mu = spec.mu > 0 ? spec.mu : 1.0;
      PenaltySpec penalty =
          PenaltySpec::sparse_group(out.beta, out.beta_g, *gt.groups);
      out.problem =
          least_squares_problem(data.A, data.y, penalty, out.mu);
      out.data = std::move(data);
      truth = std::move(gt);
      break;
    }
    case ProblemFamily::deconv: {
      if (spec.uses_generator()) {
        DeconvolutionGenConfig gen;
        gen.n = static_cast<int>(get_param(spec.gen_params, "n", gen.n));
        gen.seed =
            static_cast<std::uint64_t>(get_param(spec.gen_params, "seed", 0));
        gen.spikes =
            static_cast<int>(get_param(spec.gen_params, "spikes", -1));
        gen.noise_sigma = get_param(spec.gen_params, "noise", gen.noise_sigma);
        auto [data, gt] = gen_deconvolution(gen);
        out.data = std::move(data);
        truth = std::move(gt);
      } else {
        out.data = parse_libsvm(spec.data_file);
      }
      out.beta = spec.beta >= 0 ? spec.beta : 1e-3;
      out.mu = spec.mu > 0 ? spec.mu : 5e-2;
      out.problem = least_squares_problem(
          out.data.A, out.data.y, PenaltySpec::l1(out.beta), out.mu);
      break;
    }
  }
  out.truth = std::move(truth);
  return out;
}

RunOutcome run_single(const PreparedProblem& prepared, const RunSpec& spec) {
  SolverConfig config = spec.solver;
  RunOutcome outcome;
  outcome.result = solve(prepared.problem, config);
  SummaryRow& row = outcome.summary;
  row.algorithm = algorithm_name(config.algorithm);
  row.m = prepared.data.samples();
  row.n = prepared.data.dim();
  row.nnz = count_nonzeros(outcome.result.x);
  row.iterations = outcome.result.iterations;
  row.wall_seconds = outcome.result.trace.back().wall_seconds;
  row.final_objective = outcome.result.trace.back().objective;
  row.status = outcome.result.status;
  if (prepared.truth) {
    double err = (outcome.result.x - prepared.truth->x_star).squaredNorm();
    row.mse = err / prepared.data.dim();
  }
  return outcome;
}

std::vector<RunOutcome> run_bench(const PreparedProblem& prepared,
                                  const RunSpec& spec,
                                  const std::vector<Algorithm>& algorithms) {
  std::vector<RunOutcome> outcomes;
  for (Algorithm alg : algorithms) {
    RunSpec cell = spec;
    cell.solver.algorithm = alg;
    try {
      outcomes.push_back(run_single(prepared, cell));
    } catch (const std::exception& err) {
      // A failing cell is recorded, not fatal.
      RunOutcome failed;
      failed.summary.algorithm = algorithm_name(alg);
      failed.summary.m = prepared.data.samples();
      failed.summary.n = prepared.data.dim();
      failed.summary.status = SolveStatus::error_nonfinite;
      failed.summary.final_objective =
          std::numeric_limits<double>::quiet_NaN();
      outcomes.push_back(std::move(failed));
    }
  }
  return outcomes;
}

void write_trace_csv(const std::vector<TraceRecord>& trace,
                     const std::string& path) {
  std::string body =
      "k,objective,smoothed_objective,alpha_bar,rel_step,residual,nnz,"
      "wall_seconds\n";
  for (const auto& rec : trace) {
    body += std::to_string(rec.k) + "," + fmt(rec.objective) + "," +
            fmt(rec.smoothed_objective) + "," + fmt(rec.alpha_bar) + "," +
            fmt(rec.rel_step) + "," + fmt(rec.residual) + "," +
            std::to_string(rec.nnz) + "," + fmt(rec.wall_seconds) + "\n";
  }
  write_file_atomic(path, body);
}

namespace {

const char* status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged:
      return "converged";
    case SolveStatus::max_iters:
      return "max-iters";
    case SolveStatus::error_nonfinite:
      return "error";
  }
  return "?";
}

json spec_to_json(const RunSpec& spec) {
  json j;
  j["family"] = family_name(spec.family);
  if (!spec.data_file.empty()) j["data_file"] = spec.data_file;
  if (!spec.gen_params.empty()) j["gen"] = spec.gen_params;
  j["algorithm"] = algorithm_name(spec.solver.algorithm);
  j["alpha"] = spec.solver.alpha;
  j["mu"] = spec.mu;
  j["beta"] = spec.beta;
  j["beta_g"] = spec.beta_g;
  j["tol"] = spec.solver.tol;
  j["max_iters"] = spec.solver.max_iters;
  j["prox_dhat_literal"] =
      spec.solver.prox_convention == DHatConvention::literal;
  return j;
}

json summary_to_json(const SummaryRow& row) {
  json j;
  j["algorithm"] = row.algorithm;
  j["m"] = row.m;
  j["n"] = row.n;
  j["nnz"] = row.nnz;
  j["iterations"] = row.iterations;
  j["wall_seconds"] = row.wall_seconds;
  j["final_objective"] = row.final_objective;
  if (row.mse) j["mse"] = *row.mse;
  j["status"] = status_name(row.status);
  return j;
}

}  // namespace

void write_summary_json(const SummaryRow& summary, const RunSpec& spec,
                        const std::string& path) {
  json j = summary_to_json(summary);
  j["spec"] = spec_to_json(spec);
  write_file_atomic(path, j.dump(2) + "\n");
}

void write_bench_csv(const std::vector<RunOutcome>& outcomes,
                     const std::string& path) {
  std::string body =
      "algorithm,m,n,nnz,iterations,wall_seconds,final_objective,mse,status\n";
  for (const auto& cell : outcomes) {
    const SummaryRow& row = cell.summary;
    body += row.algorithm + "," + std::to_string(row.m) + "," +
            std::to_string(row.n) + "," + std::to_string(row.nnz) + "," +
            std::to_string(row.iterations) + "," + fmt(row.wall_seconds) +
            "," + fmt(row.final_objective) + "," +
            (row.mse ? fmt(*row.mse) : "") + "," + status_name(row.status) +
            "\n";
  }
  write_file_atomic(path, body);
}

void write_solution_csv(const Vector& x, const std::string& path) {
  std::string body = "i,x\n";
  for (Eigen::Index i = 0; i < x.size(); ++i)
    body += std::to_string(i) + "," + fmt(x[i]) + "\n";
  write_file_atomic(path, body);
}

void write_truth_json(const GroundTruth& truth, const std::string& path) {
  json j;
  j["nnz"] = truth.nnz();
  j["x_star"] = std::vector<double>(truth.x_star.data(),
                                    truth.x_star.data() + truth.x_star.size());
  j["active_groups"] = truth.active_groups;
  if (truth.groups) {
    j["groups"] = truth.groups->groups;
    j["omega"] = std::vector<double>(
        truth.groups->omega.data(),
        truth.groups->omega.data() + truth.groups->omega.size());
  }
  write_file_atomic(path, j.dump(2) + "\n");
}

void write_trace_svg(const std::vector<TraceRecord>& trace,
                     const std::string& title, const std::string& path) {
  const int width = 640, height = 400, margin = 50;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& rec : trace) {
    if (!std::isfinite(rec.objective)) continue;
    lo = std::min(lo, rec.objective);
    hi = std::max(hi, rec.objective);
  }
  if (!(hi > lo)) hi = lo + 1.0;
  double kmax = std::max<size_t>(trace.size() - 1, 1);

  std::string body;
  body += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
          std::to_string(width) + "\" height=\"" + std::to_string(height) +
          "\">\n";
  body += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  body += "<text x=\"" + std::to_string(width / 2) +
          "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" + title +
          "</text>\n";
  body += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" "
          "points=\"";
  for (size_t i = 0; i < trace.size(); ++i) {
    if (!std::isfinite(trace[i].objective)) continue;
    double px = margin + (width - 2 * margin) * (i / kmax);
    double py = height - margin -
                (height - 2 * margin) * (trace[i].objective - lo) / (hi - lo);
    body += fmt(px) + "," + fmt(py) + " ";
  }
  body += "\"/>\n";
  body += "<text x=\"" + std::to_string(margin) + "\" y=\"" +
          std::to_string(height - margin + 20) +
          "\" font-size=\"11\">iteration 0.." +
          std::to_string(trace.size() - 1) + "</text>\n";
  body += "<text x=\"" + std::to_string(margin) + "\" y=\"" +
          std::to_string(margin - 8) + "\" font-size=\"11\">objective [" +
          fmt(lo) + ", " + fmt(hi) + "]</text>\n";
  body += "</svg>\n";
  write_file_atomic(path, body);
}

std::string validate_score_trace(const std::vector<TraceRecord>& trace,
                                 double alpha) {
  for (const auto& rec : trace) {
    if (!(rec.alpha_bar > 0.0) || rec.alpha_bar > alpha * (1.0 + 1e-12))
      return "alpha_bar " + fmt(rec.alpha_bar) + " outside (0, alpha] at k=" +
             std::to_string(rec.k);
  }
  return "";
}

}  // namespace scorch
