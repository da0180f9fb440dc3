#pragma once

#include <optional>
#include <vector>

#include "scorch/problems.hpp"
#include "scorch/prox.hpp"

namespace scorch {

enum class Algorithm { prox_n_score, prox_ggn_score, prox_grad, fast_prox_grad };

const char* algorithm_name(Algorithm alg);
std::optional<Algorithm> algorithm_from_name(const std::string& name);

struct SolverConfig {
  Algorithm algorithm = Algorithm::prox_n_score;
  double alpha = 1.0;        // in (0, 1]
  double mu = 1.0;           // recorded; the smoother owns the actual value
  double tol = 1e-6;         // relative-step termination
  int max_iters = 1000;
  std::optional<double> lipschitz_L;  // baselines; default lambda_max(A^T A)
  // Threshold convention used by the scaled prox inside the Newton-type
  // steps. The literal d-hat form is the one the step update is stable
  // under; scaled_inverse is exposed for comparison.
  DHatConvention prox_convention = DHatConvention::literal;
  // Experiment knob: fold the damped step alpha_bar (instead of alpha) into
  // the prox parameter of the SCORE steps.
  bool prox_fold_damped = false;

  void validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0))
      throw std::invalid_argument("SolverConfig: alpha must be in (0,1]");
    if (!(tol > 0.0))
      throw std::invalid_argument("SolverConfig: tol must be > 0");
    if (max_iters < 1)
      throw std::invalid_argument("SolverConfig: max_iters must be >= 1");
  }
};

struct TraceRecord {
  int k = 0;
  double objective = 0.0;           // L(x_k) = f + g
  double smoothed_objective = 0.0;  // L_s(x_k) = f + g_s + g
  double alpha_bar = 0.0;           // damped step used to reach x_k
  double rel_step = 0.0;            // ||x_k - x_{k-1}|| / max(||x_{k-1}||, 1)
  double residual = 0.0;            // subgradient residual at x_k
  int nnz = 0;
  double wall_seconds = 0.0;
};

enum class SolveStatus { converged, max_iters, error_nonfinite };

struct SolveResult {
  Vector x;
  std::vector<TraceRecord> trace;
  SolveStatus status = SolveStatus::max_iters;
  int iterations = 0;
};

struct SolverState {
  Vector x;
  int k = 0;
  Vector hg_diag;
  double eta = 0.0;
  double alpha_bar = 0.0;
  // Momentum sequence for the fast proximal gradient method.
  Vector fista_y;
  double fista_t = 1.0;
};

// eta = ||grad g_s(x)||_{H_g}^* and alpha_bar = alpha / (1 + M_g * eta).
// Throws on nonfinite gradient.
std::pair<double, double> step_length(const SmoothedRegularizer& smoother,
                                      const Vector& x, double alpha);

// One iteration each; updates state.x, state.eta, state.alpha_bar, state.k.
void prox_n_score_step(const CompositeProblem& problem, SolverState& state,
                       const SolverConfig& config);
void prox_ggn_score_step(const CompositeProblem& problem, SolverState& state,
                         const SolverConfig& config);
void prox_grad_step(const CompositeProblem& problem, SolverState& state,
                    const SolverConfig& config);
void fast_prox_grad_step(const CompositeProblem& problem, SolverState& state,
                         const SolverConfig& config);

SolveResult solve(const CompositeProblem& problem, const SolverConfig& config);
SolveResult solve(const CompositeProblem& problem, const SolverConfig& config,
                  const Vector& x0);

// --- Convergence diagnostics -------------------------------------------

// omega_nu(tau) from the second-order bound on g_s; removable singularity at
// tau = 0 handled by a quadratic Taylor branch for |tau| < 1e-4. Throws
// std::domain_error for tau >= 1 when nu > 2.
double omega_nu(double nu, double tau);

// R_nu(tau) for nu = 2 or nu in (2, 3], tau in [0, 1).
double big_r_nu(double nu, double tau);

// d_nu(x, y) with the local norm taken in the smoother's Hessian metric at x.
double d_nu_metric(double nu, double m_g, const SmoothedRegularizer& smoother,
                   const Vector& x, const Vector& y);

}  // namespace scorch
