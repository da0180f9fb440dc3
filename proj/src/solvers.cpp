#include "scorch/solvers.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace scorch {

const char* algorithm_name(Algorithm alg) {
  switch (alg) {
    case Algorithm::prox_n_score:
      return "prox-n-score";
    case Algorithm::prox_ggn_score:
      return "prox-ggn-score";
    case Algorithm::prox_grad:
      return "prox-grad";
    case Algorithm::fast_prox_grad:
      return "fast-prox-grad";
  }
  return "?";
}

std::optional<Algorithm> algorithm_from_name(const std::string& name) {
  if (name == "prox-n-score") return Algorithm::prox_n_score;
  if (name == "prox-ggn-score") return Algorithm::prox_ggn_score;
  if (name == "prox-grad") return Algorithm::prox_grad;
  if (name == "fast-prox-grad") return Algorithm::fast_prox_grad;
  return std::nullopt;
}

std::pair<double, double> step_length(const SmoothedRegularizer& smoother,
                                      const Vector& x, double alpha) {
  Vector g = smoother.gradient(x);
  if (!g.allFinite())
    throw std::runtime_error("step_length: nonfinite smoother gradient");
  Vector h = smoother.hessian_diag(x);
  double eta2 = 0.0;
  for (Eigen::Index i = 0; i < g.size(); ++i) eta2 += g[i] * g[i] / h[i];
  double eta = std::sqrt(eta2);
  double alpha_bar = alpha / (1.0 + smoother.m_g() * eta);
  return {eta, alpha_bar};
}

namespace {

// SPD solve with a single diagonal-regularization retry.
Vector solve_spd(Matrix H, const Vector& rhs) {
  Eigen::LLT<Matrix> llt(H);
  if (llt.info() == Eigen::Success) {
    Vector sol = llt.solve(rhs);
    if (sol.allFinite()) return sol;
  }
  H.diagonal().array() += 1e-10;
  Eigen::LLT<Matrix> retry(H);
  if (retry.info() != Eigen::Success)
    throw std::runtime_error("solve_spd: factorization failed");
  Vector sol = retry.solve(rhs);
  if (!sol.allFinite())
    throw std::runtime_error("solve_spd: nonfinite solution");
  return sol;
}

void score_common(const CompositeProblem& problem, SolverState& state,
                  const SolverConfig& config) {
  state.hg_diag = problem.smoother.hessian_diag(state.x);
  auto [eta, alpha_bar] =
      step_length(problem.smoother, state.x, config.alpha);
  state.eta = eta;
  state.alpha_bar = alpha_bar;
}

}  // namespace

void prox_n_score_step(const CompositeProblem& problem, SolverState& state,
                       const SolverConfig& config) {
  score_common(problem, state, config);
  Vector grad = problem.grad_q(state.x);
  Matrix H = problem.hess_f(state.x);
  H.diagonal() += state.hg_diag;
  // Prox metric: diagonal of the full quadratic model H_k, scale-matched to
  // the damped step. With the smoother Hessian alone the thresholds lose the
  // loss curvature and the step update is not stable across regimes.
  Vector prox_diag = H.diagonal();
  Vector delta = solve_spd(std::move(H), grad);
  Vector z = state.x - state.alpha_bar * delta;
  state.x = prox_penalty(z, problem.penalty, DiagonalMetric{prox_diag},
                         state.alpha_bar, config.prox_convention);
  ++state.k;
}

void prox_ggn_score_step(const CompositeProblem& problem, SolverState& state,
                         const SolverConfig& config) {
  if (!problem.residual)
    throw std::invalid_argument("prox_ggn_score_step: no residual model");
  score_common(problem, state, config);
  AugmentedJacobian aug =
      build_augmented_jacobian(*problem.residual, problem.smoother, state.x);
  const Eigen::Index rows = aug.jac.rows();
  const Eigen::Index n = aug.jac.cols();
  Vector delta(n);
  if (rows <= n) {
    // delta = -H_g^{-1} J^T (I + V J H_g^{-1} J^T)^{-1} u, solved at size
    // rows(J). The inner matrix is nonsymmetric (V on one side): LU.
    Vector hinv = state.hg_diag.cwiseInverse();
    Matrix jhjt = aug.jac * hinv.asDiagonal() * aug.jac.transpose();
    Matrix inner = aug.v.asDiagonal() * jhjt;
    inner.diagonal().array() += 1.0;
    Eigen::PartialPivLU<Matrix> lu(inner);
    Vector z = lu.solve(aug.u);
    if (!z.allFinite()) {
      inner.diagonal().array() += 1e-10;
      z = Eigen::PartialPivLU<Matrix>(inner).solve(aug.u);
      if (!z.allFinite())
        throw std::runtime_error("prox_ggn_score_step: inner solve failed");
    }
    delta = -(hinv.array() * (aug.jac.transpose() * z).array()).matrix();
  } else {
    Matrix H = aug.jac.transpose() * aug.v.asDiagonal() * aug.jac;
    H.diagonal() += state.hg_diag;
    delta = -solve_spd(std::move(H), aug.jac.transpose() * aug.u);
  }
  // diag(J^T V J) + H_g: the GGN quadratic model's diagonal.
  Vector prox_diag = state.hg_diag;
  for (Eigen::Index i = 0; i < n; ++i) {
    double acc = 0.0;
    for (Eigen::Index r = 0; r < rows; ++r)
      acc += aug.v[r] * aug.jac(r, i) * aug.jac(r, i);
    prox_diag[i] += acc;
  }
  Vector z = state.x + state.alpha_bar * delta;
  state.x = prox_penalty(z, problem.penalty, DiagonalMetric{prox_diag},
                         state.alpha_bar, config.prox_convention);
  ++state.k;
}

namespace {

double require_lipschitz(const CompositeProblem& problem,
                         const SolverConfig& config) {
  if (config.lipschitz_L) return *config.lipschitz_L;
  if (problem.lipschitz) return *problem.lipschitz;
  throw std::invalid_argument(
      "proximal gradient: no Lipschitz constant available; set lipschitz_L");
}

}  // namespace

void prox_grad_step(const CompositeProblem& problem, SolverState& state,
                    const SolverConfig& config) {
  double L = require_lipschitz(problem, config);
  double step = 1.0 / L;
  state.eta = 0.0;
  state.alpha_bar = step;
  Vector z = state.x - step * problem.grad_q(state.x);
  state.x = prox_penalty(z, problem.penalty,
                         DiagonalMetric::identity(problem.n), step,
                         DHatConvention::scaled_inverse);
  ++state.k;
}

void fast_prox_grad_step(const CompositeProblem& problem, SolverState& state,
                         const SolverConfig& config) {
  double L = require_lipschitz(problem, config);
  double step = 1.0 / L;
  state.eta = 0.0;
  state.alpha_bar = step;
  if (state.fista_y.size() == 0) state.fista_y = state.x;
  Vector z = state.fista_y - step * problem.grad_q(state.fista_y);
  Vector next = prox_penalty(z, problem.penalty,
                             DiagonalMetric::identity(problem.n), step,
                             DHatConvention::scaled_inverse);
  double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * state.fista_t *
                                                   state.fista_t));
  state.fista_y = next + ((state.fista_t - 1.0) / t_next) * (next - state.x);
  state.fista_t = t_next;
  state.x = next;
  ++state.k;
}

SolveResult solve(const CompositeProblem& problem, const SolverConfig& config) {
  return solve(problem, config, Vector::Zero(problem.n));
}

SolveResult solve(const CompositeProblem& problem, const SolverConfig& config,
                  const Vector& x0) {
  config.validate();
  using clock = std::chrono::steady_clock;
  auto start = clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(clock::now() - start).count();
  };

  SolverState state;
  state.x = x0;

  SolveResult result;
  auto record = [&](double alpha_bar, double rel_step) {
    TraceRecord rec;
    rec.k = state.k;
    rec.objective = problem.objective(state.x);
    rec.smoothed_objective = problem.smoothed_objective(state.x);
    rec.alpha_bar = alpha_bar;
    rec.rel_step = rel_step;
    rec.residual = subgradient_residual(problem, state.x);
    rec.nnz = count_nonzeros(state.x);
    rec.wall_seconds = elapsed();
    result.trace.push_back(rec);
    return rec.objective;
  };

  // Row k = 0 records the starting point; alpha_bar is the damping the
  // step-length rule yields at x_0.
  {
    auto [eta0, bar0] = step_length(problem.smoother, state.x, config.alpha);
    state.eta = eta0;
    record(config.algorithm == Algorithm::prox_grad ||
                   config.algorithm == Algorithm::fast_prox_grad
               ? 1.0 / require_lipschitz(problem, config)
               : bar0,
           std::numeric_limits<double>::quiet_NaN());
  }

  for (int k = 1; k <= config.max_iters; ++k) {
    Vector prev = state.x;
    switch (config.algorithm) {
      case Algorithm::prox_n_score:
        prox_n_score_step(problem, state, config);
        break;
      case Algorithm::prox_ggn_score:
        prox_ggn_score_step(problem, state, config);
        break;
      case Algorithm::prox_grad:
        prox_grad_step(problem, state, config);
        break;
      case Algorithm::fast_prox_grad:
        fast_prox_grad_step(problem, state, config);
        break;
    }
    double rel_step =
        (state.x - prev).norm() / std::max(prev.norm(), 1.0);
    double objective = record(state.alpha_bar, rel_step);
    result.iterations = k;
    if (!std::isfinite(objective) || !state.x.allFinite()) {
      result.status = SolveStatus::error_nonfinite;
      result.x = std::move(prev);  // last finite iterate
      return result;
    }
    if (rel_step < config.tol) {
      result.status = SolveStatus::converged;
      result.x = state.x;
      return result;
    }
  }
  result.status = SolveStatus::max_iters;
  result.x = state.x;
  return result;
}

double omega_nu(double nu, double tau) {
  if (nu > 2.0 && tau >= 1.0)
    throw std::domain_error("omega_nu: tau must be < 1 for nu > 2");
  if (std::abs(tau) < 1e-4) {
    if (nu == 2.0) return 0.5 + tau / 6.0 + tau * tau / 24.0;
    double c = nu - 2.0;
    return 0.5 + tau / (3.0 * c) + nu * tau * tau / (12.0 * c * c);
  }
  if (nu == 2.0) return (std::exp(tau) - tau - 1.0) / (tau * tau);
  if (nu == 3.0) return (-tau - std::log1p(-tau)) / (tau * tau);
  if (nu == 4.0) return ((1.0 - tau) * std::log1p(-tau) + tau) / (tau * tau);
  double a = (nu - 2.0) / (4.0 - nu);
  double expo = 2.0 * (3.0 - nu) / (2.0 - nu);
  double inner = (nu - 2.0) / (2.0 * (3.0 - nu) * tau) *
                     (std::pow(1.0 - tau, expo) - 1.0) -
                 1.0;
  return a * inner / tau;
}

double big_r_nu(double nu, double tau) {
  if (nu != 2.0 && !(nu > 2.0 && nu <= 3.0))
    throw std::invalid_argument("big_r_nu: nu must be 2 or in (2,3]");
  if (nu == 2.0) return (1.5 + tau / 3.0) * std::exp(tau);
  if (tau < 0.0 || tau >= 1.0)
    throw std::domain_error("big_r_nu: tau must be in [0,1)");
  double a = (4.0 - nu) / (nu - 2.0);
  if (tau < 1e-6) return 0.5 * (a + 1.0);
  double p = std::pow(1.0 - tau, a);
  return (1.0 - p - a * tau * p) / (a * tau * tau * p);
}

double d_nu_metric(double nu, double m_g, const SmoothedRegularizer& smoother,
                   const Vector& x, const Vector& y) {
  Vector diff = y - x;
  if (nu == 2.0) return m_g * diff.norm();
  Vector h = smoother.hessian_diag(x);
  double local2 = 0.0;
  for (Eigen::Index i = 0; i < diff.size(); ++i)
    local2 += h[i] * diff[i] * diff[i];
  double local = std::sqrt(local2);
  return (0.5 * nu - 1.0) * m_g * std::pow(diff.norm(), 3.0 - nu) *
         std::pow(local, nu - 2.0);
}

}  // namespace scorch
