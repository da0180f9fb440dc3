#pragma once

#include <functional>
#include <optional>

#include "scorch/smoothing.hpp"
#include "scorch/types.hpp"

namespace scorch {

// Finite-sum view of the smooth loss: f(x) = sum_i loss(y_i, yhat_i) with
// yhat_i = <a_i, x> (linear predictors; one output per sample).
struct ResidualModel {
  Matrix inputs;   // m x n, rows a_i
  Vector targets;  // y_i
  std::function<double(double y, double yhat)> loss;
  std::function<double(double y, double yhat)> dloss;   // d/d yhat
  std::function<double(double y, double yhat)> d2loss;  // d^2/d yhat^2

  int samples() const { return static_cast<int>(inputs.rows()); }
  int dim() const { return static_cast<int>(inputs.cols()); }
  int outputs_per_sample() const { return 1; }

  Vector predict(const Vector& x) const { return inputs * x; }

  double total_loss(const Vector& x) const {
    Vector yhat = predict(x);
    double v = 0.0;
    for (Eigen::Index i = 0; i < yhat.size(); ++i)
      v += loss(targets[i], yhat[i]);
    return v;
  }
};

// f smooth with derivative oracles, nonsmooth penalty g, and smoother g_s.
struct CompositeProblem {
  int n = 0;
  std::function<double(const Vector&)> f;
  std::function<Vector(const Vector&)> grad_f;
  std::function<Matrix(const Vector&)> hess_f;
  PenaltySpec penalty;
  SmoothedRegularizer smoother;
  std::optional<ResidualModel> residual;
  std::optional<double> lipschitz;  // lambda_max(A^T A) when known

  // L(x) = f + g
  double objective(const Vector& x) const { return f(x) + penalty.value(x); }
  // L_s(x) = f + g_s + g
  double smoothed_objective(const Vector& x) const {
    return f(x) + smoother.value(x) + penalty.value(x);
  }
  // grad q = grad f + grad g_s
  Vector grad_q(const Vector& x) const {
    return grad_f(x) + smoother.gradient(x);
  }
};

// f(x) = sum_i log(1 + exp(-y_i <a_i, x>)), penalty beta*||x||_1.
// Labels must lie in {-1, +1}.
CompositeProblem logistic_problem(const Matrix& A, const Vector& y,
                                  double beta, double mu);

// f(x) = 0.5*||Ax - y||^2 with an arbitrary penalty spec.
CompositeProblem least_squares_problem(const Matrix& A, const Vector& y,
                                       const PenaltySpec& penalty, double mu);

// J has m*n_y + 1 rows: per-sample prediction Jacobians stacked over the
// gradient of g_s. v = (loss'' ..., 0), u = (loss' ..., 1), so that
// J^T u = grad f + grad g_s exactly.
struct AugmentedJacobian {
  Matrix jac;  // (m*n_y + 1) x n
  Vector v;
  Vector u;
};

AugmentedJacobian build_augmented_jacobian(const ResidualModel& model,
                                           const SmoothedRegularizer& smoother,
                                           const Vector& x);

// Euclidean distance from -grad q(x) to the subdifferential of the penalty at
// x; zero iff x is first-order stationary for f + g_s + g.
double subgradient_residual(const CompositeProblem& problem, const Vector& x);

// Largest eigenvalue of A^T A by power iteration (deterministic start).
double lambda_max_ata(const Matrix& A);

}  // namespace scorch
