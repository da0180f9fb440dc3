#include "scorch/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace scorch {

namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow
double log1pexp(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

}  // namespace

CompositeProblem logistic_problem(const Matrix& A, const Vector& y,
                                  double beta, double mu) {
  if (A.rows() != y.size())
    throw std::invalid_argument("logistic_problem: A rows != labels");
  if (!A.allFinite())
    throw std::invalid_argument("logistic_problem: nonfinite design entries");
  for (Eigen::Index i = 0; i < y.size(); ++i)
    if (y[i] != 1.0 && y[i] != -1.0)
      throw std::invalid_argument("logistic_problem: labels must be -1 or +1");

  const int n = static_cast<int>(A.cols());
  CompositeProblem p;
  p.n = n;
  Matrix Acopy = A;
  Vector ycopy = y;
  p.f = [Acopy, ycopy](const Vector& x) {
    Vector z = Acopy * x;
    double v = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i)
      v += log1pexp(-ycopy[i] * z[i]);
    return v;
  };
  p.grad_f = [Acopy, ycopy](const Vector& x) {
    Vector z = Acopy * x;
    Vector lp(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i)
      lp[i] = -ycopy[i] * sigmoid(-ycopy[i] * z[i]);
    return (Acopy.transpose() * lp).eval();
  };
  p.hess_f = [Acopy, ycopy](const Vector& x) {
    Vector z = Acopy * x;
    Vector w(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      double s = sigmoid(-ycopy[i] * z[i]);
      w[i] = s * (1.0 - s);
    }
    return (Acopy.transpose() * w.asDiagonal() * Acopy).eval();
  };
  p.penalty = PenaltySpec::l1(beta);
  p.smoother = smooth_l1(mu, n, beta);

  ResidualModel model;
  model.inputs = A;
  model.targets = y;
  model.loss = [](double yi, double yhat) { return log1pexp(-yi * yhat); };
  model.dloss = [](double yi, double yhat) {
    return -yi * sigmoid(-yi * yhat);
  };
  model.d2loss = [](double yi, double yhat) {
    double s = sigmoid(-yi * yhat);
    return s * (1.0 - s);
  };
  p.residual = std::move(model);
  p.lipschitz = lambda_max_ata(A);
  return p;
}

CompositeProblem least_squares_problem(const Matrix& A, const Vector& y,
                                       const PenaltySpec& penalty, double mu) {
  if (A.rows() != y.size())
    throw std::invalid_argument("least_squares_problem: A rows != targets");
  const int n = static_cast<int>(A.cols());
  CompositeProblem p;
  p.n = n;
  Matrix Acopy = A;
  Vector ycopy = y;
  p.f = [Acopy, ycopy](const Vector& x) {
    return 0.5 * (Acopy * x - ycopy).squaredNorm();
  };
  p.grad_f = [Acopy, ycopy](const Vector& x) {
    return (Acopy.transpose() * (Acopy * x - ycopy)).eval();
  };
  Matrix ata = A.transpose() * A;
  p.hess_f = [ata](const Vector&) { return ata; };
  p.penalty = penalty;
  p.smoother = smoother_for_penalty(penalty, mu, n);

  ResidualModel model;
  model.inputs = A;
  model.targets = y;
  model.loss = [](double yi, double yhat) {
    double r = yhat - yi;
    return 0.5 * r * r;
  };
  model.dloss = [](double yi, double yhat) { return yhat - yi; };
  model.d2loss = [](double, double) { return 1.0; };
  p.residual = std::move(model);
  p.lipschitz = lambda_max_ata(A);
  return p;
}

AugmentedJacobian build_augmented_jacobian(const ResidualModel& model,
                                           const SmoothedRegularizer& smoother,
                                           const Vector& x) {
  const int m = model.samples();
  const int rows = m * model.outputs_per_sample() + 1;
  AugmentedJacobian aug;
  aug.jac.resize(rows, model.dim());
  aug.jac.topRows(m) = model.inputs;
  aug.jac.row(rows - 1) = smoother.gradient(x).transpose();
  aug.v.resize(rows);
  aug.u.resize(rows);
  Vector yhat = model.predict(x);
  for (int i = 0; i < m; ++i) {
    aug.v[i] = model.d2loss(model.targets[i], yhat[i]);
    aug.u[i] = model.dloss(model.targets[i], yhat[i]);
  }
  aug.v[rows - 1] = 0.0;
  aug.u[rows - 1] = 1.0;
  return aug;
}

namespace {

// dist(v, Box + kappa*Ball) = max(||clamp residual|| - kappa, 0) when the
// group block is zero; singleton shifts otherwise.
double group_distance(const Vector& v, const Vector& x,
                      const std::vector<int>& idx, double beta, double kappa) {
  double r2 = 0.0;
  for (int i : idx) r2 += x[i] * x[i];
  if (r2 > 0.0) {
    double norm = std::sqrt(r2);
    double d2 = 0.0;
    for (int i : idx) {
      double w = v[i] - kappa * x[i] / norm;
      double di;
      if (x[i] != 0.0)
        di = w - beta * (x[i] > 0 ? 1.0 : -1.0);
      else
        di = std::max(std::abs(w) - beta, 0.0);
      d2 += di * di;
    }
    return std::sqrt(d2);
  }
  double d2 = 0.0;
  for (int i : idx) {
    double di = std::max(std::abs(v[i]) - beta, 0.0);
    d2 += di * di;
  }
  return std::max(std::sqrt(d2) - kappa, 0.0);
}

}  // namespace

double subgradient_residual(const CompositeProblem& problem, const Vector& x) {
  const PenaltySpec& spec = problem.penalty;
  Vector v = -problem.grad_q(x);
  double beta = spec.has_l1() ? spec.beta : 0.0;

  switch (spec.kind) {
    case PenaltyKind::none:
      return v.norm();
    case PenaltyKind::l1: {
      double r2 = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        double d;
        if (x[i] != 0.0)
          d = v[i] - beta * (x[i] > 0 ? 1.0 : -1.0);
        else
          d = std::max(std::abs(v[i]) - beta, 0.0);
        r2 += d * d;
      }
      return std::sqrt(r2);
    }
    case PenaltyKind::group_l2:
    case PenaltyKind::sparse_group: {
      std::vector<char> in_group(x.size(), 0);
      double r2 = 0.0;
      for (size_t j = 0; j < spec.groups.groups.size(); ++j) {
        const auto& idx = spec.groups.groups[j];
        for (int i : idx) in_group[i] = 1;
        double kappa =
            spec.beta_g * spec.groups.omega[static_cast<Eigen::Index>(j)];
        double dj = group_distance(v, x, idx, beta, kappa);
        r2 += dj * dj;
      }
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (in_group[i]) continue;
        double d;
        if (x[i] != 0.0)
          d = v[i] - beta * (x[i] > 0 ? 1.0 : -1.0);
        else
          d = std::max(std::abs(v[i]) - beta, 0.0);
        r2 += d * d;
      }
      return std::sqrt(r2);
    }
  }
  throw std::invalid_argument("subgradient_residual: unsupported penalty");
}

double lambda_max_ata(const Matrix& A) {
  const int n = static_cast<int>(A.cols());
  Vector v = Vector::Ones(n) / std::sqrt(static_cast<double>(n));
  double lambda = 0.0;
  for (int it = 0; it < 500; ++it) {
    Vector w = A.transpose() * (A * v);
    double norm = w.norm();
    if (norm == 0.0) return 0.0;
    w /= norm;
    double next = (A * w).squaredNorm();
    if (std::abs(next - lambda) <= 1e-13 * std::max(1.0, next)) {
      lambda = next;
      break;
    }
    lambda = next;
    v = w;
  }
  return lambda;
}

}  // namespace scorch
