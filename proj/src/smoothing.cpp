#include "scorch/smoothing.hpp"

#include <cmath>
#include <stdexcept>

namespace scorch {

double smoothing_m_g(double m_h, double nu, double mu, int n) {
  if (nu <= 3.0)
    return std::pow(static_cast<double>(n), 0.5 * (3.0 - nu)) *
           std::pow(mu, 0.5 * nu - 2.0) * m_h;
  return std::pow(mu, 4.0 - 1.5 * nu) * m_h;
}

SmoothedRegularizer zero_smoother(int n, double mu) {
  return SmoothedRegularizer(
      n, mu, 0.0, 0.0, [](const Vector&) { return 0.0; },
      [](const Vector& x) { return Vector::Zero(x.size()); },
      [](const Vector& x) { return Vector::Zero(x.size()); });
}

SmoothedRegularizer smooth_l1(double mu, int n, double beta) {
  if (!(mu > 0.0)) throw std::invalid_argument("smooth_l1: mu must be > 0");
  if (beta < 0.0) throw std::invalid_argument("smooth_l1: beta must be >= 0");
  if (beta == 0.0) return zero_smoother(n, mu);

  const SmoothingKernel& kernel = catalog_kernel("hyperbolic-p1");
  // Folding beta into the kernel weights gives M_h = beta^(1-nu/2) M_phi.
  double m_h = std::pow(beta, 1.0 - 0.5 * kernel.nu) * kernel.m_phi;
  double m_g = smoothing_m_g(m_h, kernel.nu, mu, n);
  double mu2 = mu * mu;

  auto value = [mu, mu2, beta](const Vector& x) {
    double v = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i)
      v += std::sqrt(mu2 + x[i] * x[i]) - mu;
    return beta * v;
  };
  auto gradient = [mu2, beta](const Vector& x) {
    Vector g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i)
      g[i] = beta * x[i] / std::sqrt(mu2 + x[i] * x[i]);
    return g;
  };
  auto hessian = [mu2, beta](const Vector& x) {
    Vector h(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i)
      h[i] = beta * mu2 * std::pow(mu2 + x[i] * x[i], -1.5);
    return h;
  };
  return SmoothedRegularizer(n, mu, m_g, beta, value, gradient, hessian);
}

SmoothedRegularizer smooth_l2_groups(double mu, const GroupSpec& groups,
                                     double beta_g, int n) {
  if (!(mu > 0.0))
    throw std::invalid_argument("smooth_l2_groups: mu must be > 0");
  if (beta_g < 0.0)
    throw std::invalid_argument("smooth_l2_groups: beta_g must be >= 0");
  groups.validate(n);
  if (beta_g == 0.0) return zero_smoother(n, mu);

  const SmoothingKernel& kernel = catalog_kernel("hyperbolic-p1");
  double m_h = 0.0;
  for (Eigen::Index j = 0; j < groups.omega.size(); ++j) {
    double lambda = beta_g * groups.omega[j];
    m_h = std::max(m_h,
                   std::pow(lambda, 1.0 - 0.5 * kernel.nu) * kernel.m_phi);
  }
  double m_g = smoothing_m_g(m_h, kernel.nu, mu, n);
  double mu2 = mu * mu;
  GroupSpec gs = groups;

  auto value = [mu, mu2, beta_g, gs](const Vector& x) {
    double v = 0.0;
    for (size_t j = 0; j < gs.groups.size(); ++j) {
      double r2 = 0.0;
      for (int i : gs.groups[j]) r2 += x[i] * x[i];
      v += gs.omega[static_cast<Eigen::Index>(j)] *
           (std::sqrt(mu2 + r2) - mu);
    }
    return beta_g * v;
  };
  auto gradient = [mu2, beta_g, gs](const Vector& x) {
    Vector g = Vector::Zero(x.size());
    for (size_t j = 0; j < gs.groups.size(); ++j) {
      double r2 = 0.0;
      for (int i : gs.groups[j]) r2 += x[i] * x[i];
      double scale = beta_g * gs.omega[static_cast<Eigen::Index>(j)] /
                     std::sqrt(mu2 + r2);
      for (int i : gs.groups[j]) g[i] = scale * x[i];
    }
    return g;
  };
  // Block Hessian of c*(sqrt(mu^2+||x_j||^2)-mu) is
  //   c [ I/s - x_j x_j^T / s^3 ],  s = sqrt(mu^2+||x_j||^2);
  // its diagonal c (s^2 - x_i^2)/s^3 stays >= c mu^2/s^3 > 0.
  auto hessian = [mu2, beta_g, gs](const Vector& x) {
    Vector h = Vector::Zero(x.size());
    for (size_t j = 0; j < gs.groups.size(); ++j) {
      double r2 = 0.0;
      for (int i : gs.groups[j]) r2 += x[i] * x[i];
      double s2 = mu2 + r2;
      double s3 = s2 * std::sqrt(s2);
      double c = beta_g * gs.omega[static_cast<Eigen::Index>(j)];
      for (int i : gs.groups[j]) h[i] = c * (s2 - x[i] * x[i]) / s3;
    }
    return h;
  };
  return SmoothedRegularizer(n, mu, m_g, beta_g, value, gradient, hessian);
}

SmoothedRegularizer combine(const SmoothedRegularizer& a,
                            const SmoothedRegularizer& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("combine: dimension mismatch");
  if (a.weight() == 0.0) return b;
  if (b.weight() == 0.0) return a;
  SmoothedRegularizer lhs = a, rhs = b;
  return SmoothedRegularizer(
      a.dim(), a.mu(), std::max(a.m_g(), b.m_g()),
      a.weight() + b.weight(),
      [lhs, rhs](const Vector& x) { return lhs.value(x) + rhs.value(x); },
      [lhs, rhs](const Vector& x) {
        return (lhs.gradient(x) + rhs.gradient(x)).eval();
      },
      [lhs, rhs](const Vector& x) {
        return (lhs.hessian_diag(x) + rhs.hessian_diag(x)).eval();
      });
}

SmoothedRegularizer smoother_for_penalty(const PenaltySpec& penalty, double mu,
                                         int n) {
  switch (penalty.kind) {
    case PenaltyKind::none:
      return zero_smoother(n, mu);
    case PenaltyKind::l1:
      return smooth_l1(mu, n, penalty.beta);
    case PenaltyKind::group_l2:
      return smooth_l2_groups(mu, penalty.groups, penalty.beta_g, n);
    case PenaltyKind::sparse_group:
      return combine(smooth_l1(mu, n, penalty.beta),
                     smooth_l2_groups(mu, penalty.groups, penalty.beta_g, n));
  }
  throw std::logic_error("smoother_for_penalty: unreachable");
}

double l1_infconv_value(const std::string& kernel_name, double mu, double t) {
  if (!(mu > 0.0))
    throw std::invalid_argument("l1_infconv_value: mu must be > 0");
  if (kernel_name == "hyperbolic-p1")
    return std::sqrt(mu * mu + t * t) - mu;
  if (kernel_name == "ostrovskii-bach") {
    // The minimizer of |w| + mu*phi((t-w)/mu) is w = 0 because sup|phi'| = 1,
    // so the inf-conv equals mu*phi(t/mu).
    return mu * catalog_kernel("ostrovskii-bach").value(t / mu);
  }
  throw std::invalid_argument("l1_infconv_value: no closed form for kernel " +
                              kernel_name);
}

double indicator_lower_infconv_value(double mu, double lo, double x) {
  if (!(mu > 0.0))
    throw std::invalid_argument(
        "indicator_lower_infconv_value: mu must be > 0");
  return mu * std::exp((lo - x) / mu);
}

namespace {

double infconv_objective(const std::function<double(const Vector&)>& g,
                         const SeparableKernel& kernel, double mu,
                         const Vector& x, const Vector& w) {
  Vector arg = (x - w) / mu;
  for (Eigen::Index i = 0; i < arg.size(); ++i)
    if (!kernel.base.in_interior(arg[i]) && arg[i] != kernel.base.domain_lo &&
        arg[i] != kernel.base.domain_hi)
      return std::numeric_limits<double>::infinity();
  return g(w) + mu * kernel.value(arg);
}

}  // namespace

double infconv_oracle(const std::function<double(const Vector&)>& g,
                      const SeparableKernel& kernel, double mu,
                      const Vector& x, double box_lo, double box_hi,
                      int grid_steps) {
  if (grid_steps < 100)
    throw std::invalid_argument("infconv_oracle: grid_steps >= 100");
  const int n = static_cast<int>(x.size());
  if (n < 1 || n > 3)
    throw std::invalid_argument("infconv_oracle: dimension must be 1..3");

  Vector lo = Vector::Constant(n, box_lo);
  Vector hi = Vector::Constant(n, box_hi);
  Vector best_w = x;
  double best = std::numeric_limits<double>::infinity();

  for (int level = 0; level < 8; ++level) {
    int steps = level == 0 ? grid_steps : 24;
    Vector step = (hi - lo) / steps;
    std::vector<int> idx(n, 0);
    Vector w(n);
    bool done = false;
    while (!done) {
      for (int d = 0; d < n; ++d) w[d] = lo[d] + idx[d] * step[d];
      double v = infconv_objective(g, kernel, mu, x, w);
      if (v < best) {
        best = v;
        best_w = w;
      }
      int d = 0;
      while (d < n && ++idx[d] > steps) idx[d++] = 0;
      done = d == n;
    }
    lo = best_w - 1.5 * step;
    hi = best_w + 1.5 * step;
  }
  return best;
}

}  // namespace scorch
