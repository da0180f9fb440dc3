#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>

#include "scorch/types.hpp"

namespace scorch {

// Univariate regularization kernel phi with derivative oracles and its
// generalized self-concordance parameters (M_phi, nu):
//   |phi'''(t)| <= M_phi * phi''(t)^(nu/2)  on the interior of the domain.
struct SmoothingKernel {
  std::string name;
  double domain_lo = -std::numeric_limits<double>::infinity();
  double domain_hi = std::numeric_limits<double>::infinity();
  double m_phi = 0.0;
  double nu = 0.0;
  std::function<double(double)> value;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
  std::function<double(double)> d3;

  bool in_interior(double t) const { return t > domain_lo && t < domain_hi; }
};

// Returns the catalog kernel by name. Known names:
//   hyperbolic-p1, ostrovskii-bach, energy, exponential, logistic,
//   boltzmann-shannon, burg, hellinger, fermi-dirac
// Throws std::out_of_range for unknown names.
const SmoothingKernel& catalog_kernel(const std::string& name);

std::vector<std::string> catalog_kernel_names();

struct ConcordanceReport {
  bool ok = false;
  double max_ratio = 0.0;  // max |phi'''| / phi''^(nu/2) over the grid
  double arg_max = 0.0;
};

// Samples the defining inequality on a grid. Passes iff
// |d3(t)| <= (1+tol) * M_phi * d2(t)^(nu/2) at every grid point.
// Throws std::domain_error if a grid point lies outside the open domain.
ConcordanceReport self_concordance_check(const SmoothingKernel& k,
                                         std::span<const double> grid,
                                         double tol = 1e-9);

// h(x) = sum_i lambda_i * phi(x_i), with M_h = max_i lambda_i^(1-nu/2) M_phi.
struct SeparableKernel {
  SmoothingKernel base;
  Vector weights;  // lambda_i > 0
  int dimension = 0;

  static SeparableKernel uniform(SmoothingKernel kernel, int n,
                                 double lambda = 1.0);

  double m_h() const;
  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;
  Vector hessian_diag(const Vector& x) const;
};

}  // namespace scorch
