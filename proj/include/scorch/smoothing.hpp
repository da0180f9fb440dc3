#pragma once

#include <functional>

#include "scorch/kernels.hpp"
#include "scorch/types.hpp"

namespace scorch {

// Smooth approximation g_s(x; mu) of a nonsmooth regularizer g, obtained by
// infimal convolution with a separable self-concordant kernel. Carries the
// value / gradient / diagonal-Hessian oracles, the smoothing parameter mu,
// the derived self-concordance constant M_g, and the scale applied to g.
class SmoothedRegularizer {
 public:
  // Floor for hessian_diag entries; keeps the metric positive definite.
  static constexpr double kHessianFloor = 1e-12;

  SmoothedRegularizer() = default;
  SmoothedRegularizer(int n, double mu, double m_g, double weight,
                      std::function<double(const Vector&)> value,
                      std::function<Vector(const Vector&)> gradient,
                      std::function<Vector(const Vector&)> hessian)
      : n_(n),
        mu_(mu),
        m_g_(m_g),
        weight_(weight),
        value_(std::move(value)),
        gradient_(std::move(gradient)),
        hessian_(std::move(hessian)) {}

  int dim() const { return n_; }
  double mu() const { return mu_; }
  double m_g() const { return m_g_; }
  double weight() const { return weight_; }

  double value(const Vector& x) const { return value_ ? value_(x) : 0.0; }

  Vector gradient(const Vector& x) const {
    return gradient_ ? gradient_(x) : Vector::Zero(x.size());
  }

  // Diagonal of the Hessian, floored at kHessianFloor.
  Vector hessian_diag(const Vector& x) const {
    Vector h = hessian_ ? hessian_(x)
                        : Vector::Zero(x.size());
    return h.cwiseMax(kHessianFloor);
  }

 private:
  int n_ = 0;
  double mu_ = 1.0;
  double m_g_ = 0.0;
  double weight_ = 0.0;
  std::function<double(const Vector&)> value_;
  std::function<Vector(const Vector&)> gradient_;
  std::function<Vector(const Vector&)> hessian_;
};

// M for the inf-conv smoother built from an (M_h, nu) kernel at parameter mu.
double smoothing_m_g(double m_h, double nu, double mu, int n);

// Identically-zero smoother (used when the penalty scale is zero).
SmoothedRegularizer zero_smoother(int n, double mu);

// Smoother of beta*||x||_1 with the hyperbolic-p1 kernel:
//   value        beta * sum_i (sqrt(mu^2 + x_i^2) - mu)
//   gradient_i   beta * x_i / sqrt(mu^2 + x_i^2)
//   hessian_ii   beta * mu^2 / (mu^2 + x_i^2)^(3/2)
// Throws std::invalid_argument for mu <= 0 or beta < 0.
SmoothedRegularizer smooth_l1(double mu, int n, double beta);

// Smoother of beta_g * sum_j omega_j ||x_j|| built by applying the scalar
// hyperbolic-p1 smoother to each group norm. hessian_diag is the diagonal of
// the exact blockwise Hessian, floored at kHessianFloor. Coordinates outside
// all groups contribute nothing.
SmoothedRegularizer smooth_l2_groups(double mu, const GroupSpec& groups,
                                     double beta_g, int n);

// Pointwise sum of two smoothers over the same space; M_g is the max of the
// parts (valid for a common nu >= 2).
SmoothedRegularizer combine(const SmoothedRegularizer& a,
                            const SmoothedRegularizer& b);

// Smoother for the full penalty spec (l1, group, sparse-group, or none).
SmoothedRegularizer smoother_for_penalty(const PenaltySpec& penalty, double mu,
                                         int n);

// Closed form of the scalar inf-conv (|.| box h_mu)(t) for the kernels where
// one is known: hyperbolic-p1 and ostrovskii-bach. Throws for other kernels.
double l1_infconv_value(const std::string& kernel_name, double mu, double t);

// Closed form of the inf-conv of the indicator of [lo, +inf) with the
// exponential kernel: mu * exp((lo - x)/mu).
double indicator_lower_infconv_value(double mu, double lo, double x);

// Brute-force estimate of inf_w { g(w) + mu * h((x - w)/mu) } by grid search
// over [box_lo, box_hi]^n followed by local refinement. Test oracle for the
// closed forms; accuracy is roughly (box width / grid_steps^2) per level.
// Requires grid_steps >= 100 and x.size() <= 3.
double infconv_oracle(const std::function<double(const Vector&)>& g,
                      const SeparableKernel& kernel, double mu,
                      const Vector& x, double box_lo, double box_hi,
                      int grid_steps);

}  // namespace scorch
