#include "scorch/prox.hpp"

#include <cmath>
#include <random>

namespace scorch {

namespace {

double soft(double z, double tau) {
  if (z > tau) return z - tau;
  if (z < -tau) return z + tau;
  return 0.0;
}

// Exact scaled group prox under a non-constant diagonal metric:
// minimize kappa*||w|| + (1/2a) sum d_i (w_i - x_i)^2. The stationarity
// system gives w_i = d_i x_i / (d_i + t) with t = a*kappa/||w||, and
// t -> ||t*w(t)|| is increasing, so t solves ||w(t)||*t = a*kappa by
// bisection. w = 0 iff ||D x|| <= a*kappa.
void group_prox_exact(const Vector& x, const Vector& d, double kappa,
                      double alpha, Vector& out) {
  double dx_norm = (d.array() * x.array()).matrix().norm();
  double ak = alpha * kappa;
  if (dx_norm <= ak) {
    out.setZero();
    return;
  }
  double lo = 0.0, hi = dx_norm - ak > 0 ? dx_norm : ak;
  // g(t) = t*||w(t)|| - a*kappa, g(0) < 0, g(hi) > 0 for hi >= dx_norm.
  hi = dx_norm;
  for (int it = 0; it < 200; ++it) {
    double t = 0.5 * (lo + hi);
    double norm2 = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      double wi = d[i] * x[i] / (d[i] + t);
      norm2 += wi * wi;
    }
    if (t * std::sqrt(norm2) > ak)
      hi = t;
    else
      lo = t;
  }
  double t = 0.5 * (lo + hi);
  for (Eigen::Index i = 0; i < x.size(); ++i)
    out[i] = d[i] * x[i] / (d[i] + t);
}

}  // namespace

Vector prox_l1_scaled(const Vector& x, double beta,
                      const DiagonalMetric& metric, double alpha,
                      DHatConvention convention) {
  metric.validate();
  if (beta < 0.0)
    throw std::invalid_argument("prox_l1_scaled: beta must be >= 0");
  if (beta == 0.0) return x;
  Vector w(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double tau = convention == DHatConvention::scaled_inverse
                     ? alpha * beta / metric.diag[i]
                     : alpha * beta * metric.diag[i];
    w[i] = soft(x[i], tau);
  }
  return w;
}

Vector prox_group_l2_scaled(const Vector& x, const PenaltySpec& spec,
                            const DiagonalMetric& metric, double alpha,
                            DHatConvention convention) {
  metric.validate();
  spec.groups.validate(static_cast<int>(x.size()));
  if (spec.beta_g < 0.0)
    throw std::invalid_argument("prox_group_l2_scaled: beta_g must be >= 0");
  Vector w = x;
  if (spec.beta_g == 0.0) return w;

  for (size_t j = 0; j < spec.groups.groups.size(); ++j) {
    const auto& idx = spec.groups.groups[j];
    double kappa = spec.beta_g * spec.groups.omega[static_cast<Eigen::Index>(j)];
    Vector xj(idx.size()), dj(idx.size());
    for (size_t t = 0; t < idx.size(); ++t) {
      xj[static_cast<Eigen::Index>(t)] = x[idx[t]];
      dj[static_cast<Eigen::Index>(t)] = metric.diag[idx[t]];
    }
    Vector wj(idx.size());
    double dmin = dj.minCoeff(), dmax = dj.maxCoeff();
    if (convention == DHatConvention::scaled_inverse && dmax > 10.0 * dmin) {
      group_prox_exact(xj, dj, kappa, alpha, wj);
    } else {
      double dbar = dj.mean();
      double norm = xj.norm();
      double thresh = convention == DHatConvention::scaled_inverse
                          ? alpha * kappa / dbar
                          : alpha * kappa * dbar;
      double factor = norm > 0.0 ? std::max(1.0 - thresh / norm, 0.0) : 0.0;
      wj = factor * xj;
    }
    for (size_t t = 0; t < idx.size(); ++t)
      w[idx[t]] = wj[static_cast<Eigen::Index>(t)];
  }
  return w;
}

Vector prox_sparse_group(const Vector& x, const PenaltySpec& spec,
                         const DiagonalMetric& metric, double alpha,
                         DHatConvention convention) {
  if (spec.kind != PenaltyKind::sparse_group)
    throw std::invalid_argument("prox_sparse_group: spec.kind mismatch");
  Vector w = prox_l1_scaled(x, spec.beta, metric, alpha, convention);
  return prox_group_l2_scaled(w, spec, metric, alpha, convention);
}

Vector prox_penalty(const Vector& x, const PenaltySpec& spec,
                    const DiagonalMetric& metric, double alpha,
                    DHatConvention convention) {
  switch (spec.kind) {
    case PenaltyKind::none:
      return x;
    case PenaltyKind::l1:
      return prox_l1_scaled(x, spec.beta, metric, alpha, convention);
    case PenaltyKind::group_l2:
      return prox_group_l2_scaled(x, spec, metric, alpha, convention);
    case PenaltyKind::sparse_group:
      return prox_sparse_group(x, spec, metric, alpha, convention);
  }
  throw std::logic_error("prox_penalty: unreachable");
}

namespace {

double prox_objective(const Vector& w, const Vector& x,
                      const std::function<double(const Vector&)>& penalty,
                      const Vector& d, double alpha) {
  double quad = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    double r = x[i] - w[i];
    quad += d[i] * r * r;
  }
  return penalty(w) + 0.5 * quad / alpha;
}

// Compass search over +-e_i plus a few random directions per mesh level,
// followed by cyclic golden-section polish along coordinates.
Vector pattern_search(const Vector& start, const Vector& x,
                      const std::function<double(const Vector&)>& penalty,
                      const Vector& d, double alpha, std::mt19937_64& rng) {
  const int n = static_cast<int>(x.size());
  Vector w = start;
  double fw = prox_objective(w, x, penalty, d, alpha);
  double mesh = std::max(1.0, x.cwiseAbs().maxCoeff());
  std::normal_distribution<double> gauss(0.0, 1.0);

  while (mesh > 1e-11) {
    bool improved = false;
    for (int dir = 0; dir < 2 * n + 6; ++dir) {
      Vector step = Vector::Zero(n);
      if (dir < 2 * n) {
        step[dir / 2] = (dir % 2 == 0 ? mesh : -mesh);
      } else {
        for (int i = 0; i < n; ++i) step[i] = gauss(rng);
        double norm = step.norm();
        if (norm == 0.0) continue;
        step *= mesh / norm;
      }
      Vector cand = w + step;
      double fc = prox_objective(cand, x, penalty, d, alpha);
      if (fc < fw) {
        w = cand;
        fw = fc;
        improved = true;
      }
    }
    if (!improved) mesh *= 0.5;
  }

  // Coordinate polish: the restriction to one coordinate is convex.
  for (int sweep = 0; sweep < 4; ++sweep) {
    for (int i = 0; i < n; ++i) {
      double lo = w[i] - 1e-4, hi = w[i] + 1e-4;
      const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
      double a = lo, b = hi;
      double c1 = b - phi * (b - a), c2 = a + phi * (b - a);
      Vector probe = w;
      probe[i] = c1;
      double f1 = prox_objective(probe, x, penalty, d, alpha);
      probe[i] = c2;
      double f2 = prox_objective(probe, x, penalty, d, alpha);
      while (b - a > 1e-13) {
        if (f1 < f2) {
          b = c2;
          c2 = c1;
          f2 = f1;
          c1 = b - phi * (b - a);
          probe[i] = c1;
          f1 = prox_objective(probe, x, penalty, d, alpha);
        } else {
          a = c1;
          c1 = c2;
          f1 = f2;
          c2 = a + phi * (b - a);
          probe[i] = c2;
          f2 = prox_objective(probe, x, penalty, d, alpha);
        }
      }
      double mid = 0.5 * (a + b);
      probe[i] = mid;
      double fm = prox_objective(probe, x, penalty, d, alpha);
      // Exact-zero candidate beats the kink straddle when 0 is optimal.
      probe[i] = 0.0;
      double f0 = prox_objective(probe, x, penalty, d, alpha);
      if (f0 <= fm) {
        mid = 0.0;
        fm = f0;
      }
      if (fm < fw) {
        w[i] = mid;
        fw = fm;
      }
    }
  }
  return w;
}

}  // namespace

Vector prox_oracle(const Vector& x,
                   const std::function<double(const Vector&)>& penalty,
                   const DiagonalMetric& metric, double alpha,
                   std::uint64_t seed) {
  metric.validate();
  if (x.size() > 4)
    throw std::invalid_argument("prox_oracle: dimension must be <= 4");
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<Vector> starts = {x, Vector::Zero(x.size()), 0.5 * x};
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int s = 0; s < 3; ++s) {
    Vector r(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i)
      r[i] = x[i] * (0.5 + 0.5 * unif(rng));
    starts.push_back(r);
  }
  Vector best;
  double fbest = std::numeric_limits<double>::infinity();
  for (const auto& start : starts) {
    Vector w = pattern_search(start, x, penalty, metric.diag, alpha, rng);
    double fw = prox_objective(w, x, penalty, metric.diag, alpha);
    if (fw < fbest) {
      fbest = fw;
      best = w;
    }
  }
  return best;
}

}  // namespace scorch
