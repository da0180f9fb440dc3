#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <vector>

namespace scorch {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Nonoverlapping index groups with per-group weights omega_j.
struct GroupSpec {
  std::vector<std::vector<int>> groups;
  Vector omega;  // one weight per group, > 0

  // Throws if groups overlap, indices fall outside [0, n), or weights are
  // missing/nonpositive.
  void validate(int n) const {
    if (omega.size() != static_cast<Eigen::Index>(groups.size()))
      throw std::invalid_argument("GroupSpec: need one weight per group");
    std::vector<char> seen(n, 0);
    for (const auto& g : groups) {
      if (g.empty()) throw std::invalid_argument("GroupSpec: empty group");
      for (int i : g) {
        if (i < 0 || i >= n)
          throw std::invalid_argument("GroupSpec: index out of range");
        if (seen[i])
          throw std::invalid_argument("GroupSpec: overlapping groups");
        seen[i] = 1;
      }
    }
    for (Eigen::Index j = 0; j < omega.size(); ++j)
      if (!(omega[j] > 0.0))
        throw std::invalid_argument("GroupSpec: weights must be positive");
  }
};

enum class PenaltyKind { none, l1, group_l2, sparse_group };

// g(x) = beta*||x||_1 + beta_g * sum_j omega_j ||x_j||.
struct PenaltySpec {
  PenaltyKind kind = PenaltyKind::none;
  double beta = 0.0;
  double beta_g = 0.0;
  GroupSpec groups;

  static PenaltySpec none_penalty() { return {}; }

  static PenaltySpec l1(double beta) {
    PenaltySpec spec;
    spec.kind = PenaltyKind::l1;
    spec.beta = beta;
    return spec;
  }

  static PenaltySpec group_l2(double beta_g, GroupSpec groups) {
    PenaltySpec spec;
    spec.kind = PenaltyKind::group_l2;
    spec.beta_g = beta_g;
    spec.groups = std::move(groups);
    return spec;
  }

  static PenaltySpec sparse_group(double beta, double beta_g,
                                  GroupSpec groups) {
    PenaltySpec spec;
    spec.kind = PenaltyKind::sparse_group;
    spec.beta = beta;
    spec.beta_g = beta_g;
    spec.groups = std::move(groups);
    return spec;
  }

  bool has_l1() const {
    return (kind == PenaltyKind::l1 || kind == PenaltyKind::sparse_group) &&
           beta > 0.0;
  }
  bool has_groups() const {
    return (kind == PenaltyKind::group_l2 ||
            kind == PenaltyKind::sparse_group) &&
           beta_g > 0.0;
  }

  double value(const Vector& x) const {
    double v = 0.0;
    if (has_l1()) v += beta * x.lpNorm<1>();
    if (has_groups()) {
      for (size_t j = 0; j < groups.groups.size(); ++j) {
        double norm2 = 0.0;
        for (int i : groups.groups[j]) norm2 += x[i] * x[i];
        v += beta_g * groups.omega[static_cast<Eigen::Index>(j)] *
             std::sqrt(norm2);
      }
    }
    return v;
  }
};

inline int count_nonzeros(const Vector& x, double eps = 1e-12) {
  int nnz = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (std::abs(x[i]) > eps) ++nnz;
  return nnz;
}

}  // namespace scorch
