#include "scorch/kernels.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace scorch {

namespace {

SmoothingKernel make_hyperbolic_p1() {
  SmoothingKernel k;
  k.name = "hyperbolic-p1";
  k.m_phi = 2.0;
  k.nu = 2.6;
  k.value = [](double t) { return std::sqrt(1.0 + t * t) - 1.0; };
  k.d1 = [](double t) { return t / std::sqrt(1.0 + t * t); };
  k.d2 = [](double t) { return std::pow(1.0 + t * t, -1.5); };
  k.d3 = [](double t) { return -3.0 * t * std::pow(1.0 + t * t, -2.5); };
  return k;
}

// phi(t) = (1/2)[sqrt(1+4t^2) - 1 + log((sqrt(1+4t^2)-1)/(2t^2))]
// simplifies, with s = sqrt(1+4t^2), to (1/2)[s - 1 + log 2 - log(1+s)].
SmoothingKernel make_ostrovskii_bach() {
  SmoothingKernel k;
  k.name = "ostrovskii-bach";
  k.m_phi = 2.0 * std::sqrt(2.0);
  k.nu = 3.0;
  k.value = [](double t) {
    double s = std::sqrt(1.0 + 4.0 * t * t);
    return 0.5 * (s - 1.0 + std::log(2.0) - std::log1p(s));
  };
  k.d1 = [](double t) {
    return 2.0 * t / (1.0 + std::sqrt(1.0 + 4.0 * t * t));
  };
  k.d2 = [](double t) {
    double s = std::sqrt(1.0 + 4.0 * t * t);
    return 2.0 / (s * (1.0 + s));
  };
  k.d3 = [](double t) {
    double s = std::sqrt(1.0 + 4.0 * t * t);
    double denom = s * s * s * (1.0 + s) * (1.0 + s);
    return -8.0 * t * (1.0 + 2.0 * s) / denom;
  };
  return k;
}

SmoothingKernel make_energy() {
  SmoothingKernel k;
  k.name = "energy";
  k.m_phi = 0.0;
  k.nu = 3.0;
  k.value = [](double t) { return 0.5 * t * t; };
  k.d1 = [](double t) { return t; };
  k.d2 = [](double) { return 1.0; };
  k.d3 = [](double) { return 0.0; };
  return k;
}

SmoothingKernel make_exponential() {
  SmoothingKernel k;
  k.name = "exponential";
  k.m_phi = 1.0;
  k.nu = 2.0;
  k.value = [](double t) { return std::exp(-t); };
  k.d1 = [](double t) { return -std::exp(-t); };
  k.d2 = [](double t) { return std::exp(-t); };
  k.d3 = [](double t) { return -std::exp(-t); };
  return k;
}

SmoothingKernel make_logistic() {
  SmoothingKernel k;
  k.name = "logistic";
  k.m_phi = 1.0;
  k.nu = 2.0;
  k.value = [](double t) {
    // log(1+e^t), overflow-safe
    return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
  };
  k.d1 = [](double t) { return 1.0 / (1.0 + std::exp(-t)); };
  k.d2 = [](double t) {
    double s = 1.0 / (1.0 + std::exp(-t));
    return s * (1.0 - s);
  };
  k.d3 = [](double t) {
    double s = 1.0 / (1.0 + std::exp(-t));
    return s * (1.0 - s) * (1.0 - 2.0 * s);
  };
  return k;
}

SmoothingKernel make_boltzmann_shannon() {
  SmoothingKernel k;
  k.name = "boltzmann-shannon";
  k.domain_lo = 0.0;
  k.m_phi = 1.0;
  k.nu = 4.0;
  k.value = [](double t) { return t * std::log(t) - t; };
  k.d1 = [](double t) { return std::log(t); };
  k.d2 = [](double t) { return 1.0 / t; };
  k.d3 = [](double t) { return -1.0 / (t * t); };
  return k;
}

SmoothingKernel make_burg() {
  SmoothingKernel k;
  k.name = "burg";
  k.domain_lo = 0.0;
  k.m_phi = 8.0;
  k.nu = 3.0;
  k.value = [](double t) { return -0.5 * std::log(t); };
  k.d1 = [](double t) { return -0.5 / t; };
  k.d2 = [](double t) { return 0.5 / (t * t); };
  k.d3 = [](double t) { return -1.0 / (t * t * t); };
  return k;
}

SmoothingKernel make_hellinger() {
  SmoothingKernel k;
  k.name = "hellinger";
  k.domain_lo = -1.0;
  k.domain_hi = 1.0;
  k.m_phi = 2.25;
  k.nu = 4.0;
  k.value = [](double t) { return -std::sqrt(1.0 - t * t); };
  k.d1 = [](double t) { return t / std::sqrt(1.0 - t * t); };
  k.d2 = [](double t) { return std::pow(1.0 - t * t, -1.5); };
  k.d3 = [](double t) { return 3.0 * t * std::pow(1.0 - t * t, -2.5); };
  return k;
}

SmoothingKernel make_fermi_dirac() {
  SmoothingKernel k;
  k.name = "fermi-dirac";
  k.domain_lo = 0.0;
  k.domain_hi = 1.0;
  k.m_phi = 1.0;
  k.nu = 4.0;
  k.value = [](double t) {
    return t * std::log(t) + (1.0 - t) * std::log(1.0 - t);
  };
  k.d1 = [](double t) { return std::log(t) - std::log(1.0 - t); };
  k.d2 = [](double t) { return 1.0 / (t * (1.0 - t)); };
  k.d3 = [](double t) {
    double a = 1.0 - t;
    return -1.0 / (t * t) + 1.0 / (a * a);
  };
  return k;
}

const std::map<std::string, SmoothingKernel>& catalog() {
  static const std::map<std::string, SmoothingKernel> table = [] {
    std::map<std::string, SmoothingKernel> m;
    for (auto k : {make_hyperbolic_p1(), make_ostrovskii_bach(), make_energy(),
                   make_exponential(), make_logistic(),
                   make_boltzmann_shannon(), make_burg(), make_hellinger(),
                   make_fermi_dirac()})
      m.emplace(k.name, std::move(k));
    return m;
  }();
  return table;
}

}  // namespace

const SmoothingKernel& catalog_kernel(const std::string& name) {
  const auto& table = catalog();
  auto it = table.find(name);
  if (it == table.end())
    throw std::out_of_range("unknown smoothing kernel: " + name);
  return it->second;
}

std::vector<std::string> catalog_kernel_names() {
  std::vector<std::string> names;
  for (const auto& [name, _] : catalog()) names.push_back(name);
  return names;
}

ConcordanceReport self_concordance_check(const SmoothingKernel& k,
                                         std::span<const double> grid,
                                         double tol) {
  ConcordanceReport report;
  report.ok = true;
  for (double t : grid) {
    if (!k.in_interior(t))
      throw std::domain_error("self_concordance_check: grid point " +
                              std::to_string(t) + " outside domain of " +
                              k.name);
    double curvature = k.d2(t);
    if (!(curvature > 0.0)) {
      report.ok = false;
      report.max_ratio = std::numeric_limits<double>::infinity();
      report.arg_max = t;
      return report;
    }
    double third = std::abs(k.d3(t));
    double bound = std::pow(curvature, 0.5 * k.nu);
    double ratio = third == 0.0 ? 0.0 : third / bound;
    if (ratio > report.max_ratio) {
      report.max_ratio = ratio;
      report.arg_max = t;
    }
    if (third > (1.0 + tol) * k.m_phi * bound) report.ok = false;
  }
  return report;
}

SeparableKernel SeparableKernel::uniform(SmoothingKernel kernel, int n,
                                         double lambda) {
  if (n < 1) throw std::invalid_argument("SeparableKernel: dimension >= 1");
  if (!(lambda > 0.0))
    throw std::invalid_argument("SeparableKernel: weights must be positive");
  SeparableKernel s;
  s.base = std::move(kernel);
  s.weights = Vector::Constant(n, lambda);
  s.dimension = n;
  return s;
}

double SeparableKernel::m_h() const {
  double m = 0.0;
  for (Eigen::Index i = 0; i < weights.size(); ++i)
    m = std::max(m, std::pow(weights[i], 1.0 - 0.5 * base.nu) * base.m_phi);
  return m;
}

double SeparableKernel::value(const Vector& x) const {
  double v = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    v += weights[i] * base.value(x[i]);
  return v;
}

Vector SeparableKernel::gradient(const Vector& x) const {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    g[i] = weights[i] * base.d1(x[i]);
  return g;
}

Vector SeparableKernel::hessian_diag(const Vector& x) const {
  Vector h(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    h[i] = weights[i] * base.d2(x[i]);
  return h;
}

}  // namespace scorch
