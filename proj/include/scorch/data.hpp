#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "scorch/types.hpp"

namespace scorch {

struct Dataset {
  Matrix A;
  Vector y;
  std::string source;
  std::uint64_t seed = 0;

  int samples() const { return static_cast<int>(A.rows()); }
  int dim() const { return static_cast<int>(A.cols()); }
  double density() const {
    if (A.size() == 0) return 0.0;
    return static_cast<double>((A.array() != 0.0).count()) /
           static_cast<double>(A.size());
  }
};

struct GroundTruth {
  Vector x_star;
  std::vector<int> active_groups;
  std::optional<GroupSpec> groups;
  int nnz() const { return count_nonzeros(x_star, 0.0); }
};

// Raised on malformed LIBSVM input; message carries "line N".
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line)
      : std::runtime_error(message + " (line " + std::to_string(line) + ")"),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// LIBSVM sparse text format: "<label> <index>:<value> ...", 1-based strictly
// ascending indices. Labels {0,1} and {1,2} are mapped to {-1,+1}. The
// dimension is inferred from the largest index unless n_hint is given.
Dataset parse_libsvm(const std::string& path, int n_hint = 0);
Dataset parse_libsvm(std::istream& in, const std::string& name,
                     int n_hint = 0);

void write_libsvm(const Dataset& data, const std::string& path);
void write_libsvm(const Dataset& data, std::ostream& out);

struct LogisticGenConfig {
  int m = 200;
  int n = 50;
  std::uint64_t seed = 0;
  double sparsity = 0.1;    // fraction of nonzero entries in x*
  double flip_rate = 0.05;  // label noise
};

// Standard-normal design, sparse Rademacher x*, labels sign(<a_i, x*>) with
// seeded flips.
std::pair<Dataset, GroundTruth> gen_logistic(const LogisticGenConfig& config);

struct GroupLassoGenConfig {
  int m = 500;
  int n = 2000;
  int n_groups = 100;
  std::uint64_t seed = 0;
  double active_fraction = 0.1;  // fraction of groups that carry signal
  double within_fraction = 0.1;  // ceil(group_size * this) nonzeros per group
  double noise_sigma = 0.01;
  double ar_rho = 0.5;  // lag-1 column correlation
};

// AR(1)-correlated Gaussian design, y = A x* + noise, x* with
// sign(U)*xi entries, xi ~ U[0.5, 10], on seeded active groups.
// Requires n % n_groups == 0.
std::pair<Dataset, GroundTruth> gen_group_lasso(
    const GroupLassoGenConfig& config);

struct DeconvolutionGenConfig {
  int n = 1024;
  std::uint64_t seed = 0;
  int spikes = -1;  // default ceil(n/64)
  double noise_sigma = 0.01;
};

// A is the lower-banded Toeplitz operator of the 4-tap FIR filter
// b = [1,2,2,1]/6; x* has seeded spikes with amplitudes in [-3,3].
std::pair<Dataset, GroundTruth> gen_deconvolution(
    const DeconvolutionGenConfig& config);

// Contiguous equal-size groups over a seeded permutation of {0..n-1},
// omega_j = sqrt(group size).
GroupSpec make_permuted_groups(int n, int n_groups, std::uint64_t seed);

}  // namespace scorch
