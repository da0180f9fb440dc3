#include "scorch/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace scorch {

namespace {

struct SparseRow {
  double label;
  std::vector<std::pair<int, double>> entries;
};

SparseRow parse_line(const std::string& line, int lineno) {
  SparseRow row;
  std::istringstream ss(line);
  std::string tok;
  if (!(ss >> tok)) throw ParseError("empty record", lineno);
  try {
    size_t pos = 0;
    row.label = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
  } catch (const std::exception&) {
    throw ParseError("malformed label '" + tok + "'", lineno);
  }
  int prev_index = 0;
  while (ss >> tok) {
    auto colon = tok.find(':');
    if (colon == std::string::npos)
      throw ParseError("expected index:value, got '" + tok + "'", lineno);
    int index = 0;
    double value = 0.0;
    try {
      size_t pos = 0;
      index = std::stoi(tok.substr(0, colon), &pos);
      if (pos != colon) throw std::invalid_argument(tok);
      value = std::stod(tok.substr(colon + 1), &pos);
      if (pos != tok.size() - colon - 1) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ParseError("malformed feature '" + tok + "'", lineno);
    }
    if (index == 0) throw ParseError("feature index 0 (indices are 1-based)",
                                     lineno);
    if (index < 0) throw ParseError("negative feature index", lineno);
    if (index <= prev_index)
      throw ParseError("nonascending feature index " + std::to_string(index),
                       lineno);
    prev_index = index;
    row.entries.emplace_back(index, value);
  }
  return row;
}

}  // namespace

Dataset parse_libsvm(std::istream& in, const std::string& name, int n_hint) {
  std::vector<SparseRow> rows;
  std::string line;
  int lineno = 0;
  int max_index = n_hint;
  bool has_zero_label = false, has_two_label = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    SparseRow row = parse_line(line, lineno);
    if (!row.entries.empty())
      max_index = std::max(max_index, row.entries.back().first);
    if (row.label == 0.0) has_zero_label = true;
    if (row.label == 2.0) has_two_label = true;
    rows.push_back(std::move(row));
  }

  Dataset data;
  data.source = name;
  data.A = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), max_index);
  data.y.resize(static_cast<Eigen::Index>(rows.size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    double label = rows[i].label;
    // {0,1} -> {-1,+1}; {1,2} -> {-1,+1} (2 maps to -1)
    if (has_zero_label)
      label = label == 0.0 ? -1.0 : 1.0;
    else if (has_two_label)
      label = label == 2.0 ? -1.0 : 1.0;
    data.y[static_cast<Eigen::Index>(i)] = label;
    for (const auto& [index, value] : rows[i].entries) {
      if (index > max_index)
        throw ParseError("index exceeds declared dimension",
                         static_cast<int>(i + 1));
      data.A(static_cast<Eigen::Index>(i), index - 1) = value;
    }
  }
  if (!data.A.allFinite() || !data.y.allFinite())
    throw ParseError("nonfinite value in dataset", 0);
  return data;
}

Dataset parse_libsvm(const std::string& path, int n_hint) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  return parse_libsvm(in, path, n_hint);
}

void write_libsvm(const Dataset& data, std::ostream& out) {
  char buf[64];
  for (Eigen::Index i = 0; i < data.A.rows(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", data.y[i]);
    out << buf;
    for (Eigen::Index j = 0; j < data.A.cols(); ++j) {
      double v = data.A(i, j);
      if (v == 0.0) continue;
      std::snprintf(buf, sizeof(buf), " %ld:%.17g", static_cast<long>(j + 1),
                    v);
      out << buf;
    }
    out << '\n';
  }
}

void write_libsvm(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open file for write: " + path);
  write_libsvm(data, out);
}

std::pair<Dataset, GroundTruth> gen_logistic(const LogisticGenConfig& config) {
  if (config.m < 1 || config.n < 1)
    throw std::invalid_argument("gen_logistic: m, n >= 1");
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  Dataset data;
  data.seed = config.seed;
  data.source = "gen:logistic";
  data.A.resize(config.m, config.n);
  for (Eigen::Index i = 0; i < data.A.rows(); ++i)
    for (Eigen::Index j = 0; j < data.A.cols(); ++j)
      data.A(i, j) = gauss(rng);

  GroundTruth truth;
  truth.x_star = Vector::Zero(config.n);
  int nnz = static_cast<int>(std::llround(config.sparsity * config.n));
  std::vector<int> idx(config.n);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  for (int t = 0; t < nnz; ++t)
    truth.x_star[idx[t]] = unif(rng) < 0.5 ? -1.0 : 1.0;

  data.y.resize(config.m);
  Vector margin = data.A * truth.x_star;
  for (Eigen::Index i = 0; i < data.y.size(); ++i) {
    double label = margin[i] >= 0.0 ? 1.0 : -1.0;
    if (unif(rng) < config.flip_rate) label = -label;
    data.y[i] = label;
  }
  return {std::move(data), std::move(truth)};
}

GroupSpec make_permuted_groups(int n, int n_groups, std::uint64_t seed) {
  if (n_groups < 1 || n % n_groups != 0)
    throw std::invalid_argument("groups: n must be divisible by n_groups");
  int size = n / n_groups;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(seed ^ 0xabcdef12345ULL);
  std::shuffle(perm.begin(), perm.end(), rng);
  GroupSpec spec;
  spec.groups.resize(n_groups);
  spec.omega = Vector::Constant(n_groups, std::sqrt(static_cast<double>(size)));
  for (int j = 0; j < n_groups; ++j) {
    spec.groups[j].assign(perm.begin() + j * size,
                          perm.begin() + (j + 1) * size);
    std::sort(spec.groups[j].begin(), spec.groups[j].end());
  }
  return spec;
}

std::pair<Dataset, GroundTruth> gen_group_lasso(
    const GroupLassoGenConfig& config) {
  if (config.n_groups < 1 || config.n % config.n_groups != 0)
    throw std::invalid_argument(
        "gen_group_lasso: n must be divisible by n_groups");
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif01(0.0, 1.0);

  Dataset data;
  data.seed = config.seed;
  data.source = "gen:group-lasso";
  data.A.resize(config.m, config.n);
  // AR(1) across columns: corr(A_i, A_j) = rho^|i-j|.
  double rho = config.ar_rho;
  double mix = std::sqrt(1.0 - rho * rho);
  for (Eigen::Index i = 0; i < data.A.rows(); ++i) {
    double prev = gauss(rng);
    data.A(i, 0) = prev;
    for (Eigen::Index j = 1; j < data.A.cols(); ++j) {
      prev = rho * prev + mix * gauss(rng);
      data.A(i, j) = prev;
    }
  }

  GroupSpec groups = make_permuted_groups(config.n, config.n_groups,
                                          config.seed);
  int group_size = config.n / config.n_groups;
  int n_active = std::max(
      1, static_cast<int>(std::llround(config.active_fraction *
                                       config.n_groups)));
  int per_group = std::max(
      1, static_cast<int>(std::ceil(group_size * config.within_fraction)));

  std::vector<int> group_idx(config.n_groups);
  std::iota(group_idx.begin(), group_idx.end(), 0);
  std::shuffle(group_idx.begin(), group_idx.end(), rng);

  GroundTruth truth;
  truth.x_star = Vector::Zero(config.n);
  truth.groups = groups;
  for (int t = 0; t < n_active; ++t) {
    int j = group_idx[t];
    truth.active_groups.push_back(j);
    std::vector<int> members = groups.groups[j];
    std::shuffle(members.begin(), members.end(), rng);
    for (int s = 0; s < per_group; ++s) {
      double xi = 0.5 + 9.5 * unif01(rng);
      double u = 2.0 * unif01(rng) - 1.0;
      truth.x_star[members[s]] = (u >= 0 ? 1.0 : -1.0) * xi;
    }
  }
  std::sort(truth.active_groups.begin(), truth.active_groups.end());

  data.y = data.A * truth.x_star;
  for (Eigen::Index i = 0; i < data.y.size(); ++i)
    data.y[i] += config.noise_sigma * gauss(rng);
  return {std::move(data), std::move(truth)};
}

std::pair<Dataset, GroundTruth> gen_deconvolution(
    const DeconvolutionGenConfig& config) {
  if (config.n < 16) throw std::invalid_argument("gen_deconvolution: n >= 16");
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> amp(-3.0, 3.0);

  const double taps[4] = {1.0 / 6.0, 2.0 / 6.0, 2.0 / 6.0, 1.0 / 6.0};
  Dataset data;
  data.seed = config.seed;
  data.source = "gen:deconv";
  data.A = Matrix::Zero(config.n, config.n);
  for (int i = 0; i < config.n; ++i)
    for (int k = 0; k < 4 && k <= i; ++k) data.A(i, i - k) = taps[k];

  int spikes = config.spikes >= 0
                   ? config.spikes
                   : static_cast<int>(std::ceil(config.n / 64.0));
  std::vector<int> idx(config.n);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);

  GroundTruth truth;
  truth.x_star = Vector::Zero(config.n);
  for (int t = 0; t < spikes; ++t) truth.x_star[idx[t]] = amp(rng);

  data.y = data.A * truth.x_star;
  if (config.noise_sigma > 0.0)
    for (Eigen::Index i = 0; i < data.y.size(); ++i)
      data.y[i] += config.noise_sigma * gauss(rng);
  return {std::move(data), std::move(truth)};
}

}  // namespace scorch
