#include "hallnet/rbf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <string>

#include "hallnet/error.hpp"
#include "hallnet/random.hpp"

namespace hallnet::rbf {
namespace {

using Row = Eigen::Matrix<double, 1, kInputCount>;

Row as_row(const Features& x) { return Eigen::Map<const Row>(x.data()); }

double squared_distance(const Eigen::MatrixXd& centers, Eigen::Index k, const Features& x) {
  return (centers.row(k) - as_row(x)).squaredNorm();
}

double min_pairwise_distance(const Eigen::MatrixXd& centers) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index a = 0; a < centers.rows(); ++a)
    for (Eigen::Index b = a + 1; b < centers.rows(); ++b)
      best = std::min(best, (centers.row(a) - centers.row(b)).norm());
  return best;
}

// Distinct input rows in order of first appearance.
std::vector<Features> distinct_inputs(const std::vector<Features>& inputs) {
  std::set<Features> seen;
  std::vector<Features> out;
  for (const auto& x : inputs)
    if (seen.insert(x).second) out.push_back(x);
  return out;
}

Eigen::MatrixXd random_subset(const std::vector<Features>& distinct, int k, Rng& rng) {
  std::vector<std::size_t> order(distinct.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Eigen::MatrixXd centers(k, kInputCount);
  for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
    const std::size_t j = i + rng.below(order.size() - i);
    std::swap(order[i], order[j]);
    centers.row(static_cast<Eigen::Index>(i)) = as_row(distinct[order[i]]);
  }
  return centers;
}

Eigen::MatrixXd kmeans_plus_plus(const std::vector<Features>& points, int k, Rng& rng) {
  const std::size_t n = points.size();
  Eigen::MatrixXd centers(k, kInputCount);
  centers.row(0) = as_row(points[rng.below(n)]);
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  for (Eigen::Index c = 1; c < k; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(centers, c - 1, points[i]));
      total += d2[i];
    }
    // Points already chosen have d2 == 0 and are never drawn again.
    const double target = rng.uniform() * total;
    double acc = 0.0;
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (d2[i] <= 0.0) continue;
      acc += d2[i];
      pick = i;
      if (acc > target) break;
    }
    centers.row(c) = as_row(points[pick]);
  }
  return centers;
}

std::vector<int> assign(const std::vector<Features>& points, const Eigen::MatrixXd& centers) {
  std::vector<int> labels(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < centers.rows(); ++k) {
      const double d = squared_distance(centers, k, points[i]);
      if (d < best) {
        best = d;
        labels[i] = static_cast<int>(k);
      }
    }
  }
  return labels;
}

Eigen::MatrixXd kmeans(const std::vector<Features>& points, int k, int max_iters, Rng& rng) {
  Eigen::MatrixXd centers = kmeans_plus_plus(points, k, rng);
  std::vector<int> labels = assign(points, centers);
  for (int iter = 0; iter < max_iters; ++iter) {
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, kInputCount);
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      sums.row(labels[i]) += as_row(points[i]);
      ++counts[static_cast<std::size_t>(labels[i])];
    }
    for (Eigen::Index c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        centers.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
      } else {
        // Re-seed an empty cluster at the point farthest from its center.
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
          const double d = squared_distance(centers, labels[i], points[i]);
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        centers.row(c) = as_row(points[far]);
        labels[far] = static_cast<int>(c);
      }
    }
    std::vector<int> next = assign(points, centers);
    if (next == labels) break;
    labels = std::move(next);
  }
  return centers;
}

}  // namespace

bool RbfModel::operator==(const RbfModel& o) const {
  return centers == o.centers && spread == o.spread && weights == o.weights && bias == o.bias;
}

void validate(const RbfModel& m) {
  if (m.centers.rows() < 1) throw ValidationError("RBF network needs at least one center");
  if (m.centers.cols() != static_cast<Eigen::Index>(kInputCount) ||
      m.weights.size() != m.centers.rows())
    throw ValidationError("inconsistent RBF parameter shapes");
  if (!m.centers.allFinite() || !m.weights.allFinite() || !std::isfinite(m.bias) ||
      !std::isfinite(m.spread))
    throw ValidationError("RBF parameters must be finite");
  if (!(m.spread > 0.0)) throw ValidationError("RBF spread must be positive");
  if (min_pairwise_distance(m.centers) <= kMinCenterSeparation)
    throw ValidationError("RBF centers must be pairwise distinct");
}

void validate(const RbfTrainConfig& c) {
  if (c.neurons < 1) throw ValidationError("rbf.neurons must be >= 1");
  if (c.kmeans_max_iters < 1) throw ValidationError("rbf.kmeans_max_iters must be >= 1");
  if (!(c.ridge >= 0.0) || !std::isfinite(c.ridge))
    throw ValidationError("rbf.ridge must be finite and >= 0");
  if (c.fixed_spread && (!(*c.fixed_spread > 0.0) || !std::isfinite(*c.fixed_spread)))
    throw ValidationError("rbf fixed spread must be positive");
}

Eigen::VectorXd activations(const RbfModel& model, const Features& x) {
  for (double v : x)
    if (!std::isfinite(v)) throw ValidationError("non-finite model input");
  const double denom = 2.0 * model.spread * model.spread;
  Eigen::VectorXd phi(model.centers.rows());
  for (Eigen::Index k = 0; k < phi.size(); ++k)
    phi[k] = std::exp(-squared_distance(model.centers, k, x) / denom);
  return phi;
}

double predict(const RbfModel& model, const Features& x) {
  return model.weights.dot(activations(model, x)) + model.bias;
}

Eigen::MatrixXd select_centers(const std::vector<Features>& inputs, const RbfTrainConfig& config) {
  validate(config);
  const auto k = static_cast<std::size_t>(config.neurons);
  if (k > inputs.size())
    throw ValidationError("rbf.neurons = " + std::to_string(k) + " exceeds training size " +
                          std::to_string(inputs.size()));
  const auto distinct = distinct_inputs(inputs);
  if (distinct.size() < k)
    throw ValidationError("only " + std::to_string(distinct.size()) +
                          " distinct training inputs for " + std::to_string(k) + " centers");

  Rng rng(config.seed);
  Eigen::MatrixXd centers = config.center_method == CenterMethod::kRandomSubset
                                ? random_subset(distinct, config.neurons, rng)
                                : kmeans(inputs, config.neurons, config.kmeans_max_iters, rng);
  if (min_pairwise_distance(centers) <= kMinCenterSeparation)
    throw NumericalError("k-means produced coincident centers; reduce rbf.neurons");
  return centers;
}

double spread_from_centers(const Eigen::MatrixXd& centers) {
  const Eigen::Index k = centers.rows();
  if (k < 2) return 1.0;
  double d_max = 0.0;
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index b = a + 1; b < k; ++b)
      d_max = std::max(d_max, (centers.row(a) - centers.row(b)).norm());
  return d_max / std::sqrt(2.0 * static_cast<double>(k));
}

Eigen::MatrixXd design_matrix(const Eigen::MatrixXd& centers, double spread,
                              const std::vector<Features>& inputs) {
  const Eigen::Index k = centers.rows();
  Eigen::MatrixXd phi(static_cast<Eigen::Index>(inputs.size()), k + 1);
  const double denom = 2.0 * spread * spread;
  for (Eigen::Index i = 0; i < phi.rows(); ++i) {
    for (Eigen::Index c = 0; c < k; ++c)
      phi(i, c) = std::exp(-squared_distance(centers, c, inputs[static_cast<std::size_t>(i)]) / denom);
    phi(i, k) = 1.0;
  }
  return phi;
}

LinearSolution solve_weights(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets,
                             double ridge) {
  const Eigen::Index n = design.rows();
  const Eigen::Index cols = design.cols();
  if (n < 1 || cols < 2) throw ValidationError("design matrix needs >= 1 row and >= 2 columns");
  if (targets.size() != n) throw ValidationError("target count does not match design rows");
  if (!design.allFinite() || !targets.allFinite())
    throw ValidationError("design matrix and targets must be finite");
  if (!(ridge >= 0.0) || !std::isfinite(ridge)) throw ValidationError("ridge must be >= 0");

  const Eigen::Index k = cols - 1;
  Eigen::VectorXd beta;
  if (ridge > 0.0) {
    Eigen::MatrixXd augmented = Eigen::MatrixXd::Zero(n + k, cols);
    augmented.topRows(n) = design;
    augmented.bottomLeftCorner(k, k).diagonal().setConstant(std::sqrt(ridge));
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + k);
    rhs.head(n) = targets;
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(augmented);
    if (qr.rank() < cols)
      throw NumericalError("ridge-augmented RBF system is singular; increase rbf.ridge");
    beta = qr.solve(rhs);
  } else {
    // Minimum-norm least squares; an N x (K+1) system with N <= K still
    // interpolates when its rows are independent.
    const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(design);
    if (cod.rank() < std::min(n, cols))
      throw NumericalError("rank-deficient RBF system at ridge 0; use a positive rbf.ridge");
    beta = cod.solve(targets);
  }
  if (!beta.allFinite()) throw NumericalError("RBF output solve produced non-finite weights");
  return {beta.head(k), beta[k]};
}

RbfModel train(const RbfTrainConfig& config, const Batch& train) {
  validate(config);
  if (train.empty()) throw ValidationError("RBF training set is empty");
  RbfModel model;
  model.centers = select_centers(train.inputs, config);
  model.spread = config.fixed_spread ? *config.fixed_spread : spread_from_centers(model.centers);
  const Eigen::MatrixXd phi = design_matrix(model.centers, model.spread, train.inputs);
  const Eigen::VectorXd t = Eigen::Map<const Eigen::VectorXd>(
      train.targets.data(), static_cast<Eigen::Index>(train.targets.size()));
  auto solution = solve_weights(phi, t, config.ridge);
  model.weights = std::move(solution.weights);
  model.bias = solution.bias;
  return model;
}

}  // namespace hallnet::rbf
