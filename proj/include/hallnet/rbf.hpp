#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "hallnet/domain.hpp"

namespace hallnet::rbf {

/// Gaussian RBF network: y = sum_k w_k exp(-|x - c_k|^2 / (2 sigma^2)) + b.
struct RbfModel {
  Eigen::MatrixXd centers;  // K x 5, normalized input space
  double spread = 1.0;
  Eigen::VectorXd weights;  // K
  double bias = 0.0;

  int neuron_count() const { return static_cast<int>(centers.rows()); }
  bool operator==(const RbfModel& other) const;
};

/// Throws ValidationError on bad shapes, non-finite values, sigma <= 0 or
/// coincident centers.
void validate(const RbfModel& model);

enum class CenterMethod { kKMeans, kRandomSubset };

struct RbfTrainConfig {
  int neurons = 20;
  CenterMethod center_method = CenterMethod::kKMeans;
  int kmeans_max_iters = 100;
  double ridge = 1e-8;
  /// Empty selects the max-distance heuristic, otherwise a fixed sigma.
  std::optional<double> fixed_spread;
  std::uint64_t seed = 0;
};

void validate(const RbfTrainConfig& config);

/// Gaussian activations of every unit; throws ValidationError on non-finite x.
Eigen::VectorXd activations(const RbfModel& model, const Features& x);

double predict(const RbfModel& model, const Features& x);

/// Minimum distance for two centers to count as distinct.
inline constexpr double kMinCenterSeparation = 1e-9;

/// k-means (k-means++ seeding, Lloyd to a fixpoint) or a seeded subset of
/// distinct training inputs. Centers are always pairwise distinct.
Eigen::MatrixXd select_centers(const std::vector<Features>& inputs, const RbfTrainConfig& config);

/// d_max / sqrt(2K) over pairwise center distances; 1.0 when K = 1.
double spread_from_centers(const Eigen::MatrixXd& centers);

/// Design matrix with one Gaussian column per center and a trailing ones
/// column for the bias.
Eigen::MatrixXd design_matrix(const Eigen::MatrixXd& centers, double spread,
                              const std::vector<Features>& inputs);

struct LinearSolution {
  Eigen::VectorXd weights;
  double bias = 0.0;
};

/// Minimizes |Phi beta - t|^2 + lambda |w|^2 where beta = (w, bias) and the
/// bias (last column of Phi) is not penalized. Solved by an orthogonal
/// factorization of the ridge-augmented system. At lambda = 0 a system that is
/// not of full rank min(N, K+1) raises NumericalError.
LinearSolution solve_weights(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets,
                             double ridge);

/// select_centers -> spread -> design matrix -> solve_weights.
RbfModel train(const RbfTrainConfig& config, const Batch& train);

}  // namespace hallnet::rbf
