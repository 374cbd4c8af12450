#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "hallnet/domain.hpp"

namespace hallnet::mlp {

/// 5 -> H -> 1 perceptron with tanh hidden units and an identity output.
struct MlpModel {
  Eigen::MatrixXd input_weights;  // H x 5
  Eigen::VectorXd hidden_bias;    // H
  Eigen::VectorXd output_weights; // H
  double output_bias = 0.0;

  int hidden_count() const { return static_cast<int>(hidden_bias.size()); }
  /// Total number of trainable scalars, H*5 + H + H + 1.
  Eigen::Index parameter_count() const { return 7 * hidden_bias.size() + 1; }

  /// Flattened parameters: input weights row-major, hidden bias, output
  /// weights, output bias.
  Eigen::VectorXd flatten() const;
  static MlpModel unflatten(int hidden_count, const Eigen::VectorXd& flat);

  /// Zero-initialised network of the given width.
  static MlpModel zeros(int hidden_count);

  bool operator==(const MlpModel& other) const;
};

/// Throws ValidationError on shape mismatch or non-finite parameters.
void validate(const MlpModel& model);

struct MlpTrainConfig {
  int hidden_count = 12;
  double learning_rate = 0.05;
  double momentum = 0.9;
  int max_epochs = 2000;
  int patience = 100;
  std::uint64_t seed = 0;
  double init_scale = 1.0;
};

void validate(const MlpTrainConfig& config);

struct EpochRecord {
  double train_mse = 0.0;
  double validation_mse = 0.0;
  bool operator==(const EpochRecord&) const = default;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;  // epochs[e-1] belongs to epoch e
  int stopped_epoch = 0;
  int best_epoch = 0;
  bool operator==(const TrainHistory&) const = default;
};

struct TrainResult {
  MlpModel model;
  TrainHistory history;
};

/// Throws ValidationError on non-finite input.
double forward(const MlpModel& model, const Features& x);

/// Mean squared error of the model over a normalized batch.
double batch_mse(const MlpModel& model, const Batch& batch);

/// Analytic gradient of the batch MSE, laid out like MlpModel::flatten().
/// Throws ValidationError on an empty batch.
Eigen::VectorXd gradient(const MlpModel& model, const Batch& batch);

/// Input weights ~ U(-s/sqrt(5), s/sqrt(5)), output weights ~ U(-s/sqrt(H),
/// s/sqrt(H)), biases zero.
MlpModel init(std::uint64_t seed, int hidden_count, double init_scale);

/// Full-batch gradient descent with momentum and validation early stopping.
/// Returns the parameters of the best validation epoch. Throws NumericalError
/// naming the epoch if the loss becomes non-finite.
TrainResult train(const MlpTrainConfig& config, const Batch& train, const Batch& validation);

}  // namespace hallnet::mlp
