#include "hallnet/mlp.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hallnet/error.hpp"
#include "hallnet/random.hpp"

namespace hallnet::mlp {
namespace {

using Input = Eigen::Matrix<double, kInputCount, 1>;

Input as_vector(const Features& x) { return Eigen::Map<const Input>(x.data()); }

void require_finite(const Features& x) {
  for (double v : x)
    if (!std::isfinite(v)) throw ValidationError("non-finite model input");
}

}  // namespace

Eigen::VectorXd MlpModel::flatten() const {
  const Eigen::Index h = hidden_bias.size();
  Eigen::VectorXd flat(parameter_count());
  Eigen::Index k = 0;
  for (Eigen::Index r = 0; r < h; ++r)
    for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(kInputCount); ++c)
      flat[k++] = input_weights(r, c);
  flat.segment(k, h) = hidden_bias;
  k += h;
  flat.segment(k, h) = output_weights;
  k += h;
  flat[k] = output_bias;
  return flat;
}

MlpModel MlpModel::unflatten(int hidden_count, const Eigen::VectorXd& flat) {
  MlpModel m = zeros(hidden_count);
  if (flat.size() != m.parameter_count())
    throw ValidationError("parameter vector has wrong length for H=" + std::to_string(hidden_count));
  const Eigen::Index h = hidden_count;
  Eigen::Index k = 0;
  for (Eigen::Index r = 0; r < h; ++r)
    for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(kInputCount); ++c)
      m.input_weights(r, c) = flat[k++];
  m.hidden_bias = flat.segment(k, h);
  k += h;
  m.output_weights = flat.segment(k, h);
  k += h;
  m.output_bias = flat[k];
  return m;
}

MlpModel MlpModel::zeros(int hidden_count) {
  if (hidden_count < 1) throw ValidationError("MLP needs at least one hidden neuron");
  MlpModel m;
  m.input_weights = Eigen::MatrixXd::Zero(hidden_count, kInputCount);
  m.hidden_bias = Eigen::VectorXd::Zero(hidden_count);
  m.output_weights = Eigen::VectorXd::Zero(hidden_count);
  return m;
}

bool MlpModel::operator==(const MlpModel& o) const {
  return input_weights == o.input_weights && hidden_bias == o.hidden_bias &&
         output_weights == o.output_weights && output_bias == o.output_bias;
}

void validate(const MlpModel& m) {
  const Eigen::Index h = m.hidden_bias.size();
  if (h < 1) throw ValidationError("MLP needs at least one hidden neuron");
  if (m.input_weights.rows() != h ||
      m.input_weights.cols() != static_cast<Eigen::Index>(kInputCount) ||
      m.output_weights.size() != h)
    throw ValidationError("inconsistent MLP parameter shapes");
  if (!m.input_weights.allFinite() || !m.hidden_bias.allFinite() ||
      !m.output_weights.allFinite() || !std::isfinite(m.output_bias))
    throw ValidationError("MLP parameters must be finite");
}

void validate(const MlpTrainConfig& c) {
  if (c.hidden_count < 1) throw ValidationError("mlp.hidden must be >= 1");
  if (!(c.learning_rate > 0.0) || !std::isfinite(c.learning_rate))
    throw ValidationError("mlp.learning_rate must be positive");
  if (!(c.momentum >= 0.0 && c.momentum < 1.0))
    throw ValidationError("mlp.momentum must lie in [0, 1)");
  if (c.max_epochs < 1) throw ValidationError("mlp.max_epochs must be >= 1");
  if (c.patience < 1) throw ValidationError("mlp.patience must be >= 1");
  if (!(c.init_scale > 0.0) || !std::isfinite(c.init_scale))
    throw ValidationError("mlp.init_scale must be positive");
}

double forward(const MlpModel& model, const Features& x) {
  require_finite(x);
  const Eigen::VectorXd hidden =
      (model.input_weights * as_vector(x) + model.hidden_bias).array().tanh().matrix();
  return model.output_weights.dot(hidden) + model.output_bias;
}

double batch_mse(const MlpModel& model, const Batch& batch) {
  if (batch.empty()) throw ValidationError("MSE of an empty batch");
  double sum = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const double r = forward(model, batch.inputs[i]) - batch.targets[i];
    sum += r * r;
  }
  return sum / static_cast<double>(batch.size());
}

Eigen::VectorXd gradient(const MlpModel& model, const Batch& batch) {
  if (batch.empty()) throw ValidationError("gradient of an empty batch");
  const Eigen::Index h = model.hidden_bias.size();
  Eigen::MatrixXd g_in = Eigen::MatrixXd::Zero(h, kInputCount);
  Eigen::VectorXd g_hb = Eigen::VectorXd::Zero(h);
  Eigen::VectorXd g_out = Eigen::VectorXd::Zero(h);
  double g_ob = 0.0;

  for (std::size_t i = 0; i < batch.size(); ++i) {
    require_finite(batch.inputs[i]);
    const Input x = as_vector(batch.inputs[i]);
    const Eigen::VectorXd hidden =
        (model.input_weights * x + model.hidden_bias).array().tanh().matrix();
    const double residual = model.output_weights.dot(hidden) + model.output_bias - batch.targets[i];
    // d(r^2)/d(pre-activation) = 2 r w_out (1 - tanh^2)
    const Eigen::VectorXd delta =
        (2.0 * residual) * model.output_weights.cwiseProduct(
                               (1.0 - hidden.array().square()).matrix());
    g_out += (2.0 * residual) * hidden;
    g_ob += 2.0 * residual;
    g_hb += delta;
    g_in += delta * x.transpose();
  }

  const double inv_n = 1.0 / static_cast<double>(batch.size());
  MlpModel grad;
  grad.input_weights = g_in * inv_n;
  grad.hidden_bias = g_hb * inv_n;
  grad.output_weights = g_out * inv_n;
  grad.output_bias = g_ob * inv_n;
  return grad.flatten();
}

MlpModel init(std::uint64_t seed, int hidden_count, double init_scale) {
  if (hidden_count < 1) throw ValidationError("MLP needs at least one hidden neuron");
  MlpModel m = MlpModel::zeros(hidden_count);
  Rng rng(seed);
  const double in_bound = init_scale / std::sqrt(static_cast<double>(kInputCount));
  const double out_bound = init_scale / std::sqrt(static_cast<double>(hidden_count));
  for (Eigen::Index r = 0; r < m.input_weights.rows(); ++r)
    for (Eigen::Index c = 0; c < m.input_weights.cols(); ++c)
      m.input_weights(r, c) = rng.uniform(-in_bound, in_bound);
  for (Eigen::Index r = 0; r < m.output_weights.size(); ++r)
    m.output_weights[r] = rng.uniform(-out_bound, out_bound);
  return m;
}

TrainResult train(const MlpTrainConfig& config, const Batch& train, const Batch& validation) {
  validate(config);
  if (train.empty()) throw ValidationError("MLP training set is empty");
  if (validation.empty()) throw ValidationError("MLP validation set is empty");

  MlpModel current = init(config.seed, config.hidden_count, config.init_scale);
  Eigen::VectorXd params = current.flatten();
  Eigen::VectorXd velocity = Eigen::VectorXd::Zero(params.size());

  TrainResult result{current, {}};
  double best_validation = std::numeric_limits<double>::infinity();
  int since_best = 0;

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const Eigen::VectorXd grad = gradient(current, train);
    velocity = config.momentum * velocity - config.learning_rate * grad;
    params += velocity;
    if (!params.allFinite())
      throw NumericalError("MLP training diverged at epoch " + std::to_string(epoch));
    current = MlpModel::unflatten(config.hidden_count, params);

    const EpochRecord record{batch_mse(current, train), batch_mse(current, validation)};
    if (!std::isfinite(record.train_mse) || !std::isfinite(record.validation_mse))
      throw NumericalError("MLP training diverged at epoch " + std::to_string(epoch));
    result.history.epochs.push_back(record);
    result.history.stopped_epoch = epoch;

    if (record.validation_mse < best_validation) {
      best_validation = record.validation_mse;
      result.history.best_epoch = epoch;
      result.model = current;
      since_best = 0;
    } else if (++since_best >= config.patience) {
      break;
    }
  }
  return result;
}

}  // namespace hallnet::mlp
