#include "pdvoice/rbm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace pdvoice {

namespace {

std::vector<double> hidden_pre(const Rbm& rbm, std::span<const double> v) {
  std::vector<double> z(rbm.weights.rows);
  for (std::size_t i = 0; i < rbm.weights.rows; ++i) {
    double acc = rbm.hidden_bias[i];
    for (std::size_t j = 0; j < rbm.weights.cols; ++j) acc += rbm.weights(i, j) * v[j];
    z[i] = acc;
  }
  return z;
}

std::vector<double> visible_from_hidden(const Rbm& rbm, std::span<const double> h) {
  std::vector<double> v(rbm.weights.cols);
  for (std::size_t j = 0; j < rbm.weights.cols; ++j) {
    double acc = rbm.visible_bias[j];
    for (std::size_t i = 0; i < rbm.weights.rows; ++i) acc += rbm.weights(i, j) * h[i];
    // Gaussian visibles use the conditional mean; Bernoulli visibles the
    // activation probability.
    v[j] = rbm.gaussian_visible ? acc : sigmoid(acc);
  }
  return v;
}

}  // namespace

std::vector<double> rbm_hidden_probabilities(const Rbm& rbm, std::span<const double> visible) {
  std::vector<double> h = hidden_pre(rbm, visible);
  for (double& z : h) z = sigmoid(z);
  return h;
}

std::vector<double> rbm_reconstruct(const Rbm& rbm, std::span<const double> visible) {
  return visible_from_hidden(rbm, rbm_hidden_probabilities(rbm, visible));
}

Rbm train_rbm(const std::vector<std::vector<double>>& data, std::size_t hidden_units,
              bool gaussian_visible, const RbmTrainConfig& cfg, std::mt19937_64& rng,
              std::vector<double>* reconstruction_errors) {
  if (data.empty()) throw std::invalid_argument("train_rbm: empty dataset");
  if (hidden_units == 0) throw std::invalid_argument("train_rbm: no hidden units");
  const std::size_t visible_units = data.front().size();
  for (const auto& v : data)
    if (v.size() != visible_units)
      throw std::invalid_argument("train_rbm: inconsistent visible dimensions");

  Rbm rbm;
  rbm.gaussian_visible = gaussian_visible;
  rbm.weights = Matrix(hidden_units, visible_units);
  rbm.hidden_bias.assign(hidden_units, 0.0);
  rbm.visible_bias.assign(visible_units, 0.0);
  std::normal_distribution<double> gauss(0.0, 0.01);
  for (double& w : rbm.weights.data) w = gauss(rng);

  const std::size_t n = data.size();
  const std::size_t m = std::max<std::size_t>(1, std::min(cfg.batch_size, n));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Matrix dw(hidden_units, visible_units);
  std::vector<double> dh(hidden_units), dv(visible_units);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_err = 0.0;
    double first_batch_err = -1.0;
    double last_batch_err = 0.0;
    std::size_t batches = 0;

    for (std::size_t start = 0; start < n; start += m) {
      const std::size_t count = std::min(m, n - start);
      std::fill(dw.data.begin(), dw.data.end(), 0.0);
      std::fill(dh.begin(), dh.end(), 0.0);
      std::fill(dv.begin(), dv.end(), 0.0);
      double batch_err = 0.0;

      for (std::size_t s = 0; s < count; ++s) {
        const std::vector<double>& v0 = data[order[start + s]];
        std::vector<double> h_prob = rbm_hidden_probabilities(rbm, v0);
        const std::vector<double> h0_prob = h_prob;

        std::vector<double> h_state(hidden_units);
        for (std::size_t i = 0; i < hidden_units; ++i)
          h_state[i] = unit(rng) < h_prob[i] ? 1.0 : 0.0;

        std::vector<double> vk;
        for (std::size_t step = 0; step < std::max<std::size_t>(1, cfg.cd_steps); ++step) {
          vk = visible_from_hidden(rbm, h_state);
          if (step == 0) {
            double err = 0.0;
            for (std::size_t j = 0; j < visible_units; ++j) {
              const double d = v0[j] - vk[j];
              err += d * d;
            }
            batch_err += err;
          }
          h_prob = rbm_hidden_probabilities(rbm, vk);
          if (step + 1 < std::max<std::size_t>(1, cfg.cd_steps)) {
            for (std::size_t i = 0; i < hidden_units; ++i)
              h_state[i] = unit(rng) < h_prob[i] ? 1.0 : 0.0;
          }
        }

        for (std::size_t i = 0; i < hidden_units; ++i) {
          for (std::size_t j = 0; j < visible_units; ++j)
            dw(i, j) += h0_prob[i] * v0[j] - h_prob[i] * vk[j];
          dh[i] += h0_prob[i] - h_prob[i];
        }
        for (std::size_t j = 0; j < visible_units; ++j) dv[j] += v0[j] - vk[j];
      }

      const double scale = cfg.learning_rate / static_cast<double>(count);
      for (std::size_t i = 0; i < rbm.weights.data.size(); ++i)
        rbm.weights.data[i] += scale * dw.data[i];
      for (std::size_t i = 0; i < hidden_units; ++i) rbm.hidden_bias[i] += scale * dh[i];
      for (std::size_t j = 0; j < visible_units; ++j) rbm.visible_bias[j] += scale * dv[j];

      batch_err /= static_cast<double>(count);
      if (first_batch_err < 0.0) first_batch_err = batch_err;
      last_batch_err = batch_err;
      epoch_err += batch_err;
      ++batches;
    }

    if (batches > 1 && first_batch_err > 1e-12 && last_batch_err > 10.0 * first_batch_err)
      throw std::runtime_error(
          "train_rbm: reconstruction error grew more than tenfold within epoch " +
          std::to_string(epoch + 1) + "; lower the learning rate");
    if (reconstruction_errors)
      reconstruction_errors->push_back(epoch_err / static_cast<double>(batches));
  }
  return rbm;
}

PretrainedStack pretrain_rbm_stack(std::span<const Sample> dataset,
                                   std::span<const std::size_t> layer_sizes,
                                   const TrainConfig& cfg) {
  if (dataset.empty()) throw std::invalid_argument("pretrain_rbm_stack: empty dataset");
  if (layer_sizes.size() < 2)
    throw std::invalid_argument("pretrain_rbm_stack: need at least two layers");
  const std::size_t input_dim = layer_sizes[0];
  for (const Sample& s : dataset)
    if (s.features.size() != input_dim)
      throw std::invalid_argument("pretrain_rbm_stack: sample dimension mismatch");

  // Standardize the real-valued inputs for the Gauss-Bernoulli layer.
  std::vector<double> mean(input_dim, 0.0), sd(input_dim, 0.0);
  for (const Sample& s : dataset)
    for (std::size_t j = 0; j < input_dim; ++j) mean[j] += s.features[j];
  for (double& v : mean) v /= static_cast<double>(dataset.size());
  for (const Sample& s : dataset)
    for (std::size_t j = 0; j < input_dim; ++j) {
      const double d = s.features[j] - mean[j];
      sd[j] += d * d;
    }
  for (double& v : sd) {
    v = std::sqrt(v / static_cast<double>(dataset.size()));
    if (v == 0.0) v = 1.0;
  }

  std::vector<std::vector<double>> layer_input(dataset.size(),
                                               std::vector<double>(input_dim));
  for (std::size_t i = 0; i < dataset.size(); ++i)
    for (std::size_t j = 0; j < input_dim; ++j)
      layer_input[i][j] = (dataset[i].features[j] - mean[j]) / sd[j];

  RbmTrainConfig rbm_cfg;
  rbm_cfg.epochs = cfg.rbm_epochs;
  rbm_cfg.learning_rate = cfg.rbm_learning_rate;
  rbm_cfg.cd_steps = cfg.rbm_cd_steps;
  rbm_cfg.batch_size = cfg.rbm_batch_size;
  std::mt19937_64 rng(mix_seed(cfg.seed, 0x52424dULL));

  PretrainedStack stack;
  const std::size_t hidden_layers = layer_sizes.size() - 2;  // output layer excluded
  for (std::size_t l = 0; l < hidden_layers; ++l) {
    const Rbm rbm = train_rbm(layer_input, layer_sizes[l + 1], l == 0, rbm_cfg, rng);

    Matrix w = rbm.weights;
    std::vector<double> b = rbm.hidden_bias;
    if (l == 0) {
      // Fold the input standardization back into the first layer so the
      // network consumes raw features.
      for (std::size_t i = 0; i < w.rows; ++i) {
        double shift = 0.0;
        for (std::size_t j = 0; j < w.cols; ++j) {
          shift += w(i, j) * mean[j] / sd[j];
          w(i, j) /= sd[j];
        }
        b[i] -= shift;
      }
    }
    stack.weights.push_back(std::move(w));
    stack.biases.push_back(std::move(b));

    std::vector<std::vector<double>> next(layer_input.size());
    for (std::size_t i = 0; i < layer_input.size(); ++i)
      next[i] = rbm_hidden_probabilities(rbm, layer_input[i]);
    layer_input = std::move(next);
  }
  return stack;
}

}  // namespace pdvoice
