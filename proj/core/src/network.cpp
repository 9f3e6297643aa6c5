#include "pdvoice/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "pdvoice/rbm.hpp"

namespace pdvoice {

namespace {

void check_layer_sizes(const std::vector<std::size_t>& sizes) {
  if (sizes.size() < 2)
    throw std::invalid_argument("network: need at least an input and an output layer");
  for (std::size_t s : sizes)
    if (s == 0) throw std::invalid_argument("network: zero-sized layer");
  if (sizes.back() != 1)
    throw std::invalid_argument("network: single diagnostic output expected");
}

}  // namespace

Network Network::zeros(std::vector<std::size_t> layer_sizes) {
  check_layer_sizes(layer_sizes);
  Network net;
  net.layer_sizes = std::move(layer_sizes);
  for (std::size_t l = 1; l < net.layer_sizes.size(); ++l) {
    net.weights.emplace_back(net.layer_sizes[l], net.layer_sizes[l - 1]);
    net.biases.emplace_back(net.layer_sizes[l], 0.0);
  }
  return net;
}

Network Network::random_init(std::vector<std::size_t> layer_sizes, std::uint64_t seed) {
  Network net = zeros(std::move(layer_sizes));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    const double scale = std::sqrt(2.0 / static_cast<double>(net.weights[l].cols));
    for (double& w : net.weights[l].data) w = scale * gauss(rng);
  }
  return net;
}

double relu(double z) { return z > 0.0 ? z : 0.0; }

double relu_prime(double z) { return z > 0.0 ? 1.0 : 0.0; }

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

ForwardTrace forward(const Network& net, std::span<const double> x) {
  if (x.size() != net.input_dim())
    throw std::invalid_argument("forward: input dimension " + std::to_string(x.size()) +
                                " does not match the network input " +
                                std::to_string(net.input_dim()));
  const std::size_t depth = net.depth();
  ForwardTrace trace;
  trace.pre.resize(depth + 1);
  trace.act.resize(depth + 1);
  trace.act[0].assign(x.begin(), x.end());

  for (std::size_t l = 1; l <= depth; ++l) {
    const Matrix& w = net.weights[l - 1];
    const std::vector<double>& b = net.biases[l - 1];
    const std::vector<double>& prev = trace.act[l - 1];
    std::vector<double>& z = trace.pre[l];
    std::vector<double>& a = trace.act[l];
    z.resize(w.rows);
    a.resize(w.rows);
    for (std::size_t i = 0; i < w.rows; ++i) {
      double acc = b[i];
      for (std::size_t j = 0; j < w.cols; ++j) acc += w(i, j) * prev[j];
      z[i] = acc;
      a[i] = (l == depth) ? sigmoid(acc) : relu(acc);
    }
  }
  return trace;
}

double mse_loss(std::span<const double> outputs, std::span<const double> targets) {
  if (outputs.empty()) throw std::invalid_argument("mse_loss: empty batch");
  if (outputs.size() != targets.size())
    throw std::invalid_argument("mse_loss: output and target counts differ");
  double acc = 0.0;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    const double d = targets[i] - outputs[i];
    acc += d * d;
  }
  return acc / (2.0 * static_cast<double>(outputs.size()));
}

Gradients backprop(const Network& net, const ForwardTrace& trace, double target) {
  const std::size_t depth = net.depth();
  Gradients grads;
  grads.weights.reserve(depth);
  grads.biases.reserve(depth);
  for (std::size_t l = 0; l < depth; ++l) {
    grads.weights.emplace_back(net.weights[l].rows, net.weights[l].cols);
    grads.biases.emplace_back(net.biases[l].size(), 0.0);
  }

  // Output error: (a - y) * sigmoid'(z), with sigmoid' written via the
  // retained activation.
  std::vector<double> err(1);
  {
    const double a = trace.act[depth][0];
    err[0] = (a - target) * a * (1.0 - a);
  }

  for (std::size_t l = depth; l >= 1; --l) {
    Matrix& dw = grads.weights[l - 1];
    std::vector<double>& db = grads.biases[l - 1];
    const std::vector<double>& prev = trace.act[l - 1];
    for (std::size_t i = 0; i < dw.rows; ++i) {
      db[i] = err[i];
      for (std::size_t j = 0; j < dw.cols; ++j) dw(i, j) = err[i] * prev[j];
    }
    if (l == 1) break;
    const Matrix& w = net.weights[l - 1];
    std::vector<double> prev_err(w.cols, 0.0);
    for (std::size_t j = 0; j < w.cols; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < w.rows; ++i) acc += w(i, j) * err[i];
      prev_err[j] = acc * relu_prime(trace.pre[l - 1][j]);
    }
    err = std::move(prev_err);
  }
  return grads;
}

void mbgd_step(Network& net, std::span<const Sample> batch, double eta) {
  if (batch.empty()) throw std::invalid_argument("mbgd_step: empty batch");
  const std::size_t depth = net.depth();

  Gradients sum;
  for (std::size_t l = 0; l < depth; ++l) {
    sum.weights.emplace_back(net.weights[l].rows, net.weights[l].cols);
    sum.biases.emplace_back(net.biases[l].size(), 0.0);
  }
  for (const Sample& s : batch) {
    const ForwardTrace trace = forward(net, s.features);
    const Gradients g = backprop(net, trace, s.target);
    for (std::size_t l = 0; l < depth; ++l) {
      for (std::size_t i = 0; i < g.weights[l].data.size(); ++i)
        sum.weights[l].data[i] += g.weights[l].data[i];
      for (std::size_t i = 0; i < g.biases[l].size(); ++i)
        sum.biases[l][i] += g.biases[l][i];
    }
  }
  const double m = static_cast<double>(batch.size());
  for (std::size_t l = 0; l < depth; ++l) {
    for (std::size_t i = 0; i < net.weights[l].data.size(); ++i)
      net.weights[l].data[i] -= eta * (sum.weights[l].data[i] / m);
    for (std::size_t i = 0; i < net.biases[l].size(); ++i)
      net.biases[l][i] -= eta * (sum.biases[l][i] / m);
  }
}

namespace {

double dataset_loss(const Network& net, std::span<const Sample> dataset) {
  std::vector<double> outputs(dataset.size());
  std::vector<double> targets(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    outputs[i] = forward(net, dataset[i].features).output();
    targets[i] = dataset[i].target;
  }
  return mse_loss(outputs, targets);
}

}  // namespace

TrainTrace train(Network& net, std::span<const Sample> dataset, const TrainConfig& cfg) {
  if (dataset.empty()) throw std::invalid_argument("train: empty dataset");
  if (cfg.batch_size == 0 || cfg.batch_size > dataset.size())
    throw std::invalid_argument("train: batch size must lie in [1, dataset size]");
  if (!(cfg.learning_rate > 0.0 && cfg.learning_rate <= 1.0))
    throw std::invalid_argument("train: learning rate must lie in (0,1]");
  for (const Sample& s : dataset) {
    if (s.features.size() != net.input_dim())
      throw std::invalid_argument("train: sample dimension does not match the network");
  }

  const std::size_t n = dataset.size();
  const std::size_t m = cfg.batch_size;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(cfg.seed);

  TrainTrace trace;
  std::vector<Sample> batch;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (cfg.shuffle) std::shuffle(order.begin(), order.end(), rng);
    std::size_t updates = 0;
    for (std::size_t start = 0; start < n; start += m) {
      const std::size_t count = std::min(m, n - start);
      batch.clear();
      for (std::size_t i = 0; i < count; ++i) batch.push_back(dataset[order[start + i]]);
      mbgd_step(net, batch, cfg.learning_rate);
      ++updates;
    }
    const double loss = dataset_loss(net, dataset);
    if (!std::isfinite(loss))
      throw std::runtime_error("train: loss diverged to a non-finite value at epoch " +
                               std::to_string(epoch + 1) + " (learning rate " +
                               std::to_string(cfg.learning_rate) + ")");
    trace.epoch_loss.push_back(loss);
    trace.epoch_updates.push_back(updates);
  }
  trace.final_loss =
      trace.epoch_loss.empty() ? dataset_loss(net, dataset) : trace.epoch_loss.back();
  return trace;
}

Prediction predict(const Network& net, std::span<const double> features) {
  const ForwardTrace trace = forward(net, features);
  Prediction p;
  p.score = trace.output();
  p.label = p.score >= 0.5 ? Label::Healthy : Label::Pd;
  return p;
}

Network initialize_network(std::size_t input_dim,
                           std::span<const std::size_t> hidden_layers,
                           std::span<const Sample> dataset, const TrainConfig& cfg) {
  std::vector<std::size_t> sizes;
  sizes.push_back(input_dim);
  sizes.insert(sizes.end(), hidden_layers.begin(), hidden_layers.end());
  sizes.push_back(1);

  Network net = Network::random_init(sizes, cfg.seed);
  if (cfg.pretrain == Pretrain::Rbm) {
    const PretrainedStack stack = pretrain_rbm_stack(dataset, sizes, cfg);
    for (std::size_t l = 0; l < stack.weights.size(); ++l) {
      net.weights[l] = stack.weights[l];
      net.biases[l] = stack.biases[l];
    }
  }
  return net;
}

Sample to_sample(const Voiceprint& vp) {
  if (vp.label == Label::Unknown)
    throw std::invalid_argument("to_sample: unlabeled voiceprint '" + vp.source_id + "'");
  return Sample{vp.values, vp.label == Label::Healthy ? 1.0 : 0.0};
}

}  // namespace pdvoice
