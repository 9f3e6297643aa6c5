#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pdvoice/matrix.hpp"
#include "pdvoice/types.hpp"
#include "pdvoice/weighting.hpp"

namespace pdvoice {

// Feedforward network with ReLU hidden layers and one sigmoid output.
// weights[l] has shape layer_sizes[l+1] x layer_sizes[l].
struct Network {
  std::vector<std::size_t> layer_sizes;
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;

  std::size_t depth() const { return weights.size(); }
  std::size_t input_dim() const { return layer_sizes.front(); }

  static Network zeros(std::vector<std::size_t> layer_sizes);
  // Scaled random init for ReLU stacks (variance 2/fan-in), zero biases.
  static Network random_init(std::vector<std::size_t> layer_sizes, std::uint64_t seed);
};

struct Sample {
  std::vector<double> features;
  double target = 0.0;  // 1 = healthy, 0 = PD
};

enum class Pretrain { None, Rbm };

struct TrainConfig {
  std::size_t batch_size = 2;
  double learning_rate = 0.1;
  std::size_t epochs = 400;
  std::uint64_t seed = 0;
  bool shuffle = true;
  Pretrain pretrain = Pretrain::None;
  std::size_t rbm_epochs = 20;
  double rbm_learning_rate = 0.01;
  std::size_t rbm_cd_steps = 1;
  std::size_t rbm_batch_size = 2;
};

struct TrainTrace {
  std::vector<double> epoch_loss;          // dataset mean loss after each epoch
  std::vector<std::size_t> epoch_updates;  // parameter updates per epoch
  double final_loss = 0.0;
};

double relu(double z);
double relu_prime(double z);  // 0 at z = 0
double sigmoid(double z);

// All layer pre-activations and activations kept for backprop.
// act[0] is the input; act[L] the sigmoid output. pre[0] is unused.
struct ForwardTrace {
  std::vector<std::vector<double>> pre;
  std::vector<std::vector<double>> act;

  double output() const { return act.back().front(); }
};

ForwardTrace forward(const Network& net, std::span<const double> x);

// Mean squared error of a batch of scalar outputs: (1/2m) sum (y - a)^2.
double mse_loss(std::span<const double> outputs, std::span<const double> targets);

struct Gradients {
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;
};

// Gradients of the per-sample loss ||y - a||^2 / 2 with respect to every
// weight and bias, from the retained forward trace.
Gradients backprop(const Network& net, const ForwardTrace& trace, double target);

// One mini-batch gradient descent update: averages the per-sample gradients
// over the batch and steps by eta.
void mbgd_step(Network& net, std::span<const Sample> batch, double eta);

// Epoch loop: partitions the (optionally shuffled) dataset into batches of
// cfg.batch_size and applies mbgd_step to each. Deterministic for a fixed
// seed. Throws if the loss diverges to a non-finite value.
TrainTrace train(Network& net, std::span<const Sample> dataset, const TrainConfig& cfg);

struct Prediction {
  Label label = Label::Unknown;
  double score = 0.0;  // sigmoid output in (0, 1)
};

// Healthy iff score >= 0.5.
Prediction predict(const Network& net, std::span<const double> features);

// Builds the starting network for training: RBM pre-trained hidden stack
// when cfg.pretrain is Rbm, scaled random init otherwise.
Network initialize_network(std::size_t input_dim,
                           std::span<const std::size_t> hidden_layers,
                           std::span<const Sample> dataset,
                           const TrainConfig& cfg);

Sample to_sample(const Voiceprint& vp);

}  // namespace pdvoice
