#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "pdvoice/matrix.hpp"
#include "pdvoice/network.hpp"

namespace pdvoice {

// One restricted Boltzmann machine: binary hidden units over either
// Gaussian (real-valued, unit variance) or Bernoulli visible units.
struct Rbm {
  Matrix weights;  // hidden x visible
  std::vector<double> hidden_bias;
  std::vector<double> visible_bias;
  bool gaussian_visible = false;
};

struct RbmTrainConfig {
  std::size_t epochs = 20;
  double learning_rate = 0.01;
  std::size_t cd_steps = 1;
  std::size_t batch_size = 2;
};

// Trains the RBM with k-step contrastive divergence. Per-epoch mean
// reconstruction errors are appended to *reconstruction_errors if given.
// Throws if the reconstruction error grows tenfold within one epoch.
Rbm train_rbm(const std::vector<std::vector<double>>& data, std::size_t hidden_units,
              bool gaussian_visible, const RbmTrainConfig& cfg, std::mt19937_64& rng,
              std::vector<double>* reconstruction_errors = nullptr);

// Mean-field hidden activations sigmoid(W v + c) for one visible vector.
std::vector<double> rbm_hidden_probabilities(const Rbm& rbm, std::span<const double> visible);

// One reconstruction pass v -> h -> v' (mean field).
std::vector<double> rbm_reconstruct(const Rbm& rbm, std::span<const double> visible);

// Weight and bias initializations for every hidden layer of a network,
// layer_sizes = [N_0, ..., N_L]. Unsupervised: a Gauss-Bernoulli RBM is
// trained on the standardized inputs (standardization folded back into the
// returned first-layer parameters), then Bernoulli-Bernoulli RBMs on the
// successive hidden activations. Labels are never read.
struct PretrainedStack {
  std::vector<Matrix> weights;               // for layers 1..L-1
  std::vector<std::vector<double>> biases;
};

PretrainedStack pretrain_rbm_stack(std::span<const Sample> dataset,
                                   std::span<const std::size_t> layer_sizes,
                                   const TrainConfig& cfg);

}  // namespace pdvoice
