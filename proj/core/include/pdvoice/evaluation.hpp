#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pdvoice/network.hpp"
#include "pdvoice/types.hpp"
#include "pdvoice/weighting.hpp"

namespace pdvoice {

// Binary confusion counts with positive = healthy.
struct ConfusionCounts {
  std::size_t tp = 0;  // healthy classified healthy
  std::size_t tn = 0;  // PD classified PD
  std::size_t fp = 0;  // PD classified healthy
  std::size_t fn = 0;  // healthy classified PD

  std::size_t total() const { return tp + tn + fp + fn; }
};

struct MetricsReport {
  double accuracy = 0.0;
  double sensitivity = 0.0;
  double specificity = 0.0;
  double mcc = 0.0;
  double pe = 0.0;
  // Degenerate denominators are reported as 0 and flagged here.
  bool degenerate_sensitivity = false;
  bool degenerate_specificity = false;
  bool degenerate_mcc = false;
  bool degenerate_pe = false;
  ConfusionCounts counts;
  std::vector<std::size_t> coefficients_used;  // 1-based positions; empty = all

  struct Fold {
    ConfusionCounts counts;
    double accuracy = 0.0;
    bool single_class_training = false;
  };
  std::vector<Fold> folds;
  double mean_fold_accuracy = 0.0;

  bool any_degenerate() const {
    return degenerate_sensitivity || degenerate_specificity || degenerate_mcc ||
           degenerate_pe;
  }
};

// Partition of n samples into k folds: assignments[i] is the fold of
// sample i. Fold sizes differ by at most one.
struct FoldPlan {
  std::size_t k = 0;
  std::vector<std::size_t> assignments;
  std::uint64_t seed = 0;
};

// Deterministic for a fixed seed; k = n yields leave-one-out. When
// stratify_labels is non-empty, each class is dealt round-robin so per-fold
// class counts differ from the global ratio by at most one sample.
FoldPlan make_folds(std::size_t n, std::size_t k, std::uint64_t seed,
                    std::span<const Label> stratify_labels = {});

ConfusionCounts confusion(std::span<const Label> truth,
                          std::span<const Label> predicted);

// Accuracy, sensitivity, specificity, MCC and probability excess from the
// confusion counts.
MetricsReport metrics(const ConfusionCounts& c);

// Trains one network per fold on the remaining folds and predicts the held
// out one; all held-out predictions are pooled into a single confusion
// matrix (per-fold metrics are retained as well). feature_subset holds
// 1-based voiceprint positions; empty means all.
MetricsReport run_cross_validation(std::span<const Voiceprint> dataset,
                                   std::span<const std::size_t> hidden_layers,
                                   const TrainConfig& cfg, const FoldPlan& plan,
                                   std::span<const std::size_t> feature_subset = {});

// Trains on the full training set and predicts every test sample.
MetricsReport run_holdout_test(std::span<const Voiceprint> train_set,
                               std::span<const std::size_t> hidden_layers,
                               const TrainConfig& cfg,
                               std::span<const Voiceprint> test_set,
                               std::span<const std::size_t> feature_subset = {});

// Predictions of an already trained network over a test set.
MetricsReport evaluate_network(const Network& net, std::span<const Voiceprint> test_set,
                               std::span<const std::size_t> feature_subset = {});

struct SweepEntry {
  std::vector<std::size_t> subset;
  MetricsReport report;
};

// Cross-validates every candidate subset and ranks by pooled accuracy;
// ties broken by higher MCC, then smaller subset, then lexicographic
// indices.
std::vector<SweepEntry> coefficient_sweep(
    std::span<const Voiceprint> dataset,
    std::span<const std::vector<std::size_t>> candidate_subsets,
    std::span<const std::size_t> hidden_layers, const TrainConfig& cfg,
    const FoldPlan& plan);

}  // namespace pdvoice
