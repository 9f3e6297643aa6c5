#include "pdvoice/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace pdvoice {

FoldPlan make_folds(std::size_t n, std::size_t k, std::uint64_t seed,
                    std::span<const Label> stratify_labels) {
  if (k < 2) throw std::invalid_argument("make_folds: need at least 2 folds");
  if (k > n) throw std::invalid_argument("make_folds: more folds than samples");
  if (!stratify_labels.empty() && stratify_labels.size() != n)
    throw std::invalid_argument("make_folds: label count does not match sample count");

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.assignments.assign(n, 0);
  std::mt19937_64 rng(seed);

  // Group indices by class (one group when unstratified), shuffle each
  // group, then deal every sample round-robin with a fold counter that
  // carries across groups: fold sizes differ by at most one and per-fold
  // class counts stay within one sample of the global ratio.
  std::map<int, std::vector<std::size_t>> groups;
  if (stratify_labels.empty()) {
    auto& g = groups[0];
    g.resize(n);
    std::iota(g.begin(), g.end(), 0);
  } else {
    for (std::size_t i = 0; i < n; ++i)
      groups[static_cast<int>(stratify_labels[i])].push_back(i);
  }

  std::size_t fold = 0;
  for (auto& [label, indices] : groups) {
    std::shuffle(indices.begin(), indices.end(), rng);
    for (std::size_t idx : indices) {
      plan.assignments[idx] = fold;
      fold = (fold + 1) % k;
    }
  }
  return plan;
}

ConfusionCounts confusion(std::span<const Label> truth, std::span<const Label> predicted) {
  if (truth.size() != predicted.size())
    throw std::invalid_argument("confusion: truth and prediction counts differ");
  ConfusionCounts c;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool actual_healthy = truth[i] == Label::Healthy;
    const bool predicted_healthy = predicted[i] == Label::Healthy;
    if (actual_healthy && predicted_healthy) ++c.tp;
    else if (actual_healthy && !predicted_healthy) ++c.fn;
    else if (!actual_healthy && predicted_healthy) ++c.fp;
    else ++c.tn;
  }
  return c;
}

MetricsReport metrics(const ConfusionCounts& c) {
  if (c.total() == 0) throw std::invalid_argument("metrics: empty confusion counts");
  MetricsReport r;
  r.counts = c;
  const double tp = static_cast<double>(c.tp);
  const double tn = static_cast<double>(c.tn);
  const double fp = static_cast<double>(c.fp);
  const double fn = static_cast<double>(c.fn);

  r.accuracy = (tp + tn) / static_cast<double>(c.total());

  if (tp + fn > 0.0) r.sensitivity = tp / (tp + fn);
  else r.degenerate_sensitivity = true;

  if (tn + fp > 0.0) r.specificity = tn / (tn + fp);
  else r.degenerate_specificity = true;

  const double cross = tp * tn - fn * fp;
  const double mcc_denom =
      std::sqrt((fn + tp) * (fp + tn) * (fp + tp) * (fn + tn));
  if (mcc_denom > 0.0) r.mcc = cross / mcc_denom;
  else r.degenerate_mcc = true;

  const double pe_denom = (fn + tp) * (fp + tn);
  if (pe_denom > 0.0) r.pe = cross / pe_denom;
  else r.degenerate_pe = true;

  return r;
}

namespace {

std::vector<double> select_features(const Voiceprint& vp,
                                    std::span<const std::size_t> subset) {
  if (subset.empty()) return vp.values;
  std::vector<double> out;
  out.reserve(subset.size());
  for (std::size_t pos : subset) {
    if (pos < 1 || pos > vp.values.size())
      throw std::invalid_argument("feature subset index " + std::to_string(pos) +
                                  " outside [1, " + std::to_string(vp.values.size()) +
                                  "]");
    out.push_back(vp.values[pos - 1]);
  }
  return out;
}

void finish_report(MetricsReport& pooled_report) {
  double acc = 0.0;
  for (const MetricsReport::Fold& f : pooled_report.folds) acc += f.accuracy;
  pooled_report.mean_fold_accuracy =
      pooled_report.folds.empty() ? 0.0
                                  : acc / static_cast<double>(pooled_report.folds.size());
}

}  // namespace

MetricsReport run_cross_validation(std::span<const Voiceprint> dataset,
                                   std::span<const std::size_t> hidden_layers,
                                   const TrainConfig& cfg, const FoldPlan& plan,
                                   std::span<const std::size_t> feature_subset) {
  if (dataset.empty()) throw std::invalid_argument("run_cross_validation: empty dataset");
  if (plan.assignments.size() != dataset.size())
    throw std::invalid_argument("run_cross_validation: fold plan does not match dataset");

  std::vector<Label> truth(dataset.size());
  std::vector<Label> predicted(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) truth[i] = dataset[i].label;

  std::vector<MetricsReport::Fold> fold_results;
  fold_results.reserve(plan.k);

  for (std::size_t fold = 0; fold < plan.k; ++fold) {
    std::vector<Sample> train_samples;
    std::vector<std::size_t> test_indices;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      if (plan.assignments[i] == fold) {
        test_indices.push_back(i);
      } else {
        Sample s = to_sample(dataset[i]);
        s.features = select_features(dataset[i], feature_subset);
        train_samples.push_back(std::move(s));
      }
    }
    if (train_samples.empty())
      throw std::invalid_argument("run_cross_validation: fold " + std::to_string(fold) +
                                  " leaves no training data");

    bool single_class = true;
    for (std::size_t i = 1; i < train_samples.size(); ++i)
      if (train_samples[i].target != train_samples[0].target) {
        single_class = false;
        break;
      }

    TrainConfig fold_cfg = cfg;
    fold_cfg.seed = mix_seed(cfg.seed, fold + 1);
    fold_cfg.batch_size = std::min(cfg.batch_size, train_samples.size());

    const std::size_t dim = train_samples.front().features.size();
    Network net = initialize_network(dim, hidden_layers, train_samples, fold_cfg);
    train(net, train_samples, fold_cfg);

    std::vector<Label> fold_truth, fold_pred;
    for (std::size_t i : test_indices) {
      const Prediction p = predict(net, select_features(dataset[i], feature_subset));
      predicted[i] = p.label;
      fold_truth.push_back(truth[i]);
      fold_pred.push_back(p.label);
    }

    MetricsReport::Fold fr;
    fr.counts = confusion(fold_truth, fold_pred);
    fr.accuracy = static_cast<double>(fr.counts.tp + fr.counts.tn) /
                  static_cast<double>(fr.counts.total());
    fr.single_class_training = single_class;
    fold_results.push_back(fr);
  }

  MetricsReport pooled = metrics(confusion(truth, predicted));
  pooled.folds = std::move(fold_results);
  pooled.coefficients_used.assign(feature_subset.begin(), feature_subset.end());
  finish_report(pooled);
  return pooled;
}

MetricsReport run_holdout_test(std::span<const Voiceprint> train_set,
                               std::span<const std::size_t> hidden_layers,
                               const TrainConfig& cfg,
                               std::span<const Voiceprint> test_set,
                               std::span<const std::size_t> feature_subset) {
  if (test_set.empty()) throw std::invalid_argument("run_holdout_test: empty test set");
  if (train_set.empty()) throw std::invalid_argument("run_holdout_test: empty training set");

  std::vector<Sample> train_samples;
  train_samples.reserve(train_set.size());
  for (const Voiceprint& vp : train_set) {
    Sample s = to_sample(vp);
    s.features = select_features(vp, feature_subset);
    train_samples.push_back(std::move(s));
  }
  TrainConfig fit_cfg = cfg;
  fit_cfg.batch_size = std::min(cfg.batch_size, train_samples.size());

  const std::size_t dim = train_samples.front().features.size();
  Network net = initialize_network(dim, hidden_layers, train_samples, fit_cfg);
  train(net, train_samples, fit_cfg);

  MetricsReport r = evaluate_network(net, test_set, feature_subset);
  r.coefficients_used.assign(feature_subset.begin(), feature_subset.end());
  return r;
}

MetricsReport evaluate_network(const Network& net, std::span<const Voiceprint> test_set,
                               std::span<const std::size_t> feature_subset) {
  if (test_set.empty()) throw std::invalid_argument("evaluate_network: empty test set");
  std::vector<Label> truth, predicted;
  truth.reserve(test_set.size());
  predicted.reserve(test_set.size());
  for (const Voiceprint& vp : test_set) {
    truth.push_back(vp.label);
    predicted.push_back(predict(net, select_features(vp, feature_subset)).label);
  }
  return metrics(confusion(truth, predicted));
}

std::vector<SweepEntry> coefficient_sweep(
    std::span<const Voiceprint> dataset,
    std::span<const std::vector<std::size_t>> candidate_subsets,
    std::span<const std::size_t> hidden_layers, const TrainConfig& cfg,
    const FoldPlan& plan) {
  if (candidate_subsets.empty())
    throw std::invalid_argument("coefficient_sweep: no candidate subsets");
  for (const auto& subset : candidate_subsets)
    if (subset.empty())
      throw std::invalid_argument("coefficient_sweep: empty feature subset");

  std::vector<SweepEntry> entries;
  entries.reserve(candidate_subsets.size());
  for (const auto& subset : candidate_subsets) {
    SweepEntry e;
    e.subset = subset;
    e.report = run_cross_validation(dataset, hidden_layers, cfg, plan, subset);
    entries.push_back(std::move(e));
  }

  std::stable_sort(entries.begin(), entries.end(),
                   [](const SweepEntry& a, const SweepEntry& b) {
                     if (a.report.accuracy != b.report.accuracy)
                       return a.report.accuracy > b.report.accuracy;
                     if (a.report.mcc != b.report.mcc) return a.report.mcc > b.report.mcc;
                     if (a.subset.size() != b.subset.size())
                       return a.subset.size() < b.subset.size();
                     return a.subset < b.subset;
                   });
  return entries;
}

}  // namespace pdvoice
