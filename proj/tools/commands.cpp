#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

#include "pdvoice/dataset.hpp"
#include "pdvoice/evaluation.hpp"
#include "pdvoice/synth.hpp"
#include "pdvoice/wav.hpp"

namespace pdvoice::cli {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_metric(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path, const char* who) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(std::string(who) + ": cannot open " + path.string());
  return out;
}

std::string subset_to_string(std::span<const std::size_t> subset) {
  if (subset.empty()) return "all";
  std::string s;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(subset[i]);
  }
  return s;
}

void write_metrics_keys(std::ostream& rec, const std::string& prefix,
                        const MetricsReport& r) {
  rec << prefix << ".tp " << r.counts.tp << "\n";
  rec << prefix << ".tn " << r.counts.tn << "\n";
  rec << prefix << ".fp " << r.counts.fp << "\n";
  rec << prefix << ".fn " << r.counts.fn << "\n";
  rec << prefix << ".accuracy " << format_double(r.accuracy) << "\n";
  rec << prefix << ".sensitivity " << format_double(r.sensitivity) << "\n";
  rec << prefix << ".specificity " << format_double(r.specificity) << "\n";
  rec << prefix << ".mcc " << format_double(r.mcc) << "\n";
  rec << prefix << ".pe " << format_double(r.pe) << "\n";
  rec << prefix << ".degenerate " << (r.any_degenerate() ? 1 : 0) << "\n";
}

void write_metrics_table(std::ostream& out, const MetricsReport& r) {
  out << "  confusion     tp=" << r.counts.tp << " fn=" << r.counts.fn
      << " tn=" << r.counts.tn << " fp=" << r.counts.fp << "\n";
  out << "  accuracy      " << format_metric(r.accuracy) << "\n";
  out << "  sensitivity   " << format_metric(r.sensitivity)
      << (r.degenerate_sensitivity ? "  (degenerate)" : "") << "\n";
  out << "  specificity   " << format_metric(r.specificity)
      << (r.degenerate_specificity ? "  (degenerate)" : "") << "\n";
  out << "  mcc           " << format_metric(r.mcc)
      << (r.degenerate_mcc ? "  (degenerate)" : "") << "\n";
  out << "  pe            " << format_metric(r.pe)
      << (r.degenerate_pe ? "  (degenerate)" : "") << "\n";
}

}  // namespace

std::string file_hash_hex(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot hash missing file " + path.string());
  std::uint64_t h = 0xCBF29CE484222325ULL;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void cmd_synth(const SynthOptions& opt, std::ostream& out, std::ostream&) {
  if (opt.pd_subjects == 0)
    throw std::invalid_argument("synth: --subjects-pd must be at least 1");
  std::filesystem::create_directories(opt.out_dir);

  DatasetSpec spec;
  spec.pd_subjects = opt.pd_subjects;
  spec.healthy_subjects = opt.healthy_subjects;
  spec.vowels = opt.vowels;
  spec.duration_s = opt.duration_s;
  spec.sample_rate = opt.sample_rate;
  spec.seed = opt.cfg.seed;

  const SyntheticDataset dataset = build_synthetic_dataset(spec);
  for (std::size_t i = 0; i < dataset.clips.size(); ++i)
    save_wav_pcm16(opt.out_dir / dataset.manifest.entries[i].source, dataset.clips[i]);
  save_manifest(opt.out_dir / "manifest.csv", dataset.manifest);

  std::map<std::string, std::size_t> counts;
  for (const ManifestEntry& e : dataset.manifest.entries)
    ++counts[to_string(e.label) + "/" + to_string(e.vowel)];
  out << "wrote " << dataset.clips.size() << " clips to " << opt.out_dir.string() << "\n";
  for (const auto& [group, n] : counts) out << "  " << group << ": " << n << "\n";
}

void cmd_extract(const ExtractOptions& opt, std::ostream& out, std::ostream& err) {
  const DatasetManifest manifest = load_manifest(opt.manifest);
  if (manifest.entries.empty()) throw std::runtime_error("extract: empty manifest");
  const std::filesystem::path base_dir = opt.manifest.parent_path();

  std::vector<CepstraMatrix> cepstra;
  std::vector<const ManifestEntry*> kept;
  for (const ManifestEntry& e : manifest.entries) {
    try {
      const AudioClip clip = resolve_entry(e, base_dir);
      cepstra.push_back(extract_mfcc(clip, opt.cfg.frontend));
      kept.push_back(&e);
      err << e.source << ": " << cepstra.back().frames() << " frames\n";
    } catch (const std::exception& ex) {
      if (opt.strict) throw;
      err << "warning: skipping " << e.source << ": " << ex.what() << "\n";
    }
  }
  if (cepstra.empty()) throw std::runtime_error("extract: no readable entries");

  std::vector<Voiceprint> voiceprints;
  voiceprints.reserve(cepstra.size());
  if (opt.cfg.weighting == WeightingScope::Corpus) {
    const WeightVector weights = pooled_weights(cepstra);
    for (std::size_t i = 0; i < cepstra.size(); ++i)
      voiceprints.push_back(make_voiceprint(
          cepstra[i], weights,
          UtteranceInfo{kept[i]->subject_id, kept[i]->label, kept[i]->vowel}));
  } else {
    for (std::size_t i = 0; i < cepstra.size(); ++i)
      voiceprints.push_back(make_voiceprint(
          cepstra[i],
          UtteranceInfo{kept[i]->subject_id, kept[i]->label, kept[i]->vowel}));
  }
  save_features(opt.out_file, voiceprints);
  out << "wrote " << voiceprints.size() << " voiceprints ("
      << voiceprints.front().values.size() << " coefficients) to "
      << opt.out_file.string() << "\n";
}

void cmd_train(const TrainOptions& opt, std::ostream& out, std::ostream&) {
  const std::vector<Voiceprint> voiceprints = load_features(opt.features);
  std::vector<Sample> samples;
  samples.reserve(voiceprints.size());
  for (const Voiceprint& vp : voiceprints) samples.push_back(to_sample(vp));

  TrainConfig cfg = opt.cfg.train;
  cfg.seed = opt.cfg.seed;
  cfg.batch_size = std::min(cfg.batch_size, samples.size());

  Network net = initialize_network(samples.front().features.size(), opt.cfg.hidden_layers,
                                   samples, cfg);
  const TrainTrace trace = train(net, samples, cfg);
  save_model(opt.model_out, net, cfg);
  out << "trained on " << samples.size() << " voiceprints for " << cfg.epochs
      << " epochs; final loss " << format_double(trace.final_loss) << "\n";
  out << "model written to " << opt.model_out.string() << "\n";
}

namespace {

struct EvalOutcome {
  MetricsReport report;
  std::string mode;
  std::size_t folds = 0;
  std::size_t samples = 0;
};

void write_eval_report(const std::filesystem::path& dir, const std::string& stem,
                       const ExperimentConfig& cfg, const std::filesystem::path& input,
                       const std::string& input_hash, const EvalOutcome& outcome) {
  std::ofstream txt = open_out(dir / (stem + ".txt"), "report");
  txt << "pdvoice " << outcome.mode << " report\n";
  txt << "input        " << input.string() << "\n";
  txt << "input_hash   " << input_hash << "\n";
  txt << "samples      " << outcome.samples << "\n";
  if (outcome.folds > 0) {
    txt << "mode         ";
    if (outcome.folds == outcome.samples)
      txt << "leave-one-out (k = n = " << outcome.folds << ")\n";
    else
      txt << outcome.folds << "-fold cross-validation\n";
  } else {
    txt << "mode         holdout test set\n";
  }
  txt << "coefficients " << subset_to_string(outcome.report.coefficients_used) << "\n";
  txt << "\nconfig:\n";
  echo_config(txt, cfg, "  ");
  txt << "\npooled metrics:\n";
  write_metrics_table(txt, outcome.report);
  if (!outcome.report.folds.empty()) {
    txt << "  mean fold accuracy " << format_metric(outcome.report.mean_fold_accuracy)
        << "\n";
    txt << "\nper fold:\n";
    for (std::size_t i = 0; i < outcome.report.folds.size(); ++i) {
      const MetricsReport::Fold& f = outcome.report.folds[i];
      txt << "  fold " << std::setw(3) << i << "  size " << std::setw(3)
          << f.counts.total() << "  accuracy " << format_metric(f.accuracy);
      if (f.single_class_training) txt << "  (single-class training data)";
      txt << "\n";
    }
  }
  if (!txt) throw std::runtime_error("report: write failed");

  std::ofstream rec = open_out(dir / (stem + ".rec"), "report");
  rec << "record_version 1\n";
  rec << "command " << outcome.mode << "\n";
  rec << "input " << input.string() << "\n";
  rec << "input_hash " << input_hash << "\n";
  rec << "samples " << outcome.samples << "\n";
  rec << "mode "
      << (outcome.folds == 0 ? std::string("holdout")
          : outcome.folds == outcome.samples
              ? std::string("leave-one-out")
              : std::to_string(outcome.folds) + "-fold")
      << "\n";
  rec << "coefficients " << subset_to_string(outcome.report.coefficients_used) << "\n";
  echo_config(rec, cfg, "config.");
  write_metrics_keys(rec, "pooled", outcome.report);
  if (!outcome.report.folds.empty()) {
    rec << "mean_fold_accuracy " << format_double(outcome.report.mean_fold_accuracy)
        << "\n";
    for (std::size_t i = 0; i < outcome.report.folds.size(); ++i) {
      const MetricsReport::Fold& f = outcome.report.folds[i];
      const std::string p = "fold." + std::to_string(i);
      rec << p << ".size " << f.counts.total() << "\n";
      rec << p << ".accuracy " << format_double(f.accuracy) << "\n";
      rec << p << ".single_class_training " << (f.single_class_training ? 1 : 0) << "\n";
    }
  }
  if (!rec) throw std::runtime_error("report: write failed");
}

}  // namespace

void cmd_eval(const EvalOptions& opt, std::ostream& out, std::ostream&) {
  const std::vector<Voiceprint> voiceprints = load_features(opt.features);
  std::filesystem::create_directories(opt.out_dir);

  TrainConfig cfg = opt.cfg.train;
  cfg.seed = opt.cfg.seed;

  EvalOutcome outcome;
  outcome.samples = voiceprints.size();
  if (!opt.test_set.empty()) {
    const std::vector<Voiceprint> test = load_features(opt.test_set);
    outcome.mode = "eval";
    outcome.folds = 0;
    outcome.samples = test.size();
    outcome.report =
        run_holdout_test(voiceprints, opt.cfg.hidden_layers, cfg, test, opt.subset);
  } else {
    const std::size_t k =
        opt.cfg.eval_folds == 0 ? voiceprints.size() : opt.cfg.eval_folds;
    std::vector<Label> labels;
    if (k < voiceprints.size()) {
      labels.reserve(voiceprints.size());
      for (const Voiceprint& vp : voiceprints) labels.push_back(vp.label);
    }
    const FoldPlan plan = make_folds(voiceprints.size(), k, opt.cfg.seed, labels);
    outcome.mode = "eval";
    outcome.folds = k;
    outcome.report =
        run_cross_validation(voiceprints, opt.cfg.hidden_layers, cfg, plan, opt.subset);
  }

  const std::string hash = file_hash_hex(opt.features);
  write_eval_report(opt.out_dir, "eval_report", opt.cfg, opt.features, hash, outcome);
  out << "accuracy " << format_metric(outcome.report.accuracy) << "  mcc "
      << format_metric(outcome.report.mcc) << "  pe "
      << format_metric(outcome.report.pe) << "\n";
  out << "report written to " << (opt.out_dir / "eval_report.txt").string() << "\n";
}

void cmd_sweep(const SweepOptions& opt, std::ostream& out, std::ostream&) {
  const std::vector<Voiceprint> voiceprints = load_features(opt.features);
  if (voiceprints.empty()) throw std::runtime_error("sweep: empty feature store");
  std::filesystem::create_directories(opt.out_dir);

  std::vector<std::vector<std::size_t>> subsets = opt.cfg.sweep_subsets;
  if (subsets.empty()) {
    for (std::size_t j = 1; j <= voiceprints.front().values.size(); ++j)
      subsets.push_back({j});
  }

  TrainConfig cfg = opt.cfg.train;
  cfg.seed = opt.cfg.seed;
  const std::size_t k = opt.cfg.eval_folds == 0 ? voiceprints.size() : opt.cfg.eval_folds;
  std::vector<Label> labels;
  if (k < voiceprints.size())
    for (const Voiceprint& vp : voiceprints) labels.push_back(vp.label);
  const FoldPlan plan = make_folds(voiceprints.size(), k, opt.cfg.seed, labels);

  const std::vector<SweepEntry> ranked =
      coefficient_sweep(voiceprints, subsets, opt.cfg.hidden_layers, cfg, plan);

  const std::string hash = file_hash_hex(opt.features);
  std::ofstream txt = open_out(opt.out_dir / "sweep_report.txt", "sweep");
  txt << "pdvoice sweep report\n";
  txt << "input        " << opt.features.string() << "\n";
  txt << "input_hash   " << hash << "\n";
  txt << "samples      " << voiceprints.size() << "\n";
  txt << "subsets      " << ranked.size() << "\n";
  txt << "\nconfig:\n";
  echo_config(txt, opt.cfg, "  ");
  txt << "\nrank  coefficients    accuracy  sensitivity  specificity  mcc      pe\n";
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    txt << "  " << std::setw(3) << i + 1 << "  " << std::setw(14) << std::left
        << subset_to_string(ranked[i].subset) << std::right << "  "
        << format_metric(ranked[i].report.accuracy) << "    "
        << format_metric(ranked[i].report.sensitivity) << "       "
        << format_metric(ranked[i].report.specificity) << "       "
        << format_metric(ranked[i].report.mcc) << "  "
        << format_metric(ranked[i].report.pe) << "\n";
  }
  if (!txt) throw std::runtime_error("sweep: write failed");

  std::ofstream rec = open_out(opt.out_dir / "sweep_report.rec", "sweep");
  rec << "record_version 1\n";
  rec << "command sweep\n";
  rec << "input " << opt.features.string() << "\n";
  rec << "input_hash " << hash << "\n";
  rec << "samples " << voiceprints.size() << "\n";
  rec << "subsets " << ranked.size() << "\n";
  echo_config(rec, opt.cfg, "config.");
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const std::string p = "rank." + std::to_string(i + 1);
    rec << p << ".coefficients " << subset_to_string(ranked[i].subset) << "\n";
    write_metrics_keys(rec, p, ranked[i].report);
  }
  if (!rec) throw std::runtime_error("sweep: write failed");

  out << "best subset " << subset_to_string(ranked.front().subset) << " with accuracy "
      << format_metric(ranked.front().report.accuracy) << "\n";
  out << "report written to " << (opt.out_dir / "sweep_report.txt").string() << "\n";
}

void cmd_report(const std::filesystem::path& record, std::ostream& out,
                std::ostream&) {
  std::ifstream in(record);
  if (!in) throw std::runtime_error("report: cannot open " + record.string());
  std::string line;
  std::vector<std::pair<std::string, std::string>> entries;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::size_t space = line.find(' ');
    const std::string key = space == std::string::npos ? line : line.substr(0, space);
    const std::string value = space == std::string::npos ? "" : line.substr(space + 1);
    entries.emplace_back(key, value);
    width = std::max(width, key.size());
  }
  if (entries.empty() || entries.front().first != "record_version")
    throw std::runtime_error("report: " + record.string() + " is not a record file");
  for (const auto& [key, value] : entries)
    out << std::setw(static_cast<int>(width)) << std::left << key << "  " << value
        << "\n";
}

}  // namespace pdvoice::cli
