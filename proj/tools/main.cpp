#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"

using namespace pdvoice;
using namespace pdvoice::cli;

namespace {

// Shared --config/--seed handling: the config file is applied first, then
// explicit flags override it.
struct CommonFlags {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_given = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "flat key=value config file")
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", seed, "master seed for this run")
        ->each([this](const std::string&) { seed_given = true; });
  }

  ExperimentConfig resolve() const {
    ExperimentConfig cfg =
        config_path.empty() ? ExperimentConfig{} : load_config_file(config_path);
    if (seed_given) cfg.seed = seed;
    return cfg;
  }
};

std::vector<Vowel> parse_vowel_string(const std::string& text) {
  std::vector<Vowel> out;
  for (char c : text) out.push_back(parse_vowel(std::string(1, c)));
  if (out.empty()) throw std::invalid_argument("no vowels given");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pdvoice: voice pathology classification experiments"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic sustained-vowel dataset");
  CommonFlags synth_common;
  synth_common.attach(synth);
  SynthOptions synth_opt;
  std::string synth_vowels = "aou";
  std::string synth_out;
  synth->add_option("--out", synth_out, "output directory")->required();
  synth->add_option("--subjects-pd", synth_opt.pd_subjects, "PD subject count");
  synth->add_option("--subjects-healthy", synth_opt.healthy_subjects,
                    "healthy subject count");
  synth->add_option("--vowels", synth_vowels, "vowels to render, e.g. aou or u");
  synth->add_option("--duration-s", synth_opt.duration_s, "clip duration in seconds");
  synth->add_option("--sample-rate", synth_opt.sample_rate, "sample rate in Hz");

  // extract
  auto* extract = app.add_subcommand("extract", "extract entropy-weighted voiceprints");
  CommonFlags extract_common;
  extract_common.attach(extract);
  ExtractOptions extract_opt;
  std::string extract_manifest, extract_out, extract_weighting;
  bool no_drop_c1 = false;
  extract->add_option("manifest", extract_manifest, "dataset manifest")
      ->required()
      ->check(CLI::ExistingFile);
  extract->add_option("--out", extract_out, "feature store to write")->required();
  extract->add_flag("--strict", extract_opt.strict, "abort on unreadable entries");
  extract->add_flag("--no-drop-c1", no_drop_c1,
                    "keep the first cepstral coefficient (adds one dimension)");
  extract->add_option("--weighting", extract_weighting, "per_utterance or corpus");

  // train
  auto* train_cmd = app.add_subcommand("train", "fit one model on a whole feature store");
  CommonFlags train_common;
  train_common.attach(train_cmd);
  std::string train_features, train_out;
  train_cmd->add_option("features", train_features, "feature store")
      ->required()
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--out", train_out, "model file to write")->required();

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "cross-validate or test against a holdout set");
  CommonFlags eval_common;
  eval_common.attach(eval_cmd);
  std::string eval_features, eval_out, eval_test, eval_subset;
  std::size_t eval_folds = 0;
  bool eval_folds_given = false, eval_loo = false;
  eval_cmd->add_option("features", eval_features, "feature store")
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--out", eval_out, "report directory")->required();
  eval_cmd->add_option("--folds", eval_folds, "fold count k")
      ->each([&eval_folds_given](const std::string&) { eval_folds_given = true; });
  eval_cmd->add_flag("--loo", eval_loo, "leave-one-out (k = sample count)");
  eval_cmd->add_option("--test-set", eval_test, "holdout feature store")
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--subset", eval_subset,
                       "restrict to these 1-based coefficient positions, e.g. 12,14");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "rank coefficient subsets by accuracy");
  CommonFlags sweep_common;
  sweep_common.attach(sweep_cmd);
  std::string sweep_features, sweep_out, sweep_subsets;
  std::size_t sweep_folds = 0;
  bool sweep_folds_given = false, sweep_loo = false;
  sweep_cmd->add_option("features", sweep_features, "feature store")
      ->required()
      ->check(CLI::ExistingFile);
  sweep_cmd->add_option("--out", sweep_out, "report directory")->required();
  sweep_cmd->add_option("--subsets", sweep_subsets,
                        "semicolon-separated subsets, e.g. 1;2;12,14 (default singletons)");
  sweep_cmd->add_option("--folds", sweep_folds, "fold count k")
      ->each([&sweep_folds_given](const std::string&) { sweep_folds_given = true; });
  sweep_cmd->add_flag("--loo", sweep_loo, "leave-one-out (k = sample count)");

  // report
  auto* report_cmd = app.add_subcommand("report", "render a machine-readable record");
  std::string report_record;
  report_cmd->add_option("record", report_record, "record (.rec) file")
      ->required()
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) {
      synth_opt.cfg = synth_common.resolve();
      synth_opt.vowels = parse_vowel_string(synth_vowels);
      synth_opt.out_dir = synth_out;
      cmd_synth(synth_opt, std::cout, std::cerr);
    } else if (extract->parsed()) {
      extract_opt.cfg = extract_common.resolve();
      if (no_drop_c1) {
        // Keep the same top coefficient, so the delivered dimension grows.
        extract_opt.cfg.frontend.drop_c1 = false;
        extract_opt.cfg.frontend.num_ceps += 1;
      }
      if (!extract_weighting.empty())
        apply_key(extract_opt.cfg, "weighting.mode", extract_weighting);
      extract_opt.manifest = extract_manifest;
      extract_opt.out_file = extract_out;
      cmd_extract(extract_opt, std::cout, std::cerr);
    } else if (train_cmd->parsed()) {
      TrainOptions opt;
      opt.cfg = train_common.resolve();
      opt.features = train_features;
      opt.model_out = train_out;
      cmd_train(opt, std::cout, std::cerr);
    } else if (eval_cmd->parsed()) {
      EvalOptions opt;
      opt.cfg = eval_common.resolve();
      if (eval_loo) opt.cfg.eval_folds = 0;
      else if (eval_folds_given) opt.cfg.eval_folds = eval_folds;
      if (!eval_subset.empty()) opt.subset = parse_size_list(eval_subset);
      opt.features = eval_features;
      opt.out_dir = eval_out;
      opt.test_set = eval_test;
      cmd_eval(opt, std::cout, std::cerr);
    } else if (sweep_cmd->parsed()) {
      SweepOptions opt;
      opt.cfg = sweep_common.resolve();
      if (sweep_loo) opt.cfg.eval_folds = 0;
      else if (sweep_folds_given) opt.cfg.eval_folds = sweep_folds;
      if (!sweep_subsets.empty()) opt.cfg.sweep_subsets = parse_subsets(sweep_subsets);
      opt.features = sweep_features;
      opt.out_dir = sweep_out;
      cmd_sweep(opt, std::cout, std::cerr);
    } else if (report_cmd->parsed()) {
      cmd_report(report_record, std::cout, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
