#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <vector>

#include "experiment_config.hpp"
#include "pdvoice/types.hpp"

namespace pdvoice::cli {

struct SynthOptions {
  ExperimentConfig cfg;
  std::size_t pd_subjects = 20;
  std::size_t healthy_subjects = 20;
  std::vector<Vowel> vowels = {Vowel::A, Vowel::O, Vowel::U};
  double duration_s = 2.0;
  double sample_rate = 16000.0;
  std::filesystem::path out_dir;
};

struct ExtractOptions {
  ExperimentConfig cfg;
  std::filesystem::path manifest;
  std::filesystem::path out_file;
  bool strict = false;
};

struct TrainOptions {
  ExperimentConfig cfg;
  std::filesystem::path features;
  std::filesystem::path model_out;
};

struct EvalOptions {
  ExperimentConfig cfg;
  std::filesystem::path features;
  std::filesystem::path out_dir;
  std::filesystem::path test_set;  // empty: cross-validation
  std::vector<std::size_t> subset;
};

struct SweepOptions {
  ExperimentConfig cfg;
  std::filesystem::path features;
  std::filesystem::path out_dir;
};

// Commands write data files and the output stream, diagnostics the error
// stream, and throw on fatal problems.
void cmd_synth(const SynthOptions& opt, std::ostream& out, std::ostream& err);
void cmd_extract(const ExtractOptions& opt, std::ostream& out, std::ostream& err);
void cmd_train(const TrainOptions& opt, std::ostream& out, std::ostream& err);
void cmd_eval(const EvalOptions& opt, std::ostream& out, std::ostream& err);
void cmd_sweep(const SweepOptions& opt, std::ostream& out, std::ostream& err);
void cmd_report(const std::filesystem::path& record, std::ostream& out, std::ostream& err);

// FNV-1a of the file bytes, as a 16-digit hex string; embedded in reports
// to tie them to their input feature store.
std::string file_hash_hex(const std::filesystem::path& path);

}  // namespace pdvoice::cli
