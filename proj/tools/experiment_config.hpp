#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "pdvoice/frontend.hpp"
#include "pdvoice/network.hpp"
#include "pdvoice/weighting.hpp"

namespace pdvoice::cli {

// Everything a run needs, resolvable from a flat key-value config file plus
// command line overrides.
struct ExperimentConfig {
  FrontendConfig frontend;
  WeightingScope weighting = WeightingScope::PerUtterance;
  std::vector<std::size_t> hidden_layers{32, 16};
  TrainConfig train;
  std::size_t eval_folds = 10;  // 0 means leave-one-out
  std::uint64_t seed = 1;
  std::vector<std::vector<std::size_t>> sweep_subsets;  // empty: singletons
};

// Applies one sectioned key ("frontend.num_ceps", "net.epochs", ...).
// Throws std::invalid_argument for unknown keys or unparsable values.
void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// Reads "key = value" lines; '#' starts a comment.
ExperimentConfig load_config_file(const std::filesystem::path& path);

// Emits every resolved key, one per line with the given prefix. Reports
// embed this for provenance.
void echo_config(std::ostream& out, const ExperimentConfig& cfg,
                 const std::string& prefix);

// "32,16" -> {32, 16}
std::vector<std::size_t> parse_size_list(const std::string& text);
// "1;2;12,14" -> {{1},{2},{12,14}}
std::vector<std::vector<std::size_t>> parse_subsets(const std::string& text);

}  // namespace pdvoice::cli
