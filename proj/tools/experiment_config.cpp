#include "experiment_config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pdvoice::cli {

namespace {

std::string trim(const std::string& s) {
  const std::size_t begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const std::size_t end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

double to_double(const std::string& key, const std::string& value) {
  const char* begin = value.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw std::invalid_argument("config key '" + key + "': '" + value +
                                "' is not a number");
  return v;
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': '" + value +
                                "' is not an unsigned integer");
  }
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  throw std::invalid_argument("config key '" + key + "': '" + value +
                              "' is not a boolean");
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(static_cast<std::size_t>(to_u64("size list", item)));
  }
  if (out.empty()) throw std::invalid_argument("empty size list '" + text + "'");
  return out;
}

std::vector<std::vector<std::size_t>> parse_subsets(const std::string& text) {
  std::vector<std::vector<std::size_t>> out;
  std::istringstream in(text);
  std::string group;
  while (std::getline(in, group, ';')) {
    group = trim(group);
    if (group.empty()) continue;
    out.push_back(parse_size_list(group));
  }
  if (out.empty()) throw std::invalid_argument("empty subset list '" + text + "'");
  return out;
}

void apply_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "frontend.preemphasis_k") cfg.frontend.preemphasis_k = to_double(key, value);
  else if (key == "frontend.frame_len_ms") cfg.frontend.frame_len_ms = to_double(key, value);
  else if (key == "frontend.hop_ms") cfg.frontend.hop_ms = to_double(key, value);
  else if (key == "frontend.fft_size")
    cfg.frontend.fft_size = static_cast<std::size_t>(to_u64(key, value));
  else if (key == "frontend.num_filters")
    cfg.frontend.num_filters = static_cast<std::size_t>(to_u64(key, value));
  else if (key == "frontend.fmin_hz") cfg.frontend.fmin_hz = to_double(key, value);
  else if (key == "frontend.fmax_hz") cfg.frontend.fmax_hz = to_double(key, value);
  else if (key == "frontend.num_ceps")
    cfg.frontend.num_ceps = static_cast<std::size_t>(to_u64(key, value));
  else if (key == "frontend.drop_c1") cfg.frontend.drop_c1 = to_bool(key, value);
  else if (key == "frontend.mel_natural_log")
    cfg.frontend.mel_natural_log = to_bool(key, value);
  else if (key == "weighting.mode") {
    if (value == "per_utterance") cfg.weighting = WeightingScope::PerUtterance;
    else if (value == "corpus") cfg.weighting = WeightingScope::Corpus;
    else
      throw std::invalid_argument(
          "config key 'weighting.mode': expected per_utterance or corpus, got '" + value +
          "'");
  } else if (key == "net.hidden") cfg.hidden_layers = parse_size_list(value);
  else if (key == "net.batch_size")
    cfg.train.batch_size = static_cast<std::size_t>(to_u64(key, value));
  else if (key == "net.learning_rate") cfg.train.learning_rate = to_double(key, value);
  else if (key == "net.epochs")
    cfg.train.epochs = static_cast<std::size_t>(to_u64(key, value));
  else if (key == "net.shuffle") cfg.train.shuffle = to_bool(key, value);
  else if (key == "net.pretrain") {
    if (value == "none") cfg.train.pretrain = Pretrain::None;
    else if (value == "rbm") cfg.train.pretrain = Pretrain::Rbm;
    else
      throw std::invalid_argument("config key 'net.pretrain': expected none or rbm, got '" +
                                  value + "'");
  } else if (key == "net.rbm_epochs")
    cfg.train.rbm_epochs = static_cast<std::size_t>(to_u64(key, value));
  else if (key == "net.rbm_learning_rate")
    cfg.train.rbm_learning_rate = to_double(key, value);
  else if (key == "net.rbm_cd_steps")
    cfg.train.rbm_cd_steps = static_cast<std::size_t>(to_u64(key, value));
  else if (key == "net.rbm_batch_size")
    cfg.train.rbm_batch_size = static_cast<std::size_t>(to_u64(key, value));
  else if (key == "eval.folds") {
    if (value == "loo") cfg.eval_folds = 0;
    else cfg.eval_folds = static_cast<std::size_t>(to_u64(key, value));
  } else if (key == "eval.subsets") cfg.sweep_subsets = parse_subsets(value);
  else if (key == "seed") cfg.seed = to_u64(key, value);
  else throw std::invalid_argument("unknown config key '" + key + "'");
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open config file " + path.string());
  ExperimentConfig cfg;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path.string() + ":" + std::to_string(row) +
                               ": expected key = value");
    try {
      apply_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(row) + ": " + e.what());
    }
  }
  return cfg;
}

void echo_config(std::ostream& out, const ExperimentConfig& cfg,
                 const std::string& prefix) {
  out << prefix << "frontend.preemphasis_k " << format_double(cfg.frontend.preemphasis_k)
      << "\n";
  out << prefix << "frontend.frame_len_ms " << format_double(cfg.frontend.frame_len_ms)
      << "\n";
  out << prefix << "frontend.hop_ms " << format_double(cfg.frontend.hop_ms) << "\n";
  out << prefix << "frontend.fft_size " << cfg.frontend.fft_size << "\n";
  out << prefix << "frontend.num_filters " << cfg.frontend.num_filters << "\n";
  out << prefix << "frontend.fmin_hz " << format_double(cfg.frontend.fmin_hz) << "\n";
  out << prefix << "frontend.fmax_hz " << format_double(cfg.frontend.fmax_hz) << "\n";
  out << prefix << "frontend.num_ceps " << cfg.frontend.num_ceps << "\n";
  out << prefix << "frontend.drop_c1 " << (cfg.frontend.drop_c1 ? 1 : 0) << "\n";
  out << prefix << "frontend.mel_natural_log " << (cfg.frontend.mel_natural_log ? 1 : 0)
      << "\n";
  out << prefix << "weighting.mode "
      << (cfg.weighting == WeightingScope::Corpus ? "corpus" : "per_utterance") << "\n";
  out << prefix << "net.hidden ";
  for (std::size_t i = 0; i < cfg.hidden_layers.size(); ++i) {
    if (i) out << ',';
    out << cfg.hidden_layers[i];
  }
  out << "\n";
  out << prefix << "net.batch_size " << cfg.train.batch_size << "\n";
  out << prefix << "net.learning_rate " << format_double(cfg.train.learning_rate) << "\n";
  out << prefix << "net.epochs " << cfg.train.epochs << "\n";
  out << prefix << "net.shuffle " << (cfg.train.shuffle ? 1 : 0) << "\n";
  out << prefix << "net.pretrain " << (cfg.train.pretrain == Pretrain::Rbm ? "rbm" : "none")
      << "\n";
  if (cfg.train.pretrain == Pretrain::Rbm) {
    out << prefix << "net.rbm_epochs " << cfg.train.rbm_epochs << "\n";
    out << prefix << "net.rbm_learning_rate " << format_double(cfg.train.rbm_learning_rate)
        << "\n";
    out << prefix << "net.rbm_cd_steps " << cfg.train.rbm_cd_steps << "\n";
    out << prefix << "net.rbm_batch_size " << cfg.train.rbm_batch_size << "\n";
  }
  out << prefix << "eval.folds ";
  if (cfg.eval_folds == 0) out << "loo";
  else out << cfg.eval_folds;
  out << "\n";
  out << prefix << "seed " << cfg.seed << "\n";
}

}  // namespace pdvoice::cli
