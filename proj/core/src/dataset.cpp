#include "pdvoice/dataset.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pdvoice/synth.hpp"
#include "pdvoice/wav.hpp"

namespace pdvoice {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& text, const std::string& where) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw std::runtime_error(where + ": '" + text + "' is not a number");
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::ofstream open_out(const std::filesystem::path& path, const char* who) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(std::string(who) + ": cannot open " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path, const char* who) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(std::string(who) + ": cannot open " + path.string());
  return in;
}

}  // namespace

void save_manifest(const std::filesystem::path& path, const DatasetManifest& m) {
  std::ofstream out = open_out(path, "save_manifest");
  if (!m.provenance.empty()) out << "# " << m.provenance << "\n";
  out << "subject_id,vowel,label,source\n";
  for (const ManifestEntry& e : m.entries) {
    out << e.subject_id << ',' << to_string(e.vowel) << ',' << to_string(e.label) << ','
        << e.source << "\n";
  }
  if (!out) throw std::runtime_error("save_manifest: write failed for " + path.string());
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in = open_in(path, "load_manifest");
  DatasetManifest m;
  std::string line;
  std::size_t row = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (m.provenance.empty()) m.provenance = line.substr(line.find_first_not_of("# "));
      continue;
    }
    const std::vector<std::string> fields = split_csv(line);
    if (!header_seen) {
      if (fields != std::vector<std::string>{"subject_id", "vowel", "label", "source"})
        throw std::runtime_error("load_manifest: row " + std::to_string(row) +
                                 ": unexpected header");
      header_seen = true;
      continue;
    }
    if (fields.size() != 4)
      throw std::runtime_error("load_manifest: row " + std::to_string(row) + ": expected 4 columns, got " +
                               std::to_string(fields.size()));
    ManifestEntry e;
    e.subject_id = fields[0];
    e.vowel = parse_vowel(fields[1]);
    e.label = parse_label(fields[2]);
    e.source = fields[3];
    m.entries.push_back(std::move(e));
  }
  if (!header_seen) throw std::runtime_error("load_manifest: missing header row");
  return m;
}

namespace {

// "synth:f0=120;jitter=0.5;shimmer=0.3;hnr=12;dur=2;sr=16000;vowel=a;seed=7"
// Semicolon-separated so the whole spec stays one CSV field.
SynthParams parse_synth_spec(const std::string& spec, Vowel default_vowel) {
  SynthParams p;
  p.formants = vowel_formants(default_vowel);
  std::istringstream in(spec.substr(6));
  std::string item;
  while (std::getline(in, item, ';')) {
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("synth spec: expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (key == "f0") p.f0_hz = parse_double(value, "synth spec f0");
    else if (key == "jitter") p.jitter_pct = parse_double(value, "synth spec jitter");
    else if (key == "shimmer") p.shimmer_pct = parse_double(value, "synth spec shimmer");
    else if (key == "hnr") p.hnr_db = parse_double(value, "synth spec hnr");
    else if (key == "dur") p.duration_s = parse_double(value, "synth spec dur");
    else if (key == "sr") p.sample_rate = parse_double(value, "synth spec sr");
    else if (key == "vowel") p.formants = vowel_formants(parse_vowel(value));
    else if (key == "seed") p.seed = static_cast<std::uint64_t>(std::stoull(value));
    else throw std::runtime_error("synth spec: unknown key '" + key + "'");
  }
  return p;
}

}  // namespace

AudioClip resolve_entry(const ManifestEntry& entry,
                        const std::filesystem::path& base_dir) {
  if (entry.source.rfind("synth:", 0) == 0)
    return synth_vowel(parse_synth_spec(entry.source, entry.vowel));
  std::filesystem::path p(entry.source);
  if (p.is_relative()) p = base_dir / p;
  return load_wav(p);
}

void save_features(const std::filesystem::path& path,
                   std::span<const Voiceprint> voiceprints) {
  if (voiceprints.empty()) throw std::invalid_argument("save_features: nothing to save");
  const std::size_t dims = voiceprints.front().values.size();
  for (const Voiceprint& vp : voiceprints)
    if (vp.values.size() != dims)
      throw std::invalid_argument("save_features: inconsistent feature dimensions");

  std::ofstream out = open_out(path, "save_features");
  out << "subject_id,vowel,label";
  for (std::size_t j = 1; j <= dims; ++j) out << ",c" << j;
  out << "\n";
  for (const Voiceprint& vp : voiceprints) {
    out << vp.source_id << ',' << to_string(vp.vowel) << ',' << to_string(vp.label);
    for (double v : vp.values) out << ',' << format_double(v);
    out << "\n";
  }
  if (!out) throw std::runtime_error("save_features: write failed for " + path.string());
}

std::vector<Voiceprint> load_features(const std::filesystem::path& path) {
  std::ifstream in = open_in(path, "load_features");
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("load_features: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const std::vector<std::string> header = split_csv(line);
  const std::vector<std::string> expected = {"subject_id", "vowel", "label"};
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i >= header.size() || header[i] != expected[i])
      throw std::runtime_error("load_features: missing column '" + expected[i] + "'");
  }
  const std::size_t dims = header.size() - expected.size();
  if (dims == 0) throw std::runtime_error("load_features: missing column 'c1'");
  for (std::size_t j = 0; j < dims; ++j) {
    const std::string want = "c" + std::to_string(j + 1);
    if (header[expected.size() + j] != want)
      throw std::runtime_error("load_features: missing column '" + want + "'");
  }

  std::vector<Voiceprint> out;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv(line);
    if (fields.size() != header.size())
      throw std::runtime_error("load_features: row " + std::to_string(row) + ": expected " +
                               std::to_string(header.size()) + " columns, got " +
                               std::to_string(fields.size()));
    Voiceprint vp;
    vp.source_id = fields[0];
    vp.vowel = parse_vowel(fields[1]);
    vp.label = parse_label(fields[2]);
    vp.values.reserve(dims);
    for (std::size_t j = 0; j < dims; ++j) {
      vp.values.push_back(parse_double(
          fields[3 + j],
          "load_features: row " + std::to_string(row) + ", column 'c" +
              std::to_string(j + 1) + "'"));
    }
    out.push_back(std::move(vp));
  }
  return out;
}

void save_model(const std::filesystem::path& path, const Network& net,
                const TrainConfig& cfg) {
  std::ofstream out = open_out(path, "save_model");
  out << "pdvoice-model 1\n";
  out << "layer_sizes";
  for (std::size_t s : net.layer_sizes) out << ' ' << s;
  out << "\n";
  out << "output_activation sigmoid\n";
  out << "cfg.batch_size " << cfg.batch_size << "\n";
  out << "cfg.learning_rate " << format_double(cfg.learning_rate) << "\n";
  out << "cfg.epochs " << cfg.epochs << "\n";
  out << "cfg.seed " << cfg.seed << "\n";
  out << "cfg.shuffle " << (cfg.shuffle ? 1 : 0) << "\n";
  out << "cfg.pretrain " << (cfg.pretrain == Pretrain::Rbm ? "rbm" : "none") << "\n";

  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    out << "weights " << l + 1 << "\n";
    const Matrix& w = net.weights[l];
    for (std::size_t i = 0; i < w.rows; ++i) {
      for (std::size_t j = 0; j < w.cols; ++j) {
        if (j) out << ' ';
        out << format_double(w(i, j));
      }
      out << "\n";
    }
    out << "biases " << l + 1 << "\n";
    for (std::size_t i = 0; i < net.biases[l].size(); ++i) {
      if (i) out << ' ';
      out << format_double(net.biases[l][i]);
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("save_model: write failed for " + path.string());
}

LoadedModel load_model(const std::filesystem::path& path) {
  std::ifstream in = open_in(path, "load_model");
  std::string word;
  in >> word;
  if (word != "pdvoice-model")
    throw std::runtime_error("load_model: " + path.string() + " is not a model file");
  int version = 0;
  in >> version;
  if (version != 1)
    throw std::runtime_error("load_model: unsupported version " + std::to_string(version));

  LoadedModel model;
  std::vector<std::size_t> sizes;
  in >> word;
  if (word != "layer_sizes") throw std::runtime_error("load_model: expected layer_sizes");
  {
    std::string rest;
    std::getline(in, rest);
    std::istringstream ls(rest);
    std::size_t s;
    while (ls >> s) sizes.push_back(s);
  }
  if (sizes.size() < 2) throw std::runtime_error("load_model: bad layer_sizes");

  while (in >> word) {
    if (word == "weights") break;
    std::string value;
    std::getline(in, value);
    const std::size_t start = value.find_first_not_of(' ');
    model.config_echo.emplace_back(word,
                                   start == std::string::npos ? "" : value.substr(start));
  }

  model.net = Network::zeros(sizes);
  for (std::size_t l = 0; l < model.net.weights.size(); ++l) {
    if (l > 0) {
      in >> word;
      if (word != "weights")
        throw std::runtime_error("load_model: expected weights block " +
                                 std::to_string(l + 1));
    }
    std::size_t index = 0;
    in >> index;
    if (index != l + 1)
      throw std::runtime_error("load_model: weight blocks out of order");
    Matrix& w = model.net.weights[l];
    for (double& v : w.data)
      if (!(in >> v)) throw std::runtime_error("load_model: truncated weight block");
    in >> word >> index;
    if (word != "biases" || index != l + 1)
      throw std::runtime_error("load_model: expected biases block " + std::to_string(l + 1));
    for (double& v : model.net.biases[l])
      if (!(in >> v)) throw std::runtime_error("load_model: truncated bias block");
  }
  return model;
}

}  // namespace pdvoice
