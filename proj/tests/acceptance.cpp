// Acceptance suite: runs every acceptance criterion end to end and prints
// one PASS/FAIL line per criterion. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "experiment_config.hpp"
#include "pdvoice/dataset.hpp"
#include "pdvoice/evaluation.hpp"
#include "pdvoice/frontend.hpp"
#include "pdvoice/network.hpp"
#include "pdvoice/synth.hpp"
#include "pdvoice/wav.hpp"
#include "pdvoice/weighting.hpp"

using namespace pdvoice;

namespace {

struct Failure {
  std::string what;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw Failure{what};
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("pdvoice_acceptance_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::vector<unsigned char> slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// ---------------------------------------------------------------------------
// 1. Metric-formula reproduction against the published SVM rows.

std::string criterion_metric_formulas() {
  struct Row {
    const char* name;
    double sens, spec;  // percent, at 20 healthy + 20 PD
    double accuracy, mcc, pe;
  };
  const Row rows[] = {
      {"RBF", 80.0, 55.0, 0.6750, 0.3615, 0.3500},
      {"Linear", 80.0, 65.0, 0.7250, 0.4551, 0.4500},
      {"POL", 65.0, 75.0, 0.7000, 0.4020, 0.4000},
      {"MLP", 85.0, 75.0, 0.8000, 0.6030, 0.6000},
  };
  for (const Row& row : rows) {
    ConfusionCounts c;
    c.tp = static_cast<std::size_t>(std::lround(row.sens / 100.0 * 20.0));
    c.fn = 20 - c.tp;
    c.tn = static_cast<std::size_t>(std::lround(row.spec / 100.0 * 20.0));
    c.fp = 20 - c.tn;
    const MetricsReport r = metrics(c);
    expect(std::abs(r.accuracy - row.accuracy) < 5e-4,
           std::string(row.name) + " accuracy " + fmt(r.accuracy));
    expect(std::abs(r.mcc - row.mcc) < 5e-4, std::string(row.name) + " MCC " + fmt(r.mcc));
    expect(std::abs(r.pe - row.pe) < 5e-4, std::string(row.name) + " PE " + fmt(r.pe));
  }
  return "4 published rows reproduced within 5e-4";
}

// ---------------------------------------------------------------------------
// 2. Mel anchor.

std::string criterion_mel_anchor() {
  const double mel = hz_to_mel(1000.0);
  expect(mel >= 999.5 && mel <= 1000.5, "hz_to_mel(1000) = " + fmt(mel));
  return "hz_to_mel(1000) = " + fmt(mel);
}

// ---------------------------------------------------------------------------
// 3. Spectrum against the direct O(N^2) DFT.

std::string criterion_spectrum_oracle() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> length(16, 512);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = length(rng);
    std::vector<double> frame(n);
    for (double& v : frame) v = amp(rng);
    std::size_t fft_size = 1;
    while (fft_size < n) fft_size <<= 1;

    const std::vector<double> got = power_spectrum(frame, fft_size);
    double scale = 0.0, err = 0.0;
    for (std::size_t k = 0; k < got.size(); ++k) {
      double re = 0.0, im = 0.0;
      for (std::size_t t = 0; t < n; ++t) {
        const double ang = -2.0 * std::numbers::pi * static_cast<double>(t) *
                           static_cast<double>(k) / static_cast<double>(fft_size);
        re += frame[t] * std::cos(ang);
        im += frame[t] * std::sin(ang);
      }
      const double ref = re * re + im * im;
      scale = std::max(scale, ref);
      err = std::max(err, std::abs(got[k] - ref));
    }
    worst = std::max(worst, err / scale);
  }
  const double elapsed = seconds_since(start);
  expect(worst <= 1e-9, "relative error " + fmt(worst));
  expect(elapsed < 5.0, "took " + fmt(elapsed) + " s");
  return "200 frames, worst relative error " + fmt(worst) + ", " + fmt(elapsed) + " s";
}

// ---------------------------------------------------------------------------
// 4. Backprop against central finite differences.

std::string criterion_gradient_oracle() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> units(1, 8);
  std::uniform_int_distribution<std::size_t> hidden_count(1, 3);
  const double step = 1e-5;
  double worst = 0.0;

  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::size_t> sizes{units(rng)};
    const std::size_t hidden = hidden_count(rng);
    for (std::size_t h = 0; h < hidden; ++h) sizes.push_back(units(rng));
    sizes.push_back(1);

    Network net = Network::random_init(sizes, 9000 + static_cast<std::uint64_t>(trial));
    std::mt19937_64 brng(500 + static_cast<std::uint64_t>(trial));
    std::normal_distribution<double> bias_gauss(0.0, 0.5);
    for (auto& b : net.biases)
      for (double& v : b) v = bias_gauss(brng);

    Sample s;
    s.features.resize(sizes.front());
    for (double& v : s.features) v = gauss(rng);
    s.target = trial % 2 ? 1.0 : 0.0;

    const auto loss = [&net, &s]() {
      const double a = forward(net, s.features).output();
      const double d = s.target - a;
      return 0.5 * d * d;
    };
    const Gradients grads = backprop(net, forward(net, s.features), s.target);
    for (std::size_t l = 0; l < net.depth(); ++l) {
      const auto check_param = [&](double& param, double analytic) {
        const double keep = param;
        param = keep + step;
        const double up = loss();
        param = keep - step;
        const double down = loss();
        param = keep;
        const double numeric = (up - down) / (2.0 * step);
        const double err = std::abs(numeric - analytic);
        const double scale = std::max(std::abs(numeric), std::abs(analytic));
        if (scale > 0.0) worst = std::max(worst, err / scale);
        if (err <= 1e-8) return;
        expect(err / scale <= 1e-5, "gradient component off by relative " + fmt(err / scale));
      };
      for (std::size_t i = 0; i < net.weights[l].data.size(); ++i)
        check_param(net.weights[l].data[i], grads.weights[l].data[i]);
      for (std::size_t i = 0; i < net.biases[l].size(); ++i)
        check_param(net.biases[l][i], grads.biases[l][i]);
    }
  }
  const double elapsed = seconds_since(start);
  expect(elapsed < 30.0, "took " + fmt(elapsed) + " s");
  return "50 networks, worst relative error " + fmt(worst) + ", " + fmt(elapsed) + " s";
}

// ---------------------------------------------------------------------------
// 5. Entropy-weighting properties and the composed WMFCC oracle.

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> amp(-3.0, 3.0);
  Matrix m(rows, cols);
  for (double& v : m.data) v = amp(rng);
  return m;
}

// Independent straight-line evaluation of the normalize / entropy / weight /
// reweight / average chain.
std::vector<double> wmfcc_oracle(const Matrix& m) {
  const std::size_t n = m.rows, d = m.cols;
  Matrix norm(n, d);
  std::vector<bool> constant(d, false);
  for (std::size_t j = 0; j < d; ++j) {
    double lo = m(0, j), hi = m(0, j);
    for (std::size_t i = 0; i < n; ++i) {
      lo = std::min(lo, m(i, j));
      hi = std::max(hi, m(i, j));
    }
    if (hi == lo) {
      constant[j] = true;
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) norm(i, j) = (hi - m(i, j)) / (hi - lo);
  }
  std::vector<double> entropy(d, 1.0);
  for (std::size_t j = 0; j < d; ++j) {
    if (constant[j]) continue;
    double colsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) colsum += norm(i, j);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double y = norm(i, j) / colsum;
      if (y > 0.0) acc += y * std::log(y);
    }
    entropy[j] = -acc / std::log(static_cast<double>(n));
  }
  double denom = 0.0;
  for (double e : entropy) denom += 1.0 - e;
  std::vector<double> weights(d, 1.0 / static_cast<double>(d));
  if (denom > 0.0)
    for (std::size_t j = 0; j < d; ++j) weights[j] = (1.0 - entropy[j]) / denom;
  std::vector<double> vp(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) vp[j] += weights[j] * m(i, j);
  for (double& v : vp) v /= static_cast<double>(n);
  return vp;
}

std::string criterion_entropy_weighting() {
  for (std::uint32_t trial = 0; trial < 100; ++trial) {
    const Matrix m = random_matrix(5 + trial % 40, 1 + trial % 19, 100 + trial);
    const WeightVector w = compute_weights(m);
    double sum = 0.0;
    for (double v : w.weights) {
      expect(v >= 0.0, "negative weight");
      sum += v;
    }
    expect(std::abs(sum - 1.0) < 1e-12, "weight sum " + fmt(sum));
  }

  {
    Matrix m = random_matrix(20, 6, 901);
    for (std::size_t i = 0; i < m.rows; ++i) m(i, 3) = 7.5;  // constant column
    const WeightVector w = compute_weights(m);
    expect(w.weights[3] == 0.0, "constant column weight " + fmt(w.weights[3]));
  }

  {
    CepstraMatrix ceps;
    ceps.values = random_matrix(30, 9, 902);
    const Voiceprint a = make_voiceprint(ceps, {"a", Label::Pd, Vowel::A});
    CepstraMatrix reversed;
    reversed.values = Matrix(30, 9);
    for (std::size_t i = 0; i < 30; ++i)
      for (std::size_t j = 0; j < 9; ++j)
        reversed.values(i, j) = ceps.values(29 - i, j);
    const Voiceprint b = make_voiceprint(reversed, {"a", Label::Pd, Vowel::A});
    for (std::size_t j = 0; j < 9; ++j)
      expect(std::abs(a.values[j] - b.values[j]) < 1e-12, "permutation changed voiceprint");
  }

  double worst = 0.0;
  for (std::uint32_t trial = 0; trial < 20; ++trial) {
    CepstraMatrix ceps;
    ceps.values = random_matrix(10 + trial, 4 + trial % 16, 3000 + trial);
    const Voiceprint got = make_voiceprint(ceps, {"x", Label::Healthy, Vowel::U});
    const std::vector<double> want = wmfcc_oracle(ceps.values);
    for (std::size_t j = 0; j < want.size(); ++j)
      worst = std::max(worst, std::abs(got.values[j] - want[j]));
  }
  expect(worst <= 1e-10, "composed oracle error " + fmt(worst));
  return "sums, degenerate columns, permutation, composed oracle (worst " + fmt(worst) +
         ")";
}

// ---------------------------------------------------------------------------
// 6. MBGD schedule and the full-batch reduction.

std::string criterion_mbgd_schedule() {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Sample> data;
  for (int i = 0; i < 120; ++i)
    data.push_back({{gauss(rng), gauss(rng)}, i % 2 ? 1.0 : 0.0});

  Network net = Network::random_init({2, 6, 1}, 3);
  TrainConfig cfg;
  cfg.batch_size = 2;
  cfg.epochs = 2;
  cfg.learning_rate = 0.1;
  cfg.seed = 3;
  const TrainTrace trace = train(net, data, cfg);
  for (std::size_t u : trace.epoch_updates)
    expect(u == 60, "updates per epoch " + std::to_string(u));

  Network full = Network::random_init({2, 6, 1}, 4);
  Network manual = full;
  TrainConfig full_cfg;
  full_cfg.batch_size = data.size();
  full_cfg.epochs = 3;
  full_cfg.learning_rate = 0.2;
  full_cfg.shuffle = false;
  train(full, data, full_cfg);
  for (int epoch = 0; epoch < 3; ++epoch) mbgd_step(manual, data, 0.2);
  for (std::size_t l = 0; l < full.depth(); ++l) {
    expect(full.weights[l].data == manual.weights[l].data,
           "full-batch weights differ at layer " + std::to_string(l));
    expect(full.biases[l] == manual.biases[l],
           "full-batch biases differ at layer " + std::to_string(l));
  }
  return "60 updates per epoch at m=2; m=n equals full-batch GD bit for bit";
}

// ---------------------------------------------------------------------------
// 7. End-to-end synthetic experiment.

std::string criterion_end_to_end() {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<std::size_t> hidden{32, 16};
  double min_accuracy = 1.0;
  std::string per_seed;

  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    std::mt19937_64 master(seed);
    std::vector<Voiceprint> voiceprints;
    const FrontendConfig frontend;  // 19 coefficients, c1 dropped

    for (const Label label : {Label::Healthy, Label::Pd}) {
      const AcousticStats stats = acoustic_stats(label, Sex::Male);
      for (int subject = 0; subject < 20; ++subject) {
        SynthParams p;
        p.f0_hz = stats.f0_mean;
        p.jitter_pct = stats.jitter_mean;
        p.shimmer_pct = stats.shimmer_mean;
        p.hnr_db = stats.hnr_mean;
        p.duration_s = 2.0;
        p.sample_rate = 16000.0;
        p.formants = vowel_formants(Vowel::U);
        p.seed = master();
        const CepstraMatrix ceps = extract_mfcc(synth_vowel(p), frontend);
        voiceprints.push_back(make_voiceprint(
            ceps, {to_string(label) + std::to_string(subject), label, Vowel::U}));
      }
    }
    expect(voiceprints.front().values.size() == 19, "voiceprint dimension");

    TrainConfig cfg;
    cfg.batch_size = 2;
    cfg.learning_rate = 0.3;
    cfg.epochs = 1500;
    cfg.seed = seed;
    const FoldPlan plan = make_folds(voiceprints.size(), voiceprints.size(), seed);
    const MetricsReport r = run_cross_validation(voiceprints, hidden, cfg, plan);
    expect(r.folds.size() == 40, "leave-one-out fold count");
    min_accuracy = std::min(min_accuracy, r.accuracy);
    per_seed += (per_seed.empty() ? "" : "/") + fmt(r.accuracy);
  }
  const double elapsed = seconds_since(start);
  expect(min_accuracy >= 0.85, "minimum pooled accuracy " + fmt(min_accuracy));
  expect(elapsed < 120.0, "took " + fmt(elapsed) + " s");
  return "pooled accuracy " + per_seed + " over seeds 1/2/3, " + fmt(elapsed) + " s";
}

// ---------------------------------------------------------------------------
// 8. CLI determinism: every command rerun with identical inputs and seed
// yields byte-identical outputs. Uses the real binary when PDVOICE_CLI is
// set, the in-process command functions otherwise.

struct CliRunner {
  std::string binary;  // empty: in-process

  void synth(const std::filesystem::path& out_dir) const {
    if (!binary.empty()) {
      run(binary + " synth --out " + out_dir.string() +
          " --seed 7 --subjects-pd 4 --subjects-healthy 4 --vowels u" +
          " --duration-s 0.4 --sample-rate 8000");
      return;
    }
    cli::SynthOptions opt;
    opt.cfg.seed = 7;
    opt.pd_subjects = 4;
    opt.healthy_subjects = 4;
    opt.vowels = {Vowel::U};
    opt.duration_s = 0.4;
    opt.sample_rate = 8000.0;
    opt.out_dir = out_dir;
    std::ostringstream sink, esink;
    cli::cmd_synth(opt, sink, esink);
  }

  void extract(const std::filesystem::path& manifest,
               const std::filesystem::path& out_file) const {
    if (!binary.empty()) {
      run(binary + " extract " + manifest.string() + " --out " + out_file.string() +
          " --seed 7");
      return;
    }
    cli::ExtractOptions opt;
    opt.cfg.seed = 7;
    opt.manifest = manifest;
    opt.out_file = out_file;
    std::ostringstream sink, esink;
    cli::cmd_extract(opt, sink, esink);
  }

  void train(const std::filesystem::path& features,
             const std::filesystem::path& model) const {
    if (!binary.empty()) {
      run(binary + " train " + features.string() + " --out " + model.string() +
          " --config " + config_path + " --seed 7");
      return;
    }
    cli::TrainOptions opt;
    opt.cfg = small_cfg();
    opt.features = features;
    opt.model_out = model;
    std::ostringstream sink, esink;
    cli::cmd_train(opt, sink, esink);
  }

  void eval(const std::filesystem::path& features,
            const std::filesystem::path& out_dir) const {
    if (!binary.empty()) {
      run(binary + " eval " + features.string() + " --out " + out_dir.string() +
          " --config " + config_path + " --seed 7 --folds 4");
      return;
    }
    cli::EvalOptions opt;
    opt.cfg = small_cfg();
    opt.cfg.eval_folds = 4;
    opt.features = features;
    opt.out_dir = out_dir;
    std::ostringstream sink, esink;
    cli::cmd_eval(opt, sink, esink);
  }

  void sweep(const std::filesystem::path& features,
             const std::filesystem::path& out_dir) const {
    if (!binary.empty()) {
      run(binary + " sweep " + features.string() + " --out " + out_dir.string() +
          " --config " + config_path + " --seed 7 --folds 4 --subsets '1;2,3'");
      return;
    }
    cli::SweepOptions opt;
    opt.cfg = small_cfg();
    opt.cfg.eval_folds = 4;
    opt.cfg.sweep_subsets = {{1}, {2, 3}};
    opt.features = features;
    opt.out_dir = out_dir;
    std::ostringstream sink, esink;
    cli::cmd_sweep(opt, sink, esink);
  }

  std::string config_path;

  static cli::ExperimentConfig small_cfg() {
    cli::ExperimentConfig cfg;
    cfg.seed = 7;
    cfg.train.epochs = 40;
    cfg.train.learning_rate = 0.5;
    return cfg;
  }

  static void run(const std::string& command) {
    const std::string full = command + " >/dev/null 2>&1";
    const int rc = std::system(full.c_str());
    expect(rc == 0, "command failed: " + command);
  }
};

void expect_identical(const std::filesystem::path& a, const std::filesystem::path& b) {
  expect(std::filesystem::exists(a) && std::filesystem::exists(b),
         "missing output " + a.string());
  expect(slurp(a) == slurp(b), "outputs differ: " + a.string() + " vs " + b.string());
}

std::string criterion_cli_determinism() {
  CliRunner runner;
  if (const char* env = std::getenv("PDVOICE_CLI")) runner.binary = env;
  const auto dir = fresh_dir("cli");

  // Shared config file so the binary path and the in-process path use the
  // same training settings.
  runner.config_path = (dir / "exp.cfg").string();
  {
    std::ofstream cfg(runner.config_path);
    cfg << "net.epochs = 40\nnet.learning_rate = 0.5\n";
  }

  runner.synth(dir / "synth1");
  runner.synth(dir / "synth2");
  const DatasetManifest manifest = load_manifest(dir / "synth1" / "manifest.csv");
  expect(manifest.entries.size() == 8, "clip count");
  expect_identical(dir / "synth1" / "manifest.csv", dir / "synth2" / "manifest.csv");
  for (const ManifestEntry& e : manifest.entries)
    expect_identical(dir / "synth1" / e.source, dir / "synth2" / e.source);

  runner.extract(dir / "synth1" / "manifest.csv", dir / "features1.csv");
  runner.extract(dir / "synth1" / "manifest.csv", dir / "features2.csv");
  expect_identical(dir / "features1.csv", dir / "features2.csv");

  runner.train(dir / "features1.csv", dir / "model1.txt");
  runner.train(dir / "features1.csv", dir / "model2.txt");
  expect_identical(dir / "model1.txt", dir / "model2.txt");

  runner.eval(dir / "features1.csv", dir / "eval1");
  runner.eval(dir / "features1.csv", dir / "eval2");
  expect_identical(dir / "eval1" / "eval_report.txt", dir / "eval2" / "eval_report.txt");
  expect_identical(dir / "eval1" / "eval_report.rec", dir / "eval2" / "eval_report.rec");

  runner.sweep(dir / "features1.csv", dir / "sweep1");
  runner.sweep(dir / "features1.csv", dir / "sweep2");
  expect_identical(dir / "sweep1" / "sweep_report.txt", dir / "sweep2" / "sweep_report.txt");
  expect_identical(dir / "sweep1" / "sweep_report.rec", dir / "sweep2" / "sweep_report.rec");

  return std::string("synth/extract/train/eval/sweep byte-identical on rerun (") +
         (runner.binary.empty() ? "in-process" : "via binary") + ")";
}

// ---------------------------------------------------------------------------
// 9. WAV conformance.

void put16(std::vector<unsigned char>& b, std::uint16_t v) {
  b.push_back(v & 0xFF);
  b.push_back((v >> 8) & 0xFF);
}

void put32(std::vector<unsigned char>& b, std::uint32_t v) {
  put16(b, v & 0xFFFF);
  put16(b, v >> 16);
}

void put_tag(std::vector<unsigned char>& b, const char* tag) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<unsigned char>(tag[i]));
}

std::vector<unsigned char> wav_bytes(std::uint16_t channels, std::uint16_t bits,
                                     const std::vector<unsigned char>& data,
                                     std::uint16_t format_tag = 1) {
  std::vector<unsigned char> b;
  put_tag(b, "RIFF");
  put32(b, 36 + static_cast<std::uint32_t>(data.size()));
  put_tag(b, "WAVE");
  put_tag(b, "fmt ");
  put32(b, 16);
  put16(b, format_tag);
  put16(b, channels);
  put32(b, 16000);
  put32(b, 16000u * channels * bits / 8);
  put16(b, static_cast<std::uint16_t>(channels * bits / 8));
  put16(b, bits);
  put_tag(b, "data");
  put32(b, static_cast<std::uint32_t>(data.size()));
  b.insert(b.end(), data.begin(), data.end());
  return b;
}

void write_file(const std::filesystem::path& p, const std::vector<unsigned char>& bytes) {
  std::ofstream out(p, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

std::string criterion_wav_conformance() {
  const auto dir = fresh_dir("wav");

  {  // PCM-16 mono, exact values
    std::vector<unsigned char> data;
    const std::vector<std::int16_t> samples{0, 1, -1, 32767, -32768, 4096, -9999, 123};
    for (std::int16_t s : samples) put16(data, static_cast<std::uint16_t>(s));
    write_file(dir / "m16.wav", wav_bytes(1, 16, data));
    const AudioClip clip = load_wav(dir / "m16.wav");
    expect(clip.samples.size() == samples.size(), "PCM-16 sample count");
    for (std::size_t i = 0; i < samples.size(); ++i)
      expect(clip.samples[i] == static_cast<double>(samples[i]) / 32768.0,
             "PCM-16 sample " + std::to_string(i));
  }
  {  // PCM-16 stereo averaging
    std::vector<unsigned char> data;
    put16(data, static_cast<std::uint16_t>(static_cast<std::int16_t>(2000)));
    put16(data, static_cast<std::uint16_t>(static_cast<std::int16_t>(-2000)));
    put16(data, static_cast<std::uint16_t>(static_cast<std::int16_t>(500)));
    put16(data, static_cast<std::uint16_t>(static_cast<std::int16_t>(700)));
    write_file(dir / "s16.wav", wav_bytes(2, 16, data));
    const AudioClip clip = load_wav(dir / "s16.wav");
    expect(clip.samples.size() == 2, "stereo frame count");
    expect(clip.samples[0] == 0.0, "stereo average of mirrored channels");
    expect(clip.samples[1] == (500.0 + 700.0) / 2.0 / 32768.0, "stereo average");
  }
  {  // PCM-24 exact scaling
    std::vector<unsigned char> data{0xFF, 0xFF, 0x7F, 0x00, 0x00, 0x80, 0x00, 0x00, 0x00};
    write_file(dir / "m24.wav", wav_bytes(1, 24, data));
    const AudioClip clip = load_wav(dir / "m24.wav");
    expect(clip.samples[0] == 8388607.0 / 8388608.0, "max positive 24-bit value");
    expect(clip.samples[1] == -1.0, "min 24-bit value");
    expect(clip.samples[2] == 0.0, "zero 24-bit value");
  }

  const auto expect_rejected = [&dir](const char* name,
                                      const std::vector<unsigned char>& bytes,
                                      const std::string& needle) {
    const auto p = dir / name;
    write_file(p, bytes);
    try {
      load_wav(p);
    } catch (const std::exception& e) {
      const std::string what = e.what();
      expect(what.find(needle) != std::string::npos,
             std::string(name) + ": message '" + what + "' lacks '" + needle + "'");
      expect(what.find("offset") != std::string::npos,
             std::string(name) + ": no byte offset in '" + what + "'");
      return;
    }
    expect(false, std::string(name) + " was accepted");
  };

  auto bad_magic = wav_bytes(1, 16, {0, 0});
  bad_magic[0] = 'X';
  expect_rejected("bad_magic.wav", bad_magic, "RIFF");

  expect_rejected("float.wav", wav_bytes(1, 16, {0, 0}, 3), "format tag 3");

  auto truncated = wav_bytes(1, 16, {0, 0, 0, 0});
  truncated.resize(truncated.size() - 3);
  expect_rejected("truncated.wav", truncated, "past end of file");

  expect_rejected("misaligned.wav", wav_bytes(1, 16, {0, 0, 0}), "not a multiple");

  return "PCM-16 mono/stereo and PCM-24 exact; malformed fixtures rejected with offsets";
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<std::string()> run;
  };
  const std::vector<Criterion> criteria{
      {"1 metric-formula reproduction", criterion_metric_formulas},
      {"2 mel anchor", criterion_mel_anchor},
      {"3 spectrum oracle", criterion_spectrum_oracle},
      {"4 gradient oracle", criterion_gradient_oracle},
      {"5 entropy weighting", criterion_entropy_weighting},
      {"6 MBGD schedule", criterion_mbgd_schedule},
      {"7 end-to-end synthetic experiment", criterion_end_to_end},
      {"8 CLI determinism", criterion_cli_determinism},
      {"9 WAV conformance", criterion_wav_conformance},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    try {
      const std::string detail = c.run();
      std::printf("[PASS] %s: %s\n", c.name, detail.c_str());
    } catch (const Failure& f) {
      ++failures;
      std::printf("[FAIL] %s: %s\n", c.name, f.what.c_str());
    } catch (const std::exception& e) {
      ++failures;
      std::printf("[FAIL] %s: unexpected error: %s\n", c.name, e.what());
    }
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
