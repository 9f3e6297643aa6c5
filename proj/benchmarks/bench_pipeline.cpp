#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "pdvoice/evaluation.hpp"
#include "pdvoice/frontend.hpp"
#include "pdvoice/synth.hpp"
#include "pdvoice/weighting.hpp"

using namespace pdvoice;

namespace {

AudioClip one_second_vowel() {
  SynthParams p;
  p.f0_hz = 124.0;
  p.jitter_pct = 0.5;
  p.shimmer_pct = 0.3;
  p.hnr_db = 12.0;
  p.duration_s = 1.0;
  p.sample_rate = 16000.0;
  p.formants = vowel_formants(Vowel::U);
  p.seed = 1;
  return synth_vowel(p);
}

}  // namespace

static void SynthVowel(benchmark::State& state) {
  SynthParams p;
  p.f0_hz = 124.0;
  p.jitter_pct = 0.5;
  p.hnr_db = 12.0;
  p.duration_s = static_cast<double>(state.range(0)) / 10.0;
  p.sample_rate = 16000.0;
  p.formants = vowel_formants(Vowel::A);
  for (auto _ : state) {
    p.seed++;
    benchmark::DoNotOptimize(synth_vowel(p));
  }
}
BENCHMARK(SynthVowel)->Arg(5)->Arg(10)->Arg(20);

static void PowerSpectrum(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::vector<double> frame(n);
  for (double& v : frame) v = amp(rng);
  for (auto _ : state) benchmark::DoNotOptimize(power_spectrum(frame, n));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(PowerSpectrum)->RangeMultiplier(2)->Range(64, 2048)->Complexity();

static void ExtractMfcc(benchmark::State& state) {
  const AudioClip clip = one_second_vowel();
  const FrontendConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(extract_mfcc(clip, cfg));
}
BENCHMARK(ExtractMfcc);

static void MakeVoiceprint(benchmark::State& state) {
  const CepstraMatrix ceps = extract_mfcc(one_second_vowel(), FrontendConfig{});
  const UtteranceInfo info{"bench", Label::Pd, Vowel::U};
  for (auto _ : state) benchmark::DoNotOptimize(make_voiceprint(ceps, info));
}
BENCHMARK(MakeVoiceprint);

static void TrainEpoch(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Sample> data;
  for (int i = 0; i < 120; ++i) {
    Sample s;
    s.features.resize(19);
    for (double& v : s.features) v = gauss(rng);
    s.target = i % 2 ? 1.0 : 0.0;
    data.push_back(std::move(s));
  }
  TrainConfig cfg;
  cfg.batch_size = 2;
  cfg.epochs = 1;
  cfg.seed = 4;
  for (auto _ : state) {
    Network net = Network::random_init({19, 32, 16, 1}, 4);
    train(net, data, cfg);
    benchmark::DoNotOptimize(net);
  }
}
BENCHMARK(TrainEpoch);

BENCHMARK_MAIN();
