#include "pdvoice/synth.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace pdvoice {

namespace {

// Half width of the windowed-sinc pulse kernel, in samples. Pulses are
// placed at fractional sample positions so the pulse train stays harmonic
// at the exact requested f0 instead of a nearby integer-period one.
constexpr int kPulseHalfWidth = 32;

void add_pulse(std::vector<double>& x, double center, double amplitude) {
  const long lo = std::max(0L, static_cast<long>(std::ceil(center)) - kPulseHalfWidth);
  const long hi = std::min(static_cast<long>(x.size()) - 1,
                           static_cast<long>(std::floor(center)) + kPulseHalfWidth);
  for (long k = lo; k <= hi; ++k) {
    const double u = static_cast<double>(k) - center;
    const double w =
        0.5 * (1.0 + std::cos(std::numbers::pi * u / static_cast<double>(kPulseHalfWidth)));
    const double s = std::abs(u) < 1e-12
                         ? 1.0
                         : std::sin(std::numbers::pi * u) / (std::numbers::pi * u);
    x[static_cast<std::size_t>(k)] += amplitude * w * s;
  }
}

// Two-pole resonator with unity gain at its center frequency, applied in
// place.
void apply_resonator(std::vector<double>& x, const Formant& formant, double sample_rate) {
  const double r = std::exp(-std::numbers::pi * formant.bandwidth_hz / sample_rate);
  const double theta = 2.0 * std::numbers::pi * formant.center_hz / sample_rate;
  const double a1 = 2.0 * r * std::cos(theta);
  const double a2 = -r * r;

  // Gain of the denominator at the center frequency.
  const std::complex<double> z1 = std::polar(1.0, -theta);
  const std::complex<double> denom = 1.0 - a1 * z1 + (r * r) * z1 * z1;
  const double g = std::abs(denom);

  double y1 = 0.0, y2 = 0.0;
  for (double& v : x) {
    const double y = g * v + a1 * y1 + a2 * y2;
    y2 = y1;
    y1 = y;
    v = y;
  }
}

double clamped_normal(std::mt19937_64& rng, std::normal_distribution<double>& gauss,
                      double mean, double sd, double lo, double hi) {
  return std::clamp(mean + sd * gauss(rng), lo, hi);
}

}  // namespace

AudioClip synth_vowel(const SynthParams& p) {
  if (!(p.f0_hz > 0.0)) throw std::invalid_argument("synth_vowel: f0 must be positive");
  if (!(p.duration_s > 0.0))
    throw std::invalid_argument("synth_vowel: duration must be positive");
  if (!(p.sample_rate > 0.0))
    throw std::invalid_argument("synth_vowel: sample rate must be positive");
  if (p.jitter_pct < 0.0 || p.shimmer_pct < 0.0)
    throw std::invalid_argument("synth_vowel: jitter and shimmer must be non-negative");

  const std::size_t n =
      static_cast<std::size_t>(std::lround(p.duration_s * p.sample_rate));
  if (n == 0) throw std::invalid_argument("synth_vowel: duration shorter than one sample");

  std::mt19937_64 rng(p.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<double> signal(n, 0.0);
  const double base_period = p.sample_rate / p.f0_hz;
  double t = 0.0;
  while (t < static_cast<double>(n)) {
    const double amplitude = 1.0 + p.shimmer_pct / 100.0 * gauss(rng);
    add_pulse(signal, t, amplitude);
    const double period = base_period * (1.0 + p.jitter_pct / 100.0 * gauss(rng));
    t += std::max(period, 1.0);
  }

  for (const Formant& formant : p.formants) apply_resonator(signal, formant, p.sample_rate);

  if (std::isfinite(p.hnr_db)) {
    double harmonic_power = 0.0;
    for (double v : signal) harmonic_power += v * v;
    harmonic_power /= static_cast<double>(n);
    const double noise_sd =
        std::sqrt(harmonic_power / std::pow(10.0, p.hnr_db / 10.0));
    for (double& v : signal) v += noise_sd * gauss(rng);
  }

  double peak = 0.0;
  for (double v : signal) peak = std::max(peak, std::abs(v));
  if (peak > 0.0) {
    const double scale = 0.9 / peak;
    for (double& v : signal) v *= scale;
  }
  return AudioClip{std::move(signal), p.sample_rate};
}

std::vector<Formant> vowel_formants(Vowel vowel) {
  switch (vowel) {
    case Vowel::A: return {{730.0, 80.0}, {1090.0, 90.0}, {2440.0, 120.0}};
    case Vowel::O: return {{570.0, 80.0}, {840.0, 90.0}, {2410.0, 120.0}};
    case Vowel::U: return {{300.0, 70.0}, {870.0, 90.0}, {2240.0, 120.0}};
    case Vowel::Other: return {{500.0, 100.0}, {1500.0, 120.0}, {2500.0, 150.0}};
  }
  return {};
}

AcousticStats acoustic_stats(Label group, Sex sex) {
  if (group == Label::Healthy && sex == Sex::Male)
    return {128.4, 17.6, 0.04, 0.36, 0.26, 0.10, 14.8, 4.6};
  if (group == Label::Healthy && sex == Sex::Female)
    return {205.4, 37.6, 1.16, 1.15, 0.35, 0.46, 11.0, 7.1};
  if (group == Label::Pd && sex == Sex::Male)
    return {120.5, 20.8, 0.94, 0.76, 0.37, 0.16, 10.4, 3.7};
  if (group == Label::Pd && sex == Sex::Female)
    return {193.8, 16.4, 1.94, 1.30, 0.68, 0.91, 8.1, 5.1};
  throw std::invalid_argument("acoustic_stats: no statistics for label " +
                              to_string(group));
}

SyntheticDataset build_synthetic_dataset(const DatasetSpec& spec) {
  if (spec.pd_subjects + spec.healthy_subjects == 0)
    throw std::invalid_argument("build_synthetic_dataset: no subjects requested");
  if (spec.vowels.empty())
    throw std::invalid_argument("build_synthetic_dataset: no vowels requested");

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  SyntheticDataset out;
  out.manifest.provenance =
      "synthetic sustained vowels, seed " + std::to_string(spec.seed);

  struct GroupPlan {
    Label label;
    std::size_t count;
    std::size_t females;  // female/male mix mirrors the recorded cohorts
    const char* prefix;
  };
  const GroupPlan groups[] = {
      {Label::Healthy, spec.healthy_subjects,
       static_cast<std::size_t>(std::lround(static_cast<double>(spec.healthy_subjects) * 0.5)),
       "H"},
      {Label::Pd, spec.pd_subjects,
       static_cast<std::size_t>(std::lround(static_cast<double>(spec.pd_subjects) * 0.3)),
       "P"},
  };

  for (const GroupPlan& group : groups) {
    for (std::size_t s = 0; s < group.count; ++s) {
      const Sex sex = s < group.females ? Sex::Female : Sex::Male;
      const AcousticStats stats = acoustic_stats(group.label, sex);

      SynthParams base;
      base.f0_hz = clamped_normal(rng, gauss, stats.f0_mean, stats.f0_sd, 60.0, 400.0);
      base.jitter_pct =
          clamped_normal(rng, gauss, stats.jitter_mean, stats.jitter_sd, 0.0, 8.0);
      base.shimmer_pct =
          clamped_normal(rng, gauss, stats.shimmer_mean, stats.shimmer_sd, 0.0, 8.0);
      base.hnr_db = clamped_normal(rng, gauss, stats.hnr_mean, stats.hnr_sd, 0.5, 30.0);
      base.duration_s = spec.duration_s;
      base.sample_rate = spec.sample_rate;

      char id[32];
      std::snprintf(id, sizeof id, "%s%02zu", group.prefix, s + 1);

      for (Vowel vowel : spec.vowels) {
        SynthParams params = base;
        params.formants = vowel_formants(vowel);
        params.seed = rng();

        ManifestEntry entry;
        entry.subject_id = id;
        entry.vowel = vowel;
        entry.label = group.label;
        entry.source = std::string(id) + "_" + to_string(vowel) + ".wav";
        out.manifest.entries.push_back(std::move(entry));
        out.clips.push_back(synth_vowel(params));
      }
    }
  }
  return out;
}

}  // namespace pdvoice
