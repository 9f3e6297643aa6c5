#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "pdvoice/dataset.hpp"
#include "pdvoice/types.hpp"

namespace pdvoice {

struct Formant {
  double center_hz = 0.0;
  double bandwidth_hz = 0.0;
};

// Parameters of one synthetic sustained vowel. hnr_db = +inf disables the
// noise component entirely.
struct SynthParams {
  double f0_hz = 120.0;
  double jitter_pct = 0.0;   // cycle-to-cycle period perturbation, percent
  double shimmer_pct = 0.0;  // cycle-to-cycle amplitude perturbation, percent
  double hnr_db = std::numeric_limits<double>::infinity();
  double duration_s = 2.0;
  double sample_rate = 16000.0;
  std::vector<Formant> formants;
  std::uint64_t seed = 0;
};

// Renders a band-limited glottal pulse train at f0 with seeded per-cycle
// jitter and shimmer, shaped by the formant resonators, plus white noise
// scaled to the requested harmonics-to-noise ratio. Peak normalized to 0.9.
// Deterministic per seed.
AudioClip synth_vowel(const SynthParams& p);

std::vector<Formant> vowel_formants(Vowel vowel);

enum class Sex { Male, Female };

// Group acoustics (mean and standard deviation) of the four clinical
// populations: fundamental frequency, jitter, shimmer and HNR.
struct AcousticStats {
  double f0_mean, f0_sd;
  double jitter_mean, jitter_sd;
  double shimmer_mean, shimmer_sd;
  double hnr_mean, hnr_sd;
};

AcousticStats acoustic_stats(Label group, Sex sex);

struct DatasetSpec {
  std::size_t pd_subjects = 20;
  std::size_t healthy_subjects = 20;
  std::vector<Vowel> vowels = {Vowel::A, Vowel::O, Vowel::U};
  double duration_s = 2.0;
  double sample_rate = 16000.0;
  std::uint64_t seed = 0;
};

struct SyntheticDataset {
  DatasetManifest manifest;            // entries parallel to clips
  std::vector<AudioClip> clips;
};

// Samples per-subject acoustics from the group statistics (truncated at
// physical bounds) and renders one clip per subject and vowel. Fully
// reproducible per seed.
SyntheticDataset build_synthetic_dataset(const DatasetSpec& spec);

}  // namespace pdvoice
