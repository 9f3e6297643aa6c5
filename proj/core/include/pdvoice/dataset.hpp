#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "pdvoice/network.hpp"
#include "pdvoice/types.hpp"
#include "pdvoice/weighting.hpp"

namespace pdvoice {

// One dataset row: where the audio comes from (a WAV path relative to the
// manifest, or an inline "synth:" descriptor) and its ground truth.
struct ManifestEntry {
  std::string subject_id;
  Vowel vowel = Vowel::Other;
  Label label = Label::Unknown;
  std::string source;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  std::string provenance;
};

void save_manifest(const std::filesystem::path& path, const DatasetManifest& m);
DatasetManifest load_manifest(const std::filesystem::path& path);

// Loads the entry's audio: a WAV file resolved against base_dir, or a
// "synth:f0=..,jitter=..,..." descriptor rendered on the fly.
AudioClip resolve_entry(const ManifestEntry& entry,
                        const std::filesystem::path& base_dir);

// Comma-separated feature store: subject_id, vowel, label, then the D
// coefficient values at full precision. Save/load round-trips every value
// bit for bit.
void save_features(const std::filesystem::path& path,
                   std::span<const Voiceprint> voiceprints);
std::vector<Voiceprint> load_features(const std::filesystem::path& path);

// Self-describing text model file: layer sizes, row-major weight matrices,
// biases and an echo of the training configuration. Value-exact round trip.
void save_model(const std::filesystem::path& path, const Network& net,
                const TrainConfig& cfg);

struct LoadedModel {
  Network net;
  std::vector<std::pair<std::string, std::string>> config_echo;
};

LoadedModel load_model(const std::filesystem::path& path);

}  // namespace pdvoice
