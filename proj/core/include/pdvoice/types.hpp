#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pdvoice {

// Diagnostic class of an utterance. The positive class throughout the
// toolkit is Healthy (a "true positive" is a healthy subject classified
// as healthy).
enum class Label { Pd, Healthy, Unknown };

enum class Vowel { A, O, U, Other };

std::string to_string(Label label);
std::string to_string(Vowel vowel);
Label parse_label(const std::string& text);
Vowel parse_vowel(const std::string& text);

// Mono audio buffer. Samples are dimensionless amplitudes, nominally in
// [-1, 1]; sample_rate is in Hz.
struct AudioClip {
  std::vector<double> samples;
  double sample_rate = 0.0;
};

// Throws std::invalid_argument if the clip is empty, the sample rate is
// not positive, or any sample is NaN/Inf.
void validate(const AudioClip& clip);

// splitmix64 of seed xor salt; used to derive independent per-fold and
// per-clip seeds from one master seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace pdvoice
