#include "pdvoice/types.hpp"

#include <cmath>
#include <stdexcept>

namespace pdvoice {

std::string to_string(Label label) {
  switch (label) {
    case Label::Pd: return "PD";
    case Label::Healthy: return "HEALTHY";
    case Label::Unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

std::string to_string(Vowel vowel) {
  switch (vowel) {
    case Vowel::A: return "a";
    case Vowel::O: return "o";
    case Vowel::U: return "u";
    case Vowel::Other: return "other";
  }
  return "other";
}

Label parse_label(const std::string& text) {
  if (text == "PD" || text == "pd") return Label::Pd;
  if (text == "HEALTHY" || text == "healthy") return Label::Healthy;
  if (text == "UNKNOWN" || text == "unknown") return Label::Unknown;
  throw std::invalid_argument("unknown label '" + text + "'");
}

Vowel parse_vowel(const std::string& text) {
  if (text == "a" || text == "A") return Vowel::A;
  if (text == "o" || text == "O") return Vowel::O;
  if (text == "u" || text == "U") return Vowel::U;
  if (text == "other") return Vowel::Other;
  throw std::invalid_argument("unknown vowel '" + text + "'");
}

void validate(const AudioClip& clip) {
  if (clip.samples.empty()) throw std::invalid_argument("audio clip has no samples");
  if (!(clip.sample_rate > 0.0))
    throw std::invalid_argument("audio clip sample rate must be positive");
  for (std::size_t i = 0; i < clip.samples.size(); ++i) {
    if (!std::isfinite(clip.samples[i]))
      throw std::invalid_argument("audio clip has non-finite sample at index " +
                                  std::to_string(i));
  }
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed ^ (salt * 0x9E3779B97F4A7C15ULL);
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace pdvoice
