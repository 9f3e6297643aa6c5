#pragma once

#include <filesystem>

#include "pdvoice/types.hpp"

namespace pdvoice {

// Reads a RIFF/WAVE file with integer PCM samples (16 or 24 bit, mono or
// stereo). Stereo channels are averaged to mono; integer samples are scaled
// to [-1, 1). Malformed or unsupported files are rejected with a diagnostic
// naming the byte offset.
AudioClip load_wav(const std::filesystem::path& path);

// Writes a mono 16-bit PCM file. Samples outside [-1, 1) are clipped.
void save_wav_pcm16(const std::filesystem::path& path, const AudioClip& clip);

}  // namespace pdvoice
