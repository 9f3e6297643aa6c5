#include "pdvoice/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdvoice {

namespace {

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what,
                       std::size_t offset) {
  throw std::runtime_error("load_wav: " + path.string() + ": " + what +
                           " at byte offset " + std::to_string(offset));
}

std::uint16_t read_u16(const std::vector<unsigned char>& b, std::size_t off) {
  return static_cast<std::uint16_t>(b[off] | (b[off + 1] << 8));
}

std::uint32_t read_u32(const std::vector<unsigned char>& b, std::size_t off) {
  return static_cast<std::uint32_t>(b[off]) | (static_cast<std::uint32_t>(b[off + 1]) << 8) |
         (static_cast<std::uint32_t>(b[off + 2]) << 16) |
         (static_cast<std::uint32_t>(b[off + 3]) << 24);
}

bool tag_is(const std::vector<unsigned char>& b, std::size_t off, const char* tag) {
  return b[off] == static_cast<unsigned char>(tag[0]) &&
         b[off + 1] == static_cast<unsigned char>(tag[1]) &&
         b[off + 2] == static_cast<unsigned char>(tag[2]) &&
         b[off + 3] == static_cast<unsigned char>(tag[3]);
}

constexpr std::uint16_t kFormatPcm = 1;

}  // namespace

AudioClip load_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_wav: cannot open " + path.string());
  std::vector<unsigned char> bytes{std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>()};

  if (bytes.size() < 12) fail(path, "file too short for a RIFF header", bytes.size());
  if (!tag_is(bytes, 0, "RIFF")) fail(path, "expected 'RIFF' tag", 0);
  if (!tag_is(bytes, 8, "WAVE")) fail(path, "expected 'WAVE' tag", 8);

  bool have_fmt = false;
  std::uint16_t channels = 0;
  std::uint16_t bits = 0;
  std::uint16_t block_align = 0;
  std::uint32_t sample_rate = 0;
  std::size_t data_offset = 0;
  std::size_t data_size = 0;
  bool have_data = false;

  std::size_t off = 12;
  while (off < bytes.size()) {
    if (off + 8 > bytes.size()) fail(path, "chunk header extends past end of file", off);
    const std::uint32_t chunk_size = read_u32(bytes, off + 4);
    const std::size_t body = off + 8;
    if (body + chunk_size > bytes.size())
      fail(path, "chunk of " + std::to_string(chunk_size) + " bytes extends past end of file",
           off);

    if (tag_is(bytes, off, "fmt ")) {
      if (chunk_size < 16) fail(path, "fmt chunk shorter than 16 bytes", off);
      const std::uint16_t format_tag = read_u16(bytes, body);
      if (format_tag != kFormatPcm)
        fail(path, "unsupported encoding (format tag " + std::to_string(format_tag) +
                       ", only integer PCM is accepted)",
             body);
      channels = read_u16(bytes, body + 2);
      sample_rate = read_u32(bytes, body + 4);
      block_align = read_u16(bytes, body + 12);
      bits = read_u16(bytes, body + 14);
      if (channels != 1 && channels != 2)
        fail(path, "unsupported channel count " + std::to_string(channels), body + 2);
      if (sample_rate == 0) fail(path, "zero sample rate", body + 4);
      if (bits != 16 && bits != 24)
        fail(path, "unsupported bit depth " + std::to_string(bits), body + 14);
      if (block_align != channels * bits / 8)
        fail(path, "block alignment " + std::to_string(block_align) +
                       " inconsistent with " + std::to_string(channels) + "x" +
                       std::to_string(bits) + "-bit frames",
             body + 12);
      have_fmt = true;
    } else if (tag_is(bytes, off, "data")) {
      data_offset = body;
      data_size = chunk_size;
      have_data = true;
    }
    off = body + chunk_size + (chunk_size & 1);  // chunks are word aligned
  }

  if (!have_fmt) fail(path, "missing fmt chunk", bytes.size());
  if (!have_data) fail(path, "missing data chunk", bytes.size());

  if (data_size % block_align != 0)
    fail(path, "data chunk size " + std::to_string(data_size) +
                   " is not a multiple of the " + std::to_string(block_align) +
                   "-byte frame size",
         data_offset);
  const std::size_t num_frames = data_size / block_align;
  if (num_frames == 0) fail(path, "data chunk holds no samples", data_offset);

  AudioClip clip;
  clip.sample_rate = static_cast<double>(sample_rate);
  clip.samples.resize(num_frames);
  const std::size_t bytes_per_sample = bits / 8;
  const double scale = bits == 16 ? 1.0 / 32768.0 : 1.0 / 8388608.0;

  std::size_t pos = data_offset;
  for (std::size_t f = 0; f < num_frames; ++f) {
    double acc = 0.0;
    for (std::uint16_t ch = 0; ch < channels; ++ch) {
      std::int32_t value;
      if (bits == 16) {
        value = static_cast<std::int16_t>(read_u16(bytes, pos));
      } else {
        std::uint32_t raw = static_cast<std::uint32_t>(bytes[pos]) |
                            (static_cast<std::uint32_t>(bytes[pos + 1]) << 8) |
                            (static_cast<std::uint32_t>(bytes[pos + 2]) << 16);
        if (raw & 0x800000u) raw |= 0xFF000000u;  // sign extend
        value = static_cast<std::int32_t>(raw);
      }
      acc += static_cast<double>(value) * scale;
      pos += bytes_per_sample;
    }
    clip.samples[f] = acc / static_cast<double>(channels);
  }
  return clip;
}

void save_wav_pcm16(const std::filesystem::path& path, const AudioClip& clip) {
  validate(clip);
  const std::uint32_t sample_rate = static_cast<std::uint32_t>(std::lround(clip.sample_rate));
  const std::uint32_t data_size = static_cast<std::uint32_t>(clip.samples.size() * 2);

  std::vector<unsigned char> bytes;
  bytes.reserve(44 + data_size);
  auto put_tag = [&bytes](const char* tag) {
    for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<unsigned char>(tag[i]));
  };
  auto put_u32 = [&bytes](std::uint32_t v) {
    bytes.push_back(static_cast<unsigned char>(v & 0xFF));
    bytes.push_back(static_cast<unsigned char>((v >> 8) & 0xFF));
    bytes.push_back(static_cast<unsigned char>((v >> 16) & 0xFF));
    bytes.push_back(static_cast<unsigned char>((v >> 24) & 0xFF));
  };
  auto put_u16 = [&bytes](std::uint16_t v) {
    bytes.push_back(static_cast<unsigned char>(v & 0xFF));
    bytes.push_back(static_cast<unsigned char>((v >> 8) & 0xFF));
  };

  put_tag("RIFF");
  put_u32(36 + data_size);
  put_tag("WAVE");
  put_tag("fmt ");
  put_u32(16);
  put_u16(kFormatPcm);
  put_u16(1);  // mono
  put_u32(sample_rate);
  put_u32(sample_rate * 2);  // bytes per second
  put_u16(2);                // block align
  put_u16(16);
  put_tag("data");
  put_u32(data_size);
  for (double s : clip.samples) {
    const long v = std::lround(s * 32768.0);
    const std::int16_t clipped =
        static_cast<std::int16_t>(std::clamp<long>(v, -32768, 32767));
    put_u16(static_cast<std::uint16_t>(clipped));
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("save_wav_pcm16: cannot open " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("save_wav_pcm16: write failed for " + path.string());
}

}  // namespace pdvoice
