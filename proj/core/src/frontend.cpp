#include "pdvoice/frontend.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pdvoice {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Iterative radix-2 decimation-in-time FFT, in place.
void fft_inplace(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> step(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= step;
      }
    }
  }
}

}  // namespace

std::size_t frame_length_samples(const FrontendConfig& cfg, double sample_rate) {
  return static_cast<std::size_t>(std::lround(cfg.frame_len_ms * sample_rate / 1000.0));
}

std::size_t hop_samples(const FrontendConfig& cfg, double sample_rate) {
  return static_cast<std::size_t>(std::lround(cfg.hop_ms * sample_rate / 1000.0));
}

FrontendConfig resolve(FrontendConfig cfg, double sample_rate) {
  if (!(sample_rate > 0.0))
    throw std::invalid_argument("frontend: sample rate must be positive");
  if (!(cfg.preemphasis_k >= 0.0 && cfg.preemphasis_k <= 1.0))
    throw std::invalid_argument("frontend: preemphasis coefficient must lie in [0,1]");
  if (!(cfg.hop_ms > 0.0 && cfg.hop_ms <= cfg.frame_len_ms))
    throw std::invalid_argument("frontend: need 0 < hop_ms <= frame_len_ms");

  const std::size_t frame_len = frame_length_samples(cfg, sample_rate);
  if (frame_len < 2)
    throw std::invalid_argument("frontend: frame shorter than 2 samples");
  if (hop_samples(cfg, sample_rate) == 0)
    throw std::invalid_argument("frontend: hop shorter than 1 sample");

  if (cfg.fft_size == 0) cfg.fft_size = next_power_of_two(frame_len);
  if (!is_power_of_two(cfg.fft_size))
    throw std::invalid_argument("frontend: fft_size must be a power of two");
  if (cfg.fft_size < frame_len)
    throw std::invalid_argument("frontend: fft_size smaller than the frame length");

  if (cfg.fmax_hz == 0.0) cfg.fmax_hz = sample_rate / 2.0;
  if (!(cfg.fmin_hz >= 0.0 && cfg.fmin_hz < cfg.fmax_hz && cfg.fmax_hz <= sample_rate / 2.0))
    throw std::invalid_argument("frontend: need 0 <= fmin < fmax <= sample_rate/2");

  if (cfg.num_filters == 0)
    throw std::invalid_argument("frontend: need at least one mel filter");
  if (cfg.num_ceps == 0)
    throw std::invalid_argument("frontend: need at least one cepstral coefficient");
  const std::size_t highest_coeff = cfg.num_ceps + (cfg.drop_c1 ? 1 : 0);
  if (highest_coeff > cfg.num_filters)
    throw std::invalid_argument(
        "frontend: num_ceps (plus the dropped c1) exceeds the filter count");
  return cfg;
}

std::vector<double> preemphasize(std::span<const double> signal, double k) {
  if (signal.empty()) throw std::invalid_argument("preemphasize: empty signal");
  if (!(k >= 0.0 && k <= 1.0))
    throw std::invalid_argument("preemphasize: coefficient must lie in [0,1]");
  for (std::size_t t = 0; t < signal.size(); ++t) {
    if (!std::isfinite(signal[t]))
      throw std::invalid_argument("preemphasize: non-finite sample at index " +
                                  std::to_string(t));
  }
  std::vector<double> out(signal.size());
  out[0] = signal[0];
  for (std::size_t t = 1; t < signal.size(); ++t) out[t] = signal[t] - k * signal[t - 1];
  return out;
}

std::vector<std::vector<double>> frame_signal(std::span<const double> signal,
                                              std::size_t frame_len, std::size_t hop) {
  if (frame_len == 0 || hop == 0 || hop > frame_len)
    throw std::invalid_argument("frame_signal: need 0 < hop <= frame_len");
  const std::size_t n = signal.size();
  std::size_t num_frames = 1;
  if (n > frame_len) num_frames = (n - frame_len + hop - 1) / hop + 1;

  std::vector<std::vector<double>> frames(num_frames, std::vector<double>(frame_len, 0.0));
  for (std::size_t f = 0; f < num_frames; ++f) {
    const std::size_t start = f * hop;
    const std::size_t count = start < n ? std::min(frame_len, n - start) : 0;
    std::copy_n(signal.begin() + static_cast<std::ptrdiff_t>(start), count,
                frames[f].begin());
  }
  return frames;
}

std::vector<double> hamming_window(std::span<const double> frame) {
  const std::size_t n = frame.size();
  if (n < 2) throw std::invalid_argument("hamming_window: frame needs at least 2 samples");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi *
                                            static_cast<double>(i) /
                                            static_cast<double>(n - 1));
    out[i] = w * frame[i];
  }
  return out;
}

std::vector<double> power_spectrum(std::span<const double> windowed_frame,
                                   std::size_t fft_size) {
  if (!is_power_of_two(fft_size))
    throw std::invalid_argument("power_spectrum: fft_size must be a power of two");
  if (fft_size < windowed_frame.size())
    throw std::invalid_argument("power_spectrum: fft_size smaller than the frame");
  std::vector<std::complex<double>> buf(fft_size);
  for (std::size_t i = 0; i < windowed_frame.size(); ++i) buf[i] = windowed_frame[i];
  fft_inplace(buf);
  std::vector<double> ps(fft_size / 2 + 1);
  for (std::size_t i = 0; i < ps.size(); ++i) ps[i] = std::norm(buf[i]);
  return ps;
}

double hz_to_mel(double f) {
  if (f < 0.0) throw std::invalid_argument("hz_to_mel: negative frequency");
  return 2595.0 * std::log10(1.0 + f / 700.0);
}

double mel_to_hz(double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); }

double hz_to_mel_natural(double f) {
  if (f < 0.0) throw std::invalid_argument("hz_to_mel_natural: negative frequency");
  return 2595.0 * std::log(1.0 + f / 700.0);
}

double mel_to_hz_natural(double m) { return 700.0 * (std::exp(m / 2595.0) - 1.0); }

Matrix build_mel_filterbank(const FrontendConfig& cfg0, double sample_rate) {
  const FrontendConfig cfg = resolve(cfg0, sample_rate);
  const std::size_t bins = cfg.fft_size / 2 + 1;
  const double bin_hz = sample_rate / static_cast<double>(cfg.fft_size);

  const double mel_lo = cfg.mel_natural_log ? hz_to_mel_natural(cfg.fmin_hz)
                                            : hz_to_mel(cfg.fmin_hz);
  const double mel_hi = cfg.mel_natural_log ? hz_to_mel_natural(cfg.fmax_hz)
                                            : hz_to_mel(cfg.fmax_hz);

  // num_filters centers plus the two edges, equally spaced on the mel axis.
  std::vector<double> points_hz(cfg.num_filters + 2);
  for (std::size_t m = 0; m < points_hz.size(); ++m) {
    const double mel = mel_lo + (mel_hi - mel_lo) * static_cast<double>(m) /
                                    static_cast<double>(cfg.num_filters + 1);
    points_hz[m] = cfg.mel_natural_log ? mel_to_hz_natural(mel) : mel_to_hz(mel);
  }

  for (std::size_t m = 0; m + 1 < points_hz.size(); ++m) {
    if (std::lround(points_hz[m] / bin_hz) == std::lround(points_hz[m + 1] / bin_hz))
      throw std::invalid_argument(
          "build_mel_filterbank: " + std::to_string(cfg.num_filters) +
          " filters collapse adjacent centers onto one FFT bin (fft_size " +
          std::to_string(cfg.fft_size) + "); reduce num_filters or enlarge fft_size");
  }

  Matrix fb(cfg.num_filters, bins);
  for (std::size_t m = 1; m <= cfg.num_filters; ++m) {
    const double left = points_hz[m - 1];
    const double center = points_hz[m];
    const double right = points_hz[m + 1];
    bool nonzero = false;
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = static_cast<double>(k) * bin_hz;
      double w = 0.0;
      if (f > left && f < right)
        w = std::min((f - left) / (center - left), (right - f) / (right - center));
      fb(m - 1, k) = w;
      nonzero = nonzero || w > 0.0;
    }
    if (!nonzero)
      throw std::invalid_argument("build_mel_filterbank: filter " + std::to_string(m) +
                                  " covers no FFT bin; reduce num_filters");
  }
  return fb;
}

std::vector<double> log_filterbank_energies(std::span<const double> spectrum,
                                            const Matrix& filterbank) {
  if (spectrum.size() != filterbank.cols)
    throw std::invalid_argument("log_filterbank_energies: spectrum length " +
                                std::to_string(spectrum.size()) +
                                " does not match filterbank bins " +
                                std::to_string(filterbank.cols));
  std::vector<double> out(filterbank.rows);
  for (std::size_t j = 0; j < filterbank.rows; ++j) {
    double e = 0.0;
    for (std::size_t k = 0; k < filterbank.cols; ++k) e += filterbank(j, k) * spectrum[k];
    out[j] = std::log(std::max(e, kEnergyFloor));
  }
  return out;
}

std::vector<double> dct_cepstra(std::span<const double> log_energies,
                                std::size_t num_ceps) {
  const std::size_t n = log_energies.size();
  if (num_ceps > n)
    throw std::invalid_argument("dct_cepstra: more coefficients than filterbank channels");
  std::vector<double> c(num_ceps);
  const double scale = std::sqrt(2.0 / static_cast<double>(n));
  for (std::size_t i = 1; i <= num_ceps; ++i) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
      acc += log_energies[j - 1] *
             std::cos(std::numbers::pi * static_cast<double>(i) /
                      static_cast<double>(n) * (static_cast<double>(j) - 0.5));
    }
    c[i - 1] = scale * acc;
  }
  return c;
}

CepstraMatrix extract_mfcc(const AudioClip& clip, const FrontendConfig& cfg0) {
  validate(clip);
  const FrontendConfig cfg = resolve(cfg0, clip.sample_rate);
  const std::size_t frame_len = frame_length_samples(cfg, clip.sample_rate);
  const std::size_t hop = hop_samples(cfg, clip.sample_rate);

  const std::vector<double> pre = preemphasize(clip.samples, cfg.preemphasis_k);
  const std::vector<std::vector<double>> frames = frame_signal(pre, frame_len, hop);
  const Matrix fb = build_mel_filterbank(cfg, clip.sample_rate);

  // With drop_c1 the DCT is taken one coefficient deeper so that num_ceps
  // coefficients are always delivered.
  const std::size_t want = cfg.num_ceps + (cfg.drop_c1 ? 1 : 0);
  const std::size_t skip = cfg.drop_c1 ? 1 : 0;

  CepstraMatrix out;
  out.first_coefficient = cfg.drop_c1 ? 2 : 1;
  out.values = Matrix(frames.size(), cfg.num_ceps);
  for (std::size_t f = 0; f < frames.size(); ++f) {
    try {
      const std::vector<double> windowed = hamming_window(frames[f]);
      const std::vector<double> ps = power_spectrum(windowed, cfg.fft_size);
      const std::vector<double> energies = log_filterbank_energies(ps, fb);
      const std::vector<double> ceps = dct_cepstra(energies, want);
      for (std::size_t j = 0; j < cfg.num_ceps; ++j) out.values(f, j) = ceps[skip + j];
    } catch (const std::exception& e) {
      throw std::runtime_error("extract_mfcc: frame " + std::to_string(f) + ": " +
                               e.what());
    }
  }
  return out;
}

}  // namespace pdvoice
