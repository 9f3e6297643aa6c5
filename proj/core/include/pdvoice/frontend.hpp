#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pdvoice/matrix.hpp"
#include "pdvoice/types.hpp"

namespace pdvoice {

// Settings of the cepstral frontend. Zero-valued fft_size / fmax_hz are
// placeholders resolved against the clip's sample rate (smallest power of
// two covering one frame, and Nyquist, respectively).
struct FrontendConfig {
  double preemphasis_k = 0.97;
  double frame_len_ms = 25.0;
  double hop_ms = 10.0;
  std::size_t fft_size = 0;
  std::size_t num_filters = 26;
  double fmin_hz = 0.0;
  double fmax_hz = 0.0;
  std::size_t num_ceps = 19;   // number of delivered coefficients D
  bool drop_c1 = true;         // deliver c2..c(D+1) instead of c1..cD
  bool mel_natural_log = false;  // literal printed mel map (ln instead of log10)
};

// Frames x D cepstral coefficients of one utterance. first_coefficient is
// 1, or 2 when c1 was dropped, so column j holds c_(first_coefficient + j).
struct CepstraMatrix {
  Matrix values;
  int first_coefficient = 1;

  std::size_t frames() const { return values.rows; }
  std::size_t dims() const { return values.cols; }
};

// Fills the derived fields of cfg for the given sample rate and checks all
// invariants; throws std::invalid_argument on violation.
FrontendConfig resolve(FrontendConfig cfg, double sample_rate);

std::size_t frame_length_samples(const FrontendConfig& cfg, double sample_rate);
std::size_t hop_samples(const FrontendConfig& cfg, double sample_rate);

// out[0] = x[0], out[t] = x[t] - k * x[t-1]. Rejects non-finite input.
std::vector<double> preemphasize(std::span<const double> signal, double k);

// Splits the signal into overlapping frames of frame_len samples spaced hop
// samples apart; the last partial frame is zero padded. A signal shorter
// than one frame yields a single padded frame.
std::vector<std::vector<double>> frame_signal(std::span<const double> signal,
                                              std::size_t frame_len,
                                              std::size_t hop);

// Applies the 0.54 - 0.46 cos(2 pi n / (N-1)) taper. Needs N >= 2.
std::vector<double> hamming_window(std::span<const double> frame);

// |DFT|^2 of the frame zero padded to fft_size (a power of two >= frame
// length); returns the fft_size/2 + 1 non-redundant bins.
std::vector<double> power_spectrum(std::span<const double> windowed_frame,
                                   std::size_t fft_size);

// 2595 * log10(1 + f/700); satisfies the 1000 Hz ~ 1000 mel anchor.
double hz_to_mel(double f);
double mel_to_hz(double m);
// Variant with a natural logarithm, as the mel map is sometimes printed.
// It does not hit the 1000 Hz anchor; kept selectable for comparison.
double hz_to_mel_natural(double f);
double mel_to_hz_natural(double m);

// num_filters triangular filters with centers equally spaced on the mel
// axis between fmin and fmax, evaluated at the FFT bin frequencies.
// Rejects configurations whose adjacent centers collapse onto one bin.
Matrix build_mel_filterbank(const FrontendConfig& cfg, double sample_rate);

inline constexpr double kEnergyFloor = 1e-10;

// log(max(filter . spectrum, kEnergyFloor)) per filter row.
std::vector<double> log_filterbank_energies(std::span<const double> spectrum,
                                            const Matrix& filterbank);

// c_i = sqrt(2/N) * sum_j m_j cos(pi i / N (j - 0.5)), i = 1..num_ceps.
std::vector<double> dct_cepstra(std::span<const double> log_energies,
                                std::size_t num_ceps);

// Full frontend: preemphasis, framing, windowing, power spectrum, mel
// filterbank, log, DCT. Deterministic; identical input gives bit-identical
// output.
CepstraMatrix extract_mfcc(const AudioClip& clip, const FrontendConfig& cfg);

}  // namespace pdvoice
