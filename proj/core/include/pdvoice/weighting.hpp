#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pdvoice/frontend.hpp"
#include "pdvoice/matrix.hpp"
#include "pdvoice/types.hpp"

namespace pdvoice {

// Column-wise min/max normalization of a cepstra matrix. constant_column[j]
// marks columns whose max equals min (zero information); their normalized
// values are all zero.
struct NormalizedCepstra {
  Matrix values;
  std::vector<std::uint8_t> constant_column;
};

// Entropy weights of the coefficient columns. weights are non-negative and
// sum to 1; entropies lie in [0, 1]. uniform_fallback is set when every
// column was degenerate and the weights default to 1/D.
struct WeightVector {
  std::vector<double> weights;
  std::vector<double> entropies;
  bool uniform_fallback = false;
};

// One utterance reduced to a single D-dimensional feature vector.
struct Voiceprint {
  std::vector<double> values;
  Label label = Label::Unknown;
  std::string source_id;
  Vowel vowel = Vowel::Other;
};

struct UtteranceInfo {
  std::string source_id;
  Label label = Label::Unknown;
  Vowel vowel = Vowel::Other;
};

// Whether entropy weights are computed per utterance or pooled over the
// frames of a whole corpus and reused.
enum class WeightingScope { PerUtterance, Corpus };

// mel''_ij = (max_j - mel_ij) / (max_j - min_j) per column.
NormalizedCepstra normalize_columns(const Matrix& cepstra);

// e_j = -(1/ln N) sum_i Y_ij ln Y_ij with Y_ij the column share of frame i
// and 0 ln 0 := 0. Degenerate columns get entropy 1.
std::vector<double> column_entropy(const NormalizedCepstra& normalized);

// w_j = (1 - e_j) / sum(1 - e_j); uniform fallback when all e_j = 1.
WeightVector entropy_weights(std::span<const double> entropies);

// Scales column j of the original (un-normalized) cepstra by w_j.
Matrix apply_weights(const Matrix& cepstra, const WeightVector& w);

// normalize_columns -> column_entropy -> entropy_weights composed.
WeightVector compute_weights(const Matrix& cepstra);

// Weights from the pooled frames of several utterances (corpus scope).
WeightVector pooled_weights(std::span<const CepstraMatrix> utterances);

// Entropy-weights the cepstra and averages over frames.
Voiceprint make_voiceprint(const CepstraMatrix& cepstra, const UtteranceInfo& info);

// Same, with externally supplied weights (corpus scope).
Voiceprint make_voiceprint(const CepstraMatrix& cepstra, const WeightVector& w,
                           const UtteranceInfo& info);

}  // namespace pdvoice
