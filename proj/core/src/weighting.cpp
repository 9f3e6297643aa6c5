#include "pdvoice/weighting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pdvoice {

NormalizedCepstra normalize_columns(const Matrix& cepstra) {
  if (cepstra.rows == 0 || cepstra.cols == 0)
    throw std::invalid_argument("normalize_columns: empty matrix");

  NormalizedCepstra out;
  out.values = Matrix(cepstra.rows, cepstra.cols);
  out.constant_column.assign(cepstra.cols, 0);

  for (std::size_t j = 0; j < cepstra.cols; ++j) {
    double lo = cepstra(0, j);
    double hi = lo;
    for (std::size_t i = 1; i < cepstra.rows; ++i) {
      lo = std::min(lo, cepstra(i, j));
      hi = std::max(hi, cepstra(i, j));
    }
    if (hi == lo) {
      // Zero spread carries no information; normalized values stay zero.
      out.constant_column[j] = 1;
      continue;
    }
    for (std::size_t i = 0; i < cepstra.rows; ++i)
      out.values(i, j) = (hi - cepstra(i, j)) / (hi - lo);
  }
  return out;
}

std::vector<double> column_entropy(const NormalizedCepstra& normalized) {
  const Matrix& v = normalized.values;
  const std::size_t n = v.rows;
  std::vector<double> entropies(v.cols, 0.0);
  const double norm = n > 1 ? 1.0 / std::log(static_cast<double>(n)) : 1.0;

  for (std::size_t j = 0; j < v.cols; ++j) {
    if (normalized.constant_column[j]) {
      entropies[j] = 1.0;
      continue;
    }
    double colsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) colsum += v(i, j);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double y = v(i, j) / colsum;
      if (y > 0.0) acc += y * std::log(y);
    }
    entropies[j] = std::clamp(-norm * acc, 0.0, 1.0);
  }
  return entropies;
}

WeightVector entropy_weights(std::span<const double> entropies) {
  if (entropies.empty()) throw std::invalid_argument("entropy_weights: no entropies");
  for (std::size_t j = 0; j < entropies.size(); ++j) {
    if (!(entropies[j] >= 0.0 && entropies[j] <= 1.0))
      throw std::invalid_argument("entropy_weights: entropy " + std::to_string(j) +
                                  " outside [0,1]");
  }
  WeightVector wv;
  wv.entropies.assign(entropies.begin(), entropies.end());
  wv.weights.resize(entropies.size());

  double denom = 0.0;
  for (double e : entropies) denom += 1.0 - e;
  if (denom <= 0.0) {
    // Every column is zero-information; fall back to uniform weights.
    wv.uniform_fallback = true;
    std::fill(wv.weights.begin(), wv.weights.end(),
              1.0 / static_cast<double>(entropies.size()));
    return wv;
  }
  for (std::size_t j = 0; j < entropies.size(); ++j)
    wv.weights[j] = (1.0 - entropies[j]) / denom;
  return wv;
}

Matrix apply_weights(const Matrix& cepstra, const WeightVector& w) {
  if (w.weights.size() != cepstra.cols)
    throw std::invalid_argument("apply_weights: weight dimension " +
                                std::to_string(w.weights.size()) +
                                " does not match coefficient count " +
                                std::to_string(cepstra.cols));
  Matrix out(cepstra.rows, cepstra.cols);
  for (std::size_t i = 0; i < cepstra.rows; ++i)
    for (std::size_t j = 0; j < cepstra.cols; ++j)
      out(i, j) = w.weights[j] * cepstra(i, j);
  return out;
}

WeightVector compute_weights(const Matrix& cepstra) {
  const NormalizedCepstra normalized = normalize_columns(cepstra);
  return entropy_weights(column_entropy(normalized));
}

WeightVector pooled_weights(std::span<const CepstraMatrix> utterances) {
  if (utterances.empty()) throw std::invalid_argument("pooled_weights: no utterances");
  const std::size_t dims = utterances.front().dims();
  std::size_t total_frames = 0;
  for (const CepstraMatrix& u : utterances) {
    if (u.dims() != dims)
      throw std::invalid_argument("pooled_weights: mismatched coefficient counts");
    total_frames += u.frames();
  }
  Matrix pooled(total_frames, dims);
  std::size_t row = 0;
  for (const CepstraMatrix& u : utterances) {
    for (std::size_t i = 0; i < u.frames(); ++i, ++row)
      for (std::size_t j = 0; j < dims; ++j) pooled(row, j) = u.values(i, j);
  }
  return compute_weights(pooled);
}

namespace {

Voiceprint average_weighted(const Matrix& weighted, const UtteranceInfo& info) {
  Voiceprint vp;
  vp.label = info.label;
  vp.source_id = info.source_id;
  vp.vowel = info.vowel;
  vp.values.assign(weighted.cols, 0.0);
  for (std::size_t i = 0; i < weighted.rows; ++i)
    for (std::size_t j = 0; j < weighted.cols; ++j) vp.values[j] += weighted(i, j);
  for (double& v : vp.values) v /= static_cast<double>(weighted.rows);
  return vp;
}

}  // namespace

Voiceprint make_voiceprint(const CepstraMatrix& cepstra, const UtteranceInfo& info) {
  return make_voiceprint(cepstra, compute_weights(cepstra.values), info);
}

Voiceprint make_voiceprint(const CepstraMatrix& cepstra, const WeightVector& w,
                           const UtteranceInfo& info) {
  if (cepstra.frames() == 0)
    throw std::invalid_argument("make_voiceprint: no frames");
  return average_weighted(apply_weights(cepstra.values, w), info);
}

}  // namespace pdvoice
