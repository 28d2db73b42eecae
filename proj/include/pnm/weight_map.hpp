#pragma once

#include <utility>

#include "pnm/mask.hpp"

namespace pnm {

/// Per-pixel weights plus a parallel exclusion flag.
///
/// Excluded pixels hold weight 1 and must be skipped by losses and metrics.
/// Scalar is double for in-memory use; the on-disk format stores float.
template <typename Scalar>
class BasicWeightMap {
 public:
  using Weights = Raster<Scalar>;

  BasicWeightMap() = default;
  BasicWeightMap(Weights weights, FlagArray excluded, PnmConfig config)
      : weights_(std::move(weights)),
        excluded_(std::move(excluded)),
        config_(config) {
    if (weights_.rows() != excluded_.rows() ||
        weights_.cols() != excluded_.cols()) {
      throw Error(ErrorKind::DimensionMismatch,
                  "weight map: weights and exclusion flags differ in shape");
    }
  }

  int width() const { return static_cast<int>(weights_.cols()); }
  int height() const { return static_cast<int>(weights_.rows()); }
  Index size() const { return weights_.size(); }

  const Weights& weights() const { return weights_; }
  const FlagArray& excluded() const { return excluded_; }
  const PnmConfig& config() const { return config_; }

  Scalar operator()(Index row, Index col) const { return weights_(row, col); }
  bool is_excluded(Index row, Index col) const { return excluded_(row, col); }

  template <typename Other>
  BasicWeightMap<Other> cast() const {
    return BasicWeightMap<Other>(weights_.template cast<Other>(), excluded_,
                                 config_);
  }

  // Bitwise comparison of weights, flags and config.
  bool operator==(const BasicWeightMap& other) const {
    return config_ == other.config_ && weights_.rows() == other.weights_.rows() &&
           weights_.cols() == other.weights_.cols() &&
           (excluded_ == other.excluded_).all() &&
           (weights_ == other.weights_).all();
  }

 private:
  Weights weights_;
  FlagArray excluded_;
  PnmConfig config_;
};

using WeightMap = BasicWeightMap<double>;
using WeightMapF = BasicWeightMap<float>;

}  // namespace pnm
