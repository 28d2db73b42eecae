#pragma once

#include <cstdint>

#include "pnm/mask.hpp"

namespace pnm {

using CountArray = Raster<std::int32_t>;

/// Per-pixel PNM probabilities kept as exact integer ratios.
///
/// value(i) = same_counts(i) / patch_counts(i). Excluded (ignore) pixels
/// store 1/1. Division happens only in value() and resolve(), so two kernels
/// that agree on the counts agree bit-for-bit on the resolved values.
class PnmMap {
 public:
  PnmMap() = default;
  PnmMap(CountArray same, CountArray patch, FlagArray excluded, int d,
         BorderPolicy border);

  int width() const { return static_cast<int>(same_.cols()); }
  int height() const { return static_cast<int>(same_.rows()); }
  int d() const { return d_; }
  BorderPolicy border() const { return border_; }

  const CountArray& same_counts() const { return same_; }
  const CountArray& patch_counts() const { return patch_; }
  const FlagArray& excluded() const { return excluded_; }

  double value(Index row, Index col) const {
    return static_cast<double>(same_(row, col)) /
           static_cast<double>(patch_(row, col));
  }

  Raster<double> resolve() const {
    return same_.cast<double>() / patch_.cast<double>();
  }

  bool operator==(const PnmMap& other) const;

 private:
  CountArray same_;
  CountArray patch_;
  FlagArray excluded_;
  int d_ = 1;
  BorderPolicy border_ = BorderPolicy::ClipNormalized;
};

}  // namespace pnm
