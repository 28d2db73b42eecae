#pragma once

#include <cmath>

#include "pnm/mask.hpp"
#include "pnm/pnm_map.hpp"
#include "pnm/weight_map.hpp"

namespace pnm {

/// The d x d patch centered on a pixel, intersected with the image.
struct PatchWindow {
  Index center_row = 0;
  Index center_col = 0;
  int d = 1;
  Index row_begin = 0;
  Index row_end = 0;  // exclusive
  Index col_begin = 0;
  Index col_end = 0;  // exclusive

  static PatchWindow clipped(Index row, Index col, int d, Index height,
                             Index width);

  Index area() const { return (row_end - row_begin) * (col_end - col_begin); }
};

// Symmetric mirror of an out-of-range coordinate: -1 -> 0, n -> n - 1.
// Repeats with period 2n so any offset maps into [0, n).
Index reflect_index(Index i, Index n);

/// Brute-force PNM: counts every pixel of every patch. O(N d^2).
PnmMap compute_pnm_naive(const LabelMask& mask, const PnmConfig& config);

enum class FastStrategy {
  Auto,
  // Window histogram slides right by removing the leaving column and adding
  // the entering one pixel by pixel: O(d) updates per output pixel.
  RowSlide,
  // Per-column histograms slide down one row at a time; the window histogram
  // moves right by adding/subtracting whole column histograms: O(K) per pixel.
  ColumnHistogram,
};

// Auto picks ColumnHistogram when the class count is small relative to d.
FastStrategy resolve_strategy(FastStrategy strategy, int classes, int d);

/// Sliding-histogram PNM. Keeps per-class counts of the current window and
/// updates them incrementally as the window moves; no patch is ever recounted.
/// Rows are split into `threads` independent bands. The counts are identical to
/// compute_pnm_naive for every strategy and band count.
PnmMap compute_pnm_fast(const LabelMask& mask, const PnmConfig& config,
                        int threads = 1,
                        FastStrategy strategy = FastStrategy::Auto);

template <typename Scalar>
Scalar transform_value(Transform transform, Scalar p) {
  switch (transform) {
    case Transform::Log:
      return Scalar(1) - std::log(p);
    case Transform::LinearComplement:
      return Scalar(2) - p;
    case Transform::Reciprocal:
      return Scalar(1) / p;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown transform");
}

template <typename Scalar = double>
BasicWeightMap<Scalar> transform_weights(const PnmMap& pnm,
                                         Transform transform) {
  if ((pnm.same_counts() <= 0).any() ||
      (pnm.same_counts() > pnm.patch_counts()).any()) {
    throw Error(ErrorKind::InvalidArgument,
                "transform_weights: PNM values must lie in (0, 1]");
  }
  const Raster<double> w = pnm.resolve().unaryExpr(
      [transform](double p) { return transform_value(transform, p); });
  PnmConfig config{pnm.d(), transform, pnm.border()};
  return BasicWeightMap<Scalar>(w.cast<Scalar>(), pnm.excluded(), config);
}

template <typename Scalar = double>
BasicWeightMap<Scalar> compute_weights(const LabelMask& mask,
                                       const PnmConfig& config,
                                       int threads = 1) {
  return transform_weights<Scalar>(compute_pnm_fast(mask, config, threads),
                                   config.transform);
}

}  // namespace pnm
