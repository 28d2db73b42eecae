#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "pnm/mask.hpp"
#include "pnm/weight_map.hpp"

namespace pnm {

/// Per-class weighted intersection and union mass.
///
/// A pixel with ground truth t and prediction y adds its weight to
/// intersection[t] and union_mass[t] when y == t, otherwise to union_mass[t]
/// and union_mass[y]. With unit weights the masses are pixel counts.
struct WeightedConfusion {
  std::vector<double> intersection;
  std::vector<double> union_mass;
  std::int64_t pixel_count = 0;

  int num_classes() const { return static_cast<int>(union_mass.size()); }
  void resize(int classes);
  WeightedConfusion& operator+=(const WeightedConfusion& other);
};

struct IouScores {
  double mean = 0.0;
  // nullopt for classes whose union is empty; those are left out of the mean.
  std::vector<std::optional<double>> per_class;
};

namespace detail {

void check_same_shape(const LabelMask& pred, const LabelMask& gt);
void check_same_shape(const LabelMask& gt, Index rows, Index cols);

template <typename WeightFn, typename ExcludedFn>
WeightedConfusion accumulate_impl(const LabelMask& pred, const LabelMask& gt,
                                  WeightFn weight, ExcludedFn excluded) {
  check_same_shape(pred, gt);
  WeightedConfusion out;
  const int classes =
      std::max({pred.max_label(), gt.max_label(), -1}) + 1;
  out.resize(classes);
  const auto ignore = gt.ignore_label();
  for (Index r = 0; r < gt.height(); ++r) {
    for (Index c = 0; c < gt.width(); ++c) {
      if (gt.is_ignored(r, c) || excluded(r, c)) continue;
      const ClassId t = gt(r, c);
      const ClassId y = pred(r, c);
      const double w = weight(r, c);
      ++out.pixel_count;
      out.union_mass[t] += w;
      if (y == t) {
        out.intersection[t] += w;
      } else if (!(ignore && *ignore == y) && !pred.is_ignored(y)) {
        out.union_mass[y] += w;
      }
    }
  }
  return out;
}

IouScores mean_iou(const WeightedConfusion& confusion);

}  // namespace detail

// Unit weights. Pixels whose ground truth is the ignore label are skipped; a
// prediction equal to the ignore label counts as a miss with no class.
WeightedConfusion accumulate(const LabelMask& pred, const LabelMask& gt);

template <typename Scalar>
WeightedConfusion accumulate(const LabelMask& pred, const LabelMask& gt,
                             const BasicWeightMap<Scalar>& weights) {
  detail::check_same_shape(gt, weights.height(), weights.width());
  return detail::accumulate_impl(
      pred, gt,
      [&](Index r, Index c) { return static_cast<double>(weights(r, c)); },
      [&](Index r, Index c) { return weights.is_excluded(r, c); });
}

template <typename Scalar>
WeightedConfusion accumulate(const LabelMask& pred, const LabelMask& gt,
                             const BasicWeightMap<Scalar>* weights) {
  return weights ? accumulate(pred, gt, *weights) : accumulate(pred, gt);
}

// Throws Error(InvalidArgument) when no class has a non-empty union.
IouScores miou(const WeightedConfusion& confusion);
IouScores pnm_iou(const WeightedConfusion& confusion);

/// Mean of weight * loss over non-excluded pixels.
template <typename Derived, typename Scalar>
double pnm_loss(const Eigen::ArrayBase<Derived>& per_pixel_loss,
                const BasicWeightMap<Scalar>& weights) {
  if (per_pixel_loss.rows() != weights.height() ||
      per_pixel_loss.cols() != weights.width()) {
    throw Error(ErrorKind::DimensionMismatch,
                "pnm_loss: loss raster and weight map differ in shape");
  }
  double sum = 0.0;
  std::int64_t n = 0;
  for (Index r = 0; r < per_pixel_loss.rows(); ++r) {
    for (Index c = 0; c < per_pixel_loss.cols(); ++c) {
      if (weights.is_excluded(r, c)) continue;
      const double loss = static_cast<double>(per_pixel_loss(r, c));
      if (!std::isfinite(loss)) {
        throw Error(ErrorKind::InvalidArgument,
                    "pnm_loss: non-finite loss value");
      }
      sum += static_cast<double>(weights(r, c)) * loss;
      ++n;
    }
  }
  if (n == 0) {
    throw Error(ErrorKind::InvalidArgument,
                "pnm_loss: every pixel is excluded");
  }
  return sum / static_cast<double>(n);
}

struct WeightBin {
  double lower = 0.0;  // inclusive
  double upper = 0.0;  // exclusive; +inf for the open top bin
  std::int64_t error_count = 0;
  std::int64_t total_count = 0;

  std::optional<double> error_rate() const {
    if (total_count == 0) return std::nullopt;
    return static_cast<double>(error_count) / static_cast<double>(total_count);
  }
};

/// Misclassification counts grouped by pixel weight.
///
/// For edges e0 < e1 < ... < em the bins are [-inf, e0), [e0, e1), ...,
/// [em, +inf). The first bin catches weights below the lowest edge and is
/// normally empty since PNM weights are >= 1.
struct BinReport {
  std::vector<double> edges;
  std::vector<WeightBin> bins;

  std::int64_t total() const;
};

// 16 uniform bins on [1, 5]: edges 1, 1.25, ..., 5.
std::vector<double> default_bin_edges();

// Throws Error(InvalidArgument) unless edges are finite and strictly ascending.
void check_bin_edges(std::span<const double> edges);

namespace detail {
BinReport make_bins(std::span<const double> edges);
void add_to_bins(BinReport& report, double weight, bool error);
}  // namespace detail

template <typename Scalar>
BinReport error_rate_bins(const LabelMask& pred, const LabelMask& gt,
                          const BasicWeightMap<Scalar>& weights,
                          std::span<const double> edges) {
  detail::check_same_shape(pred, gt);
  detail::check_same_shape(gt, weights.height(), weights.width());
  BinReport report = detail::make_bins(edges);
  for (Index r = 0; r < gt.height(); ++r) {
    for (Index c = 0; c < gt.width(); ++c) {
      if (gt.is_ignored(r, c) || weights.is_excluded(r, c)) continue;
      detail::add_to_bins(report, static_cast<double>(weights(r, c)),
                          pred(r, c) != gt(r, c));
    }
  }
  return report;
}

}  // namespace pnm
