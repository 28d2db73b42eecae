#include "pnm/metrics.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace pnm {

void WeightedConfusion::resize(int classes) {
  intersection.assign(static_cast<std::size_t>(classes), 0.0);
  union_mass.assign(static_cast<std::size_t>(classes), 0.0);
}

WeightedConfusion& WeightedConfusion::operator+=(const WeightedConfusion& other) {
  if (other.num_classes() > num_classes()) {
    intersection.resize(other.intersection.size(), 0.0);
    union_mass.resize(other.union_mass.size(), 0.0);
  }
  for (std::size_t k = 0; k < other.union_mass.size(); ++k) {
    intersection[k] += other.intersection[k];
    union_mass[k] += other.union_mass[k];
  }
  pixel_count += other.pixel_count;
  return *this;
}

namespace detail {

void check_same_shape(const LabelMask& pred, const LabelMask& gt) {
  if (pred.width() != gt.width() || pred.height() != gt.height()) {
    throw Error(ErrorKind::DimensionMismatch,
                fmt::format("prediction is {}x{} but ground truth is {}x{}",
                            pred.width(), pred.height(), gt.width(),
                            gt.height()));
  }
}

void check_same_shape(const LabelMask& gt, Index rows, Index cols) {
  if (gt.height() != rows || gt.width() != cols) {
    throw Error(ErrorKind::DimensionMismatch,
                fmt::format("weight map is {}x{} but mask is {}x{}", cols, rows,
                            gt.width(), gt.height()));
  }
}

IouScores mean_iou(const WeightedConfusion& confusion) {
  IouScores scores;
  scores.per_class.resize(confusion.union_mass.size());
  double sum = 0.0;
  int counted = 0;
  for (std::size_t k = 0; k < confusion.union_mass.size(); ++k) {
    if (confusion.union_mass[k] <= 0.0) continue;
    const double iou = confusion.intersection[k] / confusion.union_mass[k];
    scores.per_class[k] = iou;
    sum += iou;
    ++counted;
  }
  if (counted == 0) {
    throw Error(ErrorKind::InvalidArgument,
                "no class has a non-empty union; IoU is undefined");
  }
  scores.mean = sum / counted;
  return scores;
}

BinReport make_bins(std::span<const double> edges) {
  check_bin_edges(edges);
  BinReport report;
  report.edges.assign(edges.begin(), edges.end());
  const double inf = std::numeric_limits<double>::infinity();
  report.bins.reserve(edges.size() + 1);
  report.bins.push_back({-inf, edges.front(), 0, 0});
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    report.bins.push_back({edges[i], edges[i + 1], 0, 0});
  }
  report.bins.push_back({edges.back(), inf, 0, 0});
  return report;
}

void add_to_bins(BinReport& report, double weight, bool error) {
  const auto it =
      std::upper_bound(report.edges.begin(), report.edges.end(), weight);
  auto& bin = report.bins[static_cast<std::size_t>(it - report.edges.begin())];
  ++bin.total_count;
  if (error) ++bin.error_count;
}

}  // namespace detail

WeightedConfusion accumulate(const LabelMask& pred, const LabelMask& gt) {
  return detail::accumulate_impl(
      pred, gt, [](Index, Index) { return 1.0; },
      [](Index, Index) { return false; });
}

IouScores miou(const WeightedConfusion& confusion) {
  return detail::mean_iou(confusion);
}

IouScores pnm_iou(const WeightedConfusion& confusion) {
  return detail::mean_iou(confusion);
}

std::int64_t BinReport::total() const {
  std::int64_t n = 0;
  for (const auto& b : bins) n += b.total_count;
  return n;
}

std::vector<double> default_bin_edges() {
  std::vector<double> edges;
  for (int i = 0; i <= 16; ++i) edges.push_back(1.0 + 0.25 * i);
  return edges;
}

void check_bin_edges(std::span<const double> edges) {
  if (edges.empty()) {
    throw Error(ErrorKind::InvalidArgument, "bin edges must not be empty");
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (!std::isfinite(edges[i])) {
      throw Error(ErrorKind::InvalidArgument, "bin edges must be finite");
    }
    if (i > 0 && !(edges[i] > edges[i - 1])) {
      throw Error(ErrorKind::InvalidArgument,
                  fmt::format("bin edges must be strictly ascending ({} after {})",
                              edges[i], edges[i - 1]));
    }
  }
}

}  // namespace pnm
