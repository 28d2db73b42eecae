#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pnm/mask.hpp"
#include "pnm/metrics.hpp"
#include "pnm/weight_map.hpp"

namespace pnm::io {

struct MaskReadOptions {
  std::optional<ClassId> ignore_label = kDefaultIgnoreLabel;
};

// Label masks: 8-bit grayscale or paletted PNG (labels are the raw channel
// value or palette index), or the raw "PNML" sidecar for larger class ids.
// The format is detected from the leading bytes.
LabelMask read_label_mask(std::istream& in, const MaskReadOptions& options = {});
LabelMask read_label_mask(const std::filesystem::path& path,
                          const MaskReadOptions& options = {});

// 8-bit grayscale PNG. Throws Error(InvalidArgument) if a label exceeds 255.
void write_label_mask_png(const LabelMask& mask, std::ostream& out);
void write_label_mask_png(const LabelMask& mask,
                          const std::filesystem::path& path);

// Raw sidecar:
//   "PNML" | u8 version=1 | u32 width | u32 height | u8 bytes per label (1|2)
//   | labels, row-major, little-endian
void write_label_mask_raw(const LabelMask& mask, std::ostream& out);

void write_gray_png(const Raster<std::uint8_t>& image, std::ostream& out);
void write_gray_png(const Raster<std::uint8_t>& image,
                    const std::filesystem::path& path);

// Linear min-max map of the weights to [0, 255]; a constant map is all zero.
template <typename Scalar>
Raster<std::uint8_t> weight_preview(const BasicWeightMap<Scalar>& map) {
  const Raster<double> w = map.weights().template cast<double>();
  const double lo = w.size() ? w.minCoeff() : 0.0;
  const double hi = w.size() ? w.maxCoeff() : 0.0;
  if (!(hi > lo)) return Raster<std::uint8_t>::Zero(w.rows(), w.cols());
  return ((w - lo) * (255.0 / (hi - lo))).round().template cast<std::uint8_t>();
}

// Weight map file, all integers little-endian:
//   "PNMW" | u8 version=1 | u32 width | u32 height | u16 d | u8 transform
//   | u8 border | width*height f32 weights | ceil(width*height/8) bytes of
//   exclusion bits, row-major, least significant bit first.
inline constexpr std::size_t kWeightHeaderSize = 17;
inline constexpr std::uint8_t kWeightFormatVersion = 1;

void write_weight_map(const WeightMapF& map, std::ostream& out);
template <typename Scalar>
void write_weight_map(const BasicWeightMap<Scalar>& map, std::ostream& out) {
  write_weight_map(map.template cast<float>(), out);
}
void write_weight_map(const WeightMapF& map, const std::filesystem::path& path);

WeightMapF read_weight_map(std::istream& in);
WeightMapF read_weight_map(const std::filesystem::path& path);

/// One row per class with a non-empty union, then a summary row.
struct ClassScoreRow {
  ClassId class_id = 0;
  double intersection = 0.0;
  double union_mass = 0.0;
  double iou = 0.0;
  double pnm_intersection = 0.0;
  double pnm_union = 0.0;
  double pnm_iou = 0.0;
};

struct EvalReport {
  std::vector<ClassScoreRow> classes;
  double miou = 0.0;
  double pnm_iou = 0.0;
};

EvalReport make_eval_report(const WeightedConfusion& unit,
                            const WeightedConfusion& weighted);

struct SeriesRow {
  int n = 0;
  double miou = 0.0;
  double pnm_iou = 0.0;
};

struct FileScoreRow {
  std::string file;
  double miou = 0.0;
  double pnm_iou = 0.0;
};

// CSV writers. Comma separated, '.' decimal point, 6 digits after the point.
// Throws Error(Io) if the stream fails.
void write_report(const EvalReport& report, std::ostream& out);
void write_report(const BinReport& report, std::ostream& out);
void write_report(std::span<const SeriesRow> rows, std::ostream& out);
void write_report(std::span<const FileScoreRow> rows, std::ostream& out);

}  // namespace pnm::io
