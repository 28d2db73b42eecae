#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include <Eigen/Core>

#include "pnm/error.hpp"

namespace pnm {

using ClassId = std::uint16_t;
using Index = Eigen::Index;

template <typename T>
using Raster = Eigen::Array<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using LabelArray = Raster<ClassId>;
using FlagArray = Raster<bool>;

inline constexpr int kDefaultMaxClass = 255;
inline constexpr ClassId kDefaultIgnoreLabel = 255;
inline constexpr int kDefaultLocality = 35;
// Keeps d * d inside a 32-bit count.
inline constexpr int kMaxLocality = 32767;

enum class Transform : std::uint8_t {
  Log = 1,               // 1 - ln(p)
  LinearComplement = 2,  // 2 - p
  Reciprocal = 3,        // 1 / p
};

enum class BorderPolicy : std::uint8_t {
  ClipNormalized = 0,
  Reflect = 1,
};

struct PnmConfig {
  int d = kDefaultLocality;
  Transform transform = Transform::Log;
  BorderPolicy border = BorderPolicy::ClipNormalized;

  // Throws Error(InvalidArgument) unless d is odd and in [1, kMaxLocality].
  void validate() const;

  bool operator==(const PnmConfig&) const = default;
};

const char* to_string(Transform t);
const char* to_string(BorderPolicy b);

/// A rectangular grid of class identifiers. Row-major, row = y, col = x.
///
/// Pixels equal to the ignore label carry no supervision: they are skipped by
/// PNM counting, weighting, losses and metrics.
class LabelMask {
 public:
  LabelMask() = default;
  explicit LabelMask(LabelArray labels,
                     std::optional<ClassId> ignore_label = std::nullopt);

  // Throws Error(DimensionMismatch) when labels.size() != width * height.
  static LabelMask from_buffer(int width, int height,
                               std::span<const ClassId> labels,
                               std::optional<ClassId> ignore_label = std::nullopt);

  int width() const { return static_cast<int>(labels_.cols()); }
  int height() const { return static_cast<int>(labels_.rows()); }
  Index size() const { return labels_.size(); }

  const LabelArray& labels() const { return labels_; }
  ClassId operator()(Index row, Index col) const { return labels_(row, col); }

  std::optional<ClassId> ignore_label() const { return ignore_label_; }
  bool is_ignored(ClassId label) const {
    return ignore_label_ && *ignore_label_ == label;
  }
  bool is_ignored(Index row, Index col) const {
    return is_ignored(labels_(row, col));
  }

  // Largest label that is not the ignore label, or -1 if every pixel is ignored.
  int max_label() const;

  bool operator==(const LabelMask& other) const;

 private:
  LabelArray labels_;
  std::optional<ClassId> ignore_label_;
};

struct ValidationResult {
  bool ok = true;
  ErrorKind kind = ErrorKind::Validation;
  std::optional<Index> first_offending_pixel;
  std::string message;

  explicit operator bool() const { return ok; }
};

ValidationResult validate_labels(int width, int height,
                                 std::span<const ClassId> labels,
                                 std::optional<ClassId> ignore_label,
                                 int max_class = kDefaultMaxClass);

ValidationResult validate_mask(const LabelMask& mask,
                               int max_class = kDefaultMaxClass);

}  // namespace pnm
