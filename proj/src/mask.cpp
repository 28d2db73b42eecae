#include "pnm/mask.hpp"

#include <fmt/format.h>

#include "pnm/pnm_map.hpp"

namespace pnm {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::DimensionMismatch: return "dimension mismatch";
    case ErrorKind::Validation: return "validation error";
    case ErrorKind::UnsupportedFormat: return "unsupported format";
    case ErrorKind::CorruptFile: return "corrupt file";
    case ErrorKind::MagicMismatch: return "magic mismatch";
    case ErrorKind::VersionMismatch: return "version mismatch";
    case ErrorKind::Truncated: return "truncated file";
    case ErrorKind::Io: return "i/o error";
  }
  return "unknown error";
}

const char* to_string(Transform t) {
  switch (t) {
    case Transform::Log: return "log";
    case Transform::LinearComplement: return "linear";
    case Transform::Reciprocal: return "reciprocal";
  }
  return "unknown";
}

const char* to_string(BorderPolicy b) {
  switch (b) {
    case BorderPolicy::ClipNormalized: return "clip";
    case BorderPolicy::Reflect: return "reflect";
  }
  return "unknown";
}

void PnmConfig::validate() const {
  if (d < 1 || d % 2 == 0 || d > kMaxLocality) {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("locality d must be odd and in [1, {}], got {}",
                            kMaxLocality, d));
  }
  switch (transform) {
    case Transform::Log:
    case Transform::LinearComplement:
    case Transform::Reciprocal:
      break;
    default:
      throw Error(ErrorKind::InvalidArgument, "unknown transform");
  }
  switch (border) {
    case BorderPolicy::ClipNormalized:
    case BorderPolicy::Reflect:
      break;
    default:
      throw Error(ErrorKind::InvalidArgument, "unknown border policy");
  }
}

LabelMask::LabelMask(LabelArray labels, std::optional<ClassId> ignore_label)
    : labels_(std::move(labels)), ignore_label_(ignore_label) {
  if (labels_.rows() <= 0 || labels_.cols() <= 0) {
    throw Error(ErrorKind::DimensionMismatch,
                "label mask must have positive width and height");
  }
}

LabelMask LabelMask::from_buffer(int width, int height,
                                 std::span<const ClassId> labels,
                                 std::optional<ClassId> ignore_label) {
  if (width <= 0 || height <= 0 ||
      labels.size() != static_cast<std::size_t>(width) *
                           static_cast<std::size_t>(height)) {
    throw Error(ErrorKind::DimensionMismatch,
                fmt::format("mask declares {}x{} but carries {} labels", width,
                            height, labels.size()));
  }
  LabelArray array(height, width);
  std::copy(labels.begin(), labels.end(), array.data());
  return LabelMask(std::move(array), ignore_label);
}

int LabelMask::max_label() const {
  int best = -1;
  const ClassId* p = labels_.data();
  for (Index i = 0; i < labels_.size(); ++i) {
    if (!is_ignored(p[i])) best = std::max(best, static_cast<int>(p[i]));
  }
  return best;
}

bool LabelMask::operator==(const LabelMask& other) const {
  return ignore_label_ == other.ignore_label_ &&
         labels_.rows() == other.labels_.rows() &&
         labels_.cols() == other.labels_.cols() &&
         (labels_ == other.labels_).all();
}

ValidationResult validate_labels(int width, int height,
                                 std::span<const ClassId> labels,
                                 std::optional<ClassId> ignore_label,
                                 int max_class) {
  ValidationResult result;
  if (width <= 0 || height <= 0 ||
      labels.size() != static_cast<std::size_t>(width) *
                           static_cast<std::size_t>(height)) {
    result.ok = false;
    result.kind = ErrorKind::DimensionMismatch;
    result.message = fmt::format("mask declares {}x{} but carries {} labels",
                                 width, height, labels.size());
    return result;
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const ClassId label = labels[i];
    if (ignore_label && label == *ignore_label) continue;
    if (label > max_class) {
      result.ok = false;
      result.kind = ErrorKind::Validation;
      result.first_offending_pixel = static_cast<Index>(i);
      result.message = fmt::format(
          "pixel {} has label {} above the maximum class id {}", i, label,
          max_class);
      return result;
    }
  }
  return result;
}

ValidationResult validate_mask(const LabelMask& mask, int max_class) {
  return validate_labels(
      mask.width(), mask.height(),
      std::span<const ClassId>(mask.labels().data(),
                               static_cast<std::size_t>(mask.size())),
      mask.ignore_label(), max_class);
}

PnmMap::PnmMap(CountArray same, CountArray patch, FlagArray excluded, int d,
               BorderPolicy border)
    : same_(std::move(same)),
      patch_(std::move(patch)),
      excluded_(std::move(excluded)),
      d_(d),
      border_(border) {
  if (same_.rows() != patch_.rows() || same_.cols() != patch_.cols() ||
      same_.rows() != excluded_.rows() || same_.cols() != excluded_.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "PNM map: arrays differ in shape");
  }
}

bool PnmMap::operator==(const PnmMap& other) const {
  return d_ == other.d_ && border_ == other.border_ &&
         same_.rows() == other.same_.rows() &&
         same_.cols() == other.same_.cols() && (same_ == other.same_).all() &&
         (patch_ == other.patch_).all() && (excluded_ == other.excluded_).all();
}

}  // namespace pnm
