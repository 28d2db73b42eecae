#include "pnm/synthetic.hpp"

#include <algorithm>
#include <cstdint>

#include <fmt/format.h>

namespace pnm {
namespace {

using Wide = __int128;

constexpr int kMaxZigzagIndex = 24;

void check_canvas(int width, int height, const char* what) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("{}: canvas must be positive, got {}x{}", what,
                            width, height));
  }
}

[[noreturn]] void out_of_canvas(const char* what) {
  throw Error(ErrorKind::InvalidArgument,
              fmt::format("{}: shape does not fit the canvas with the requested margin",
                          what));
}

LabelMask make_disk(const fixtures::Disk& p) {
  check_canvas(p.width, p.height, "disk");
  const double cx = p.center_x < 0 ? p.width / 2.0 : p.center_x;
  const double cy = p.center_y < 0 ? p.height / 2.0 : p.center_y;
  if (!(p.radius > 0) || cx - p.radius < p.margin ||
      cx + p.radius > p.width - p.margin || cy - p.radius < p.margin ||
      cy + p.radius > p.height - p.margin) {
    out_of_canvas("disk");
  }
  LabelArray labels(p.height, p.width);
  const double r2 = p.radius * p.radius;
  for (Index r = 0; r < p.height; ++r) {
    for (Index c = 0; c < p.width; ++c) {
      const double dx = c + 0.5 - cx;
      const double dy = r + 0.5 - cy;
      labels(r, c) = dx * dx + dy * dy <= r2 ? p.foreground : p.background;
    }
  }
  return LabelMask(std::move(labels));
}

LabelMask make_two_squares(const fixtures::TwoSquares& p) {
  check_canvas(p.width, p.height, "two_squares");
  if (p.small_side < 1 || p.large_side < 1 || p.margin < 0 ||
      3 * p.margin + p.small_side + p.large_side > p.width ||
      2 * p.margin + std::max(p.small_side, p.large_side) > p.height) {
    out_of_canvas("two_squares");
  }
  LabelArray labels = LabelArray::Constant(p.height, p.width, p.background);
  const auto a = fixtures::small_square_origin(p);
  const auto b = fixtures::large_square_origin(p);
  labels.block(a.y(), a.x(), p.small_side, p.small_side).setConstant(p.foreground);
  labels.block(b.y(), b.x(), p.large_side, p.large_side).setConstant(p.foreground);
  return LabelMask(std::move(labels));
}

LabelMask make_stripe(const fixtures::Stripe& p) {
  check_canvas(p.width, p.height, "stripe");
  const int begin = fixtures::stripe_begin(p);
  if (p.stripe_width < 1 || begin < p.margin ||
      begin + p.stripe_width > p.width - p.margin) {
    out_of_canvas("stripe");
  }
  LabelArray labels = LabelArray::Constant(p.height, p.width, p.background);
  labels.middleCols(begin, p.stripe_width).setConstant(p.foreground);
  return LabelMask(std::move(labels));
}

LabelMask make_checkerboard(const fixtures::Checkerboard& p) {
  check_canvas(p.width, p.height, "checkerboard");
  if (p.cell < 1) out_of_canvas("checkerboard");
  LabelArray labels(p.height, p.width);
  for (Index r = 0; r < p.height; ++r)
    for (Index c = 0; c < p.width; ++c)
      labels(r, c) = ((r / p.cell + c / p.cell) % 2 == 0) ? p.class_a : p.class_b;
  return LabelMask(std::move(labels));
}

LabelMask make_vertical_split(const fixtures::VerticalSplit& p) {
  return trivial_split_mask(p.width, p.height, p.class_a, p.class_b);
}

void check_zigzag(const ZigzagSpec& spec) {
  if (spec.n < 1 || spec.n > kMaxZigzagIndex) {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("zigzag index n must be in [1, {}], got {}",
                            kMaxZigzagIndex, spec.n));
  }
  const std::int64_t sections = std::int64_t{1} << (spec.n + 1);
  if (spec.width < sections || spec.height < sections) {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("zigzag n={} needs a canvas of at least {}x{}, got {}x{}",
                            spec.n, sections, sections, spec.width, spec.height));
  }
}

}  // namespace

std::vector<Eigen::Vector2d> zigzag_vertices(const ZigzagSpec& spec) {
  check_zigzag(spec);
  const double w = spec.width;
  const double h = spec.height;
  const std::int64_t turns = std::int64_t{1} << spec.n;
  const double sections = 2.0 * static_cast<double>(turns);
  std::vector<Eigen::Vector2d> v;
  v.reserve(static_cast<std::size_t>(turns + 2));
  v.emplace_back(w / 2, 0.0);
  for (std::int64_t k = 0; k < turns; ++k) {
    v.emplace_back(k % 2 == 0 ? w : 0.0, (2.0 * k + 1.0) * h / sections);
  }
  v.emplace_back(w / 2, h);
  return v;
}

LabelMask zigzag_mask(const ZigzagSpec& spec) {
  check_zigzag(spec);
  // Every coordinate is scaled by 2^(n+2) so vertices and pixel centers are
  // integers and the side test below is exact.
  const std::int64_t half_scale = std::int64_t{1} << (spec.n + 1);
  const std::int64_t scale = 2 * half_scale;
  const std::int64_t turns = std::int64_t{1} << spec.n;
  const std::int64_t w = spec.width;
  const std::int64_t h = spec.height;

  std::vector<std::int64_t> xs{w * half_scale};
  std::vector<std::int64_t> ys{0};
  for (std::int64_t k = 0; k < turns; ++k) {
    xs.push_back(k % 2 == 0 ? w * scale : 0);
    ys.push_back((2 * k + 1) * h * 2);
  }
  xs.push_back(w * half_scale);
  ys.push_back(h * scale);

  LabelArray labels(spec.height, spec.width);
  for (Index r = 0; r < spec.height; ++r) {
    const std::int64_t cy = (2 * r + 1) * half_scale;
    auto seg = static_cast<std::size_t>(
        std::upper_bound(ys.begin(), ys.end(), cy) - ys.begin() - 1);
    seg = std::min(seg, ys.size() - 2);
    const std::int64_t x0 = xs[seg], y0 = ys[seg];
    const std::int64_t x1 = xs[seg + 1], y1 = ys[seg + 1];
    for (Index c = 0; c < spec.width; ++c) {
      const std::int64_t cx = (2 * c + 1) * half_scale;
      // cx <= boundary x at cy, with y1 > y0
      const Wide lhs = Wide(cx - x0) * Wide(y1 - y0);
      const Wide rhs = Wide(x1 - x0) * Wide(cy - y0);
      labels(r, c) = lhs <= rhs ? spec.class_a : spec.class_b;
    }
  }
  return LabelMask(std::move(labels));
}

LabelMask trivial_split_mask(int width, int height, ClassId class_a,
                             ClassId class_b) {
  if (width < 2 || height < 1) {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("split mask needs width >= 2, got {}x{}", width,
                            height));
  }
  LabelArray labels(height, width);
  labels.leftCols(width / 2).setConstant(class_a);
  labels.rightCols(width - width / 2).setConstant(class_b);
  return LabelMask(std::move(labels));
}

namespace fixtures {

Eigen::Vector2i small_square_origin(const TwoSquares& p) {
  return {p.margin, p.margin};
}

Eigen::Vector2i large_square_origin(const TwoSquares& p) {
  return {2 * p.margin + p.small_side, p.margin};
}

int stripe_begin(const Stripe& p) { return (p.width - p.stripe_width) / 2; }

}  // namespace fixtures

LabelMask fixture(const FixtureParams& params) {
  return std::visit(
      [](const auto& p) -> LabelMask {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, fixtures::Disk>) return make_disk(p);
        else if constexpr (std::is_same_v<T, fixtures::TwoSquares>) return make_two_squares(p);
        else if constexpr (std::is_same_v<T, fixtures::Stripe>) return make_stripe(p);
        else if constexpr (std::is_same_v<T, fixtures::Checkerboard>) return make_checkerboard(p);
        else return make_vertical_split(p);
      },
      params);
}

}  // namespace pnm
