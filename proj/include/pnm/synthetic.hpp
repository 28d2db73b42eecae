#pragma once

#include <variant>
#include <vector>

#include <Eigen/Core>

#include "pnm/mask.hpp"

namespace pnm {

/// n-th image of the zigzag series.
///
/// The boundary starts at the midpoint of the top edge, visits the odd
/// 2^(n+1)-section points alternately on the right and left edges and ends at
/// the midpoint of the bottom edge. class_a lies left of it, class_b right.
struct ZigzagSpec {
  int n = 1;
  int width = 1024;
  int height = 1024;
  ClassId class_a = 0;
  ClassId class_b = 1;
};

// Polyline vertices in continuous image coordinates (x right, y down,
// pixel (r, c) covers [c, c+1) x [r, r+1)).
std::vector<Eigen::Vector2d> zigzag_vertices(const ZigzagSpec& spec);

// Pixel centers on the boundary go to class_a. Throws Error(InvalidArgument)
// for n < 1 or a canvas smaller than 2^(n+1) on either side.
LabelMask zigzag_mask(const ZigzagSpec& spec);

// Columns [0, width / 2) get class_a, the rest class_b.
LabelMask trivial_split_mask(int width, int height, ClassId class_a = 0,
                             ClassId class_b = 1);

namespace fixtures {

struct Disk {
  int width = 256;
  int height = 256;
  double radius = 50.0;
  // Center defaults to the canvas center when negative.
  double center_x = -1.0;
  double center_y = -1.0;
  int margin = 0;
  ClassId foreground = 1;
  ClassId background = 0;
};

// Two same-class squares side by side, separated and framed by `margin`.
struct TwoSquares {
  int width = 256;
  int height = 128;
  int small_side = 3;
  int large_side = 31;
  int margin = 35;
  ClassId foreground = 1;
  ClassId background = 0;
};

// Full-height vertical stripe centered horizontally.
struct Stripe {
  int width = 128;
  int height = 128;
  int stripe_width = 3;
  int margin = 0;
  ClassId foreground = 1;
  ClassId background = 0;
};

struct Checkerboard {
  int width = 5;
  int height = 5;
  int cell = 1;
  ClassId class_a = 0;  // at (0, 0)
  ClassId class_b = 1;
};

struct VerticalSplit {
  int width = 64;
  int height = 64;
  ClassId class_a = 0;  // left half
  ClassId class_b = 1;
};

// Top-left corners of the two squares, in (x, y).
Eigen::Vector2i small_square_origin(const TwoSquares& params);
Eigen::Vector2i large_square_origin(const TwoSquares& params);
// First column of the stripe.
int stripe_begin(const Stripe& params);

}  // namespace fixtures

using FixtureParams =
    std::variant<fixtures::Disk, fixtures::TwoSquares, fixtures::Stripe,
                 fixtures::Checkerboard, fixtures::VerticalSplit>;

// Rasterizes by pixel-center membership. Throws Error(InvalidArgument) when
// the shape does not fit the canvas with the requested margin.
LabelMask fixture(const FixtureParams& params);

}  // namespace pnm
