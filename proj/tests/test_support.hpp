#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "pnm/mask.hpp"

namespace pnm::testing {

// Random label mask; roughly `ignore_density` of the pixels get the ignore label.
inline LabelMask random_mask(std::mt19937_64& rng, int width, int height,
                             int classes, double ignore_density = 0.0,
                             ClassId ignore = kDefaultIgnoreLabel) {
  std::uniform_int_distribution<int> label(0, classes - 1);
  std::bernoulli_distribution ignored(ignore_density);
  LabelArray labels(height, width);
  for (Index i = 0; i < labels.size(); ++i) {
    labels.data()[i] =
        ignored(rng) ? ignore : static_cast<ClassId>(label(rng));
  }
  return LabelMask(std::move(labels), ignore);
}

// Piecewise-constant mask built from random rectangles, closer to real label
// maps than i.i.d. noise.
inline LabelMask blocky_mask(std::mt19937_64& rng, int width, int height,
                             int classes, int rects) {
  std::uniform_int_distribution<int> label(0, classes - 1);
  LabelArray labels = LabelArray::Constant(height, width, 0);
  for (int i = 0; i < rects; ++i) {
    std::uniform_int_distribution<int> x(0, width - 1), y(0, height - 1);
    int x0 = x(rng), x1 = x(rng), y0 = y(rng), y1 = y(rng);
    if (x0 > x1) std::swap(x0, x1);
    if (y0 > y1) std::swap(y0, y1);
    labels.block(y0, x0, y1 - y0 + 1, x1 - x0 + 1)
        .setConstant(static_cast<ClassId>(label(rng)));
  }
  return LabelMask(std::move(labels));
}

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("pnm_test_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string operator/(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  std::filesystem::path path_;
};

}  // namespace pnm::testing
