#include <algorithm>

#include "pnm/pnm.hpp"

namespace pnm {

PatchWindow PatchWindow::clipped(Index row, Index col, int d, Index height,
                                 Index width) {
  const Index half = d / 2;
  PatchWindow w;
  w.center_row = row;
  w.center_col = col;
  w.d = d;
  w.row_begin = std::max<Index>(0, row - half);
  w.row_end = std::min<Index>(height, row + half + 1);
  w.col_begin = std::max<Index>(0, col - half);
  w.col_end = std::min<Index>(width, col + half + 1);
  return w;
}

Index reflect_index(Index i, Index n) {
  const Index period = 2 * n;
  Index m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - 1 - m;
}

PnmMap compute_pnm_naive(const LabelMask& mask, const PnmConfig& config) {
  config.validate();
  const Index height = mask.height();
  const Index width = mask.width();
  const Index half = config.d / 2;

  CountArray same(height, width);
  CountArray patch(height, width);
  FlagArray excluded(height, width);

  for (Index r = 0; r < height; ++r) {
    for (Index c = 0; c < width; ++c) {
      if (mask.is_ignored(r, c)) {
        same(r, c) = 1;
        patch(r, c) = 1;
        excluded(r, c) = true;
        continue;
      }
      const ClassId label = mask(r, c);
      std::int32_t hits = 0;
      std::int32_t population = 0;
      auto visit = [&](Index rr, Index cc) {
        if (mask.is_ignored(rr, cc)) return;
        ++population;
        if (mask(rr, cc) == label) ++hits;
      };
      if (config.border == BorderPolicy::ClipNormalized) {
        const auto win = PatchWindow::clipped(r, c, config.d, height, width);
        for (Index rr = win.row_begin; rr < win.row_end; ++rr)
          for (Index cc = win.col_begin; cc < win.col_end; ++cc) visit(rr, cc);
      } else {
        for (Index dr = -half; dr <= half; ++dr)
          for (Index dc = -half; dc <= half; ++dc)
            visit(reflect_index(r + dr, height), reflect_index(c + dc, width));
      }
      same(r, c) = hits;
      patch(r, c) = population;
      excluded(r, c) = false;
    }
  }
  return PnmMap(std::move(same), std::move(patch), std::move(excluded),
                config.d, config.border);
}

}  // namespace pnm
