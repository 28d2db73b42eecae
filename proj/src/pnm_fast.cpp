#include <algorithm>
#include <thread>
#include <vector>

#include "pnm/pnm.hpp"

namespace pnm {
namespace {

// Window coordinates run over [-half, size - 1 + half]; the maps send them
// to image coordinates, or -1 where the clipped window has no pixel.
std::vector<Index> coordinate_map(Index size, Index half, BorderPolicy border) {
  std::vector<Index> map(static_cast<std::size_t>(size + 2 * half));
  for (Index v = -half; v < size + half; ++v) {
    Index actual;
    if (border == BorderPolicy::Reflect) {
      actual = reflect_index(v, size);
    } else {
      actual = (v >= 0 && v < size) ? v : -1;
    }
    map[static_cast<std::size_t>(v + half)] = actual;
  }
  return map;
}

struct Kernel {
  Index height;
  Index width;
  Index half;
  std::uint32_t ignore_bin;
  std::vector<std::uint32_t> bins;  // row-major class per pixel, ignore_bin for ignored
  std::vector<Index> row_map;
  std::vector<Index> col_map;

  Index row_at(Index v) const { return row_map[static_cast<std::size_t>(v + half)]; }
  Index col_at(Index v) const { return col_map[static_cast<std::size_t>(v + half)]; }

  // Row slide: O(d) histogram updates per pixel, independent of class count.
  void run_band_rows(Index row_begin, Index row_end, CountArray& same,
                CountArray& patch, FlagArray& excluded) const {
    const std::size_t nbins = static_cast<std::size_t>(ignore_bin) + 1;
    std::vector<std::int32_t> start(nbins, 0);
    std::vector<std::int32_t> hist(nbins, 0);
    std::int32_t start_population = 0;

    // Histogram of virtual row v over the window columns centered at col 0.
    auto update_row = [&](Index v, std::int32_t delta) {
      const Index r = row_at(v);
      if (r < 0) return;
      const std::uint32_t* row = bins.data() + r * width;
      for (Index vc = -half; vc <= half; ++vc) {
        const Index c = col_at(vc);
        if (c < 0) continue;
        start[row[c]] += delta;
        start_population += delta;
      }
    };

    for (Index v = row_begin - half; v <= row_begin + half; ++v) update_row(v, 1);

    std::vector<Index> rows;
    rows.reserve(static_cast<std::size_t>(2 * half + 1));

    for (Index r = row_begin; r < row_end; ++r) {
      if (r > row_begin) {
        update_row(r - 1 - half, -1);
        update_row(r + half, 1);
      }
      rows.clear();
      for (Index v = r - half; v <= r + half; ++v) {
        const Index actual = row_at(v);
        if (actual >= 0) rows.push_back(actual * width);
      }
      const auto window_rows = static_cast<std::int32_t>(rows.size());

      std::copy(start.begin(), start.end(), hist.begin());
      std::int32_t population = start_population;
      const std::uint32_t* center_row = bins.data() + r * width;

      for (Index c = 0; c < width; ++c) {
        if (c > 0) {
          const Index leaving = col_at(c - 1 - half);
          if (leaving >= 0) {
            for (const Index offset : rows) --hist[bins[offset + leaving]];
            population -= window_rows;
          }
          const Index entering = col_at(c + half);
          if (entering >= 0) {
            for (const Index offset : rows) ++hist[bins[offset + entering]];
            population += window_rows;
          }
        }
        const std::uint32_t bin = center_row[c];
        if (bin == ignore_bin) {
          same(r, c) = 1;
          patch(r, c) = 1;
          excluded(r, c) = true;
        } else {
          same(r, c) = hist[bin];
          patch(r, c) = population - hist[ignore_bin];
          excluded(r, c) = false;
        }
      }
    }
  }

  // Column histograms: one per image column over the current window rows,
  // shifted down by one row per output row. The window histogram then moves
  // right by adding the entering column and subtracting the leaving one.
  // Count is int16 when d * d fits, which doubles the SIMD width.
  template <typename Count>
  void run_band_columns(Index row_begin, Index row_end, CountArray& same,
                        CountArray& patch, FlagArray& excluded) const {
    const std::size_t nbins = static_cast<std::size_t>(ignore_bin) + 1;
    constexpr std::size_t kLane = 16 / sizeof(Count);
    const std::size_t stride = (nbins + kLane - 1) / kLane * kLane;
    std::vector<Count> columns(static_cast<std::size_t>(width) * stride, 0);
    std::vector<Count> hist(stride, 0);

    auto update_row = [&](Index v, Count delta) {
      const Index r = row_at(v);
      if (r < 0) return;
      const std::uint32_t* row = bins.data() + r * width;
      for (Index c = 0; c < width; ++c) {
        columns[static_cast<std::size_t>(c) * stride + row[c]] += delta;
      }
    };
    auto column = [&](Index c) -> const Count* {
      return columns.data() + static_cast<std::size_t>(c) * stride;
    };

    for (Index v = row_begin - half; v <= row_begin + half; ++v) update_row(v, 1);

    for (Index r = row_begin; r < row_end; ++r) {
      if (r > row_begin) {
        update_row(r - 1 - half, -1);
        update_row(r + half, 1);
      }
      std::int32_t window_rows = 0;
      for (Index v = r - half; v <= r + half; ++v) window_rows += row_at(v) >= 0;

      Count* __restrict h = hist.data();
      std::fill(hist.begin(), hist.end(), Count{0});
      std::int32_t window_cols = 0;
      for (Index v = -half; v <= half; ++v) {
        const Index c = col_at(v);
        if (c < 0) continue;
        const Count* __restrict col = column(c);
        for (std::size_t k = 0; k < stride; ++k) h[k] += col[k];
        ++window_cols;
      }
      const std::uint32_t* center_row = bins.data() + r * width;

      for (Index c = 0; c < width; ++c) {
        if (c > 0) {
          const Index leaving = col_at(c - 1 - half);
          const Index entering = col_at(c + half);
          if (leaving >= 0 && entering >= 0) {
            const Count* __restrict out = column(leaving);
            const Count* __restrict in = column(entering);
            for (std::size_t k = 0; k < stride; ++k) h[k] += in[k] - out[k];
          } else if (leaving >= 0) {
            const Count* __restrict out = column(leaving);
            for (std::size_t k = 0; k < stride; ++k) h[k] -= out[k];
            --window_cols;
          } else if (entering >= 0) {
            const Count* __restrict in = column(entering);
            for (std::size_t k = 0; k < stride; ++k) h[k] += in[k];
            ++window_cols;
          }
        }
        const std::uint32_t bin = center_row[c];
        if (bin == ignore_bin) {
          same(r, c) = 1;
          patch(r, c) = 1;
          excluded(r, c) = true;
        } else {
          same(r, c) = h[bin];
          patch(r, c) = window_rows * window_cols - h[ignore_bin];
          excluded(r, c) = false;
        }
      }
    }
  }
};

}  // namespace

FastStrategy resolve_strategy(FastStrategy strategy, int classes, int d) {
  if (strategy != FastStrategy::Auto) return strategy;
  // Column updates touch every class slot but vectorize; row slides touch
  // 2d scattered slots.
  return classes + 1 <= 4 * d ? FastStrategy::ColumnHistogram
                              : FastStrategy::RowSlide;
}

PnmMap compute_pnm_fast(const LabelMask& mask, const PnmConfig& config,
                        int threads, FastStrategy strategy) {
  config.validate();
  const Index height = mask.height();
  const Index width = mask.width();

  Kernel kernel;
  kernel.height = height;
  kernel.width = width;
  kernel.half = config.d / 2;
  kernel.ignore_bin = static_cast<std::uint32_t>(mask.max_label() + 1);
  kernel.bins.resize(static_cast<std::size_t>(mask.size()));
  const ClassId* labels = mask.labels().data();
  for (std::size_t i = 0; i < kernel.bins.size(); ++i) {
    kernel.bins[i] = mask.is_ignored(labels[i]) ? kernel.ignore_bin : labels[i];
  }
  kernel.row_map = coordinate_map(height, kernel.half, config.border);
  kernel.col_map = coordinate_map(width, kernel.half, config.border);

  CountArray same(height, width);
  CountArray patch(height, width);
  FlagArray excluded(height, width);

  const bool by_columns =
      resolve_strategy(strategy, mask.max_label() + 1, config.d) ==
      FastStrategy::ColumnHistogram;
  const bool narrow = config.d * config.d <= 32767;
  auto run = [&](Index begin, Index end) {
    if (by_columns && narrow) {
      kernel.run_band_columns<std::int16_t>(begin, end, same, patch, excluded);
    } else if (by_columns) {
      kernel.run_band_columns<std::int32_t>(begin, end, same, patch, excluded);
    } else {
      kernel.run_band_rows(begin, end, same, patch, excluded);
    }
  };

  const Index bands = std::clamp<Index>(threads, 1, height);
  if (bands == 1) {
    run(0, height);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(bands));
    for (Index b = 0; b < bands; ++b) {
      const Index begin = height * b / bands;
      const Index end = height * (b + 1) / bands;
      workers.emplace_back([&run, begin, end] { run(begin, end); });
    }
    for (auto& w : workers) w.join();
  }
  return PnmMap(std::move(same), std::move(patch), std::move(excluded),
                config.d, config.border);
}

}  // namespace pnm
