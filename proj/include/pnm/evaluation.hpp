#pragma once

#include <vector>

#include "pnm/io.hpp"
#include "pnm/mask.hpp"

namespace pnm {

// Scores a prediction with mIoU and PNM IoU. Weights come from the ground
// truth only.
io::EvalReport evaluate(const LabelMask& pred, const LabelMask& gt,
                        const PnmConfig& config, int threads = 1);

// Trivial left/right split prediction against zigzag images n = 1..max_n.
std::vector<io::SeriesRow> zigzag_series(int max_n, int width, int height,
                                         const PnmConfig& config,
                                         int threads = 1);

}  // namespace pnm
