#include "pnm/evaluation.hpp"

#include "pnm/metrics.hpp"
#include "pnm/pnm.hpp"
#include "pnm/synthetic.hpp"

namespace pnm {

io::EvalReport evaluate(const LabelMask& pred, const LabelMask& gt,
                        const PnmConfig& config, int threads) {
  detail::check_same_shape(pred, gt);
  const WeightMap weights = compute_weights(gt, config, threads);
  return io::make_eval_report(accumulate(pred, gt), accumulate(pred, gt, weights));
}

std::vector<io::SeriesRow> zigzag_series(int max_n, int width, int height,
                                         const PnmConfig& config, int threads) {
  std::vector<io::SeriesRow> rows;
  const LabelMask pred = trivial_split_mask(width, height);
  for (int n = 1; n <= max_n; ++n) {
    const LabelMask gt = zigzag_mask({n, width, height});
    const auto report = evaluate(pred, gt, config, threads);
    rows.push_back({n, report.miou, report.pnm_iou});
  }
  return rows;
}

}  // namespace pnm
