#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "pnm/evaluation.hpp"
#include "pnm/io.hpp"
#include "pnm/metrics.hpp"
#include "pnm/pnm.hpp"
#include "pnm/synthetic.hpp"

namespace fs = std::filesystem;

namespace pnm::cli {
namespace {

struct CommonFlags {
  int d = kDefaultLocality;
  std::string transform = "log";
  std::string border = "clip";
  int ignore_label = kDefaultIgnoreLabel;
  int max_class = kDefaultMaxClass;
  std::string output;
  int threads = 1;

  PnmConfig config() const {
    PnmConfig c;
    c.d = d;
    c.transform = transform == "linear"       ? Transform::LinearComplement
                  : transform == "reciprocal" ? Transform::Reciprocal
                                              : Transform::Log;
    c.border = border == "reflect" ? BorderPolicy::Reflect
                                   : BorderPolicy::ClipNormalized;
    c.validate();
    return c;
  }

  io::MaskReadOptions read_options() const {
    io::MaskReadOptions o;
    if (ignore_label < 0) {
      o.ignore_label.reset();
    } else {
      o.ignore_label = static_cast<ClassId>(ignore_label);
    }
    return o;
  }
};

void add_common_flags(CLI::App* sub, CommonFlags& f) {
  sub->add_option("--d", f.d, "Locality scale, odd")->capture_default_str();
  sub->add_option("--transform", f.transform, "PNM to weight transform")
      ->check(CLI::IsMember({"log", "linear", "reciprocal"}))
      ->capture_default_str();
  sub->add_option("--border", f.border, "Patch border policy")
      ->check(CLI::IsMember({"clip", "reflect"}))
      ->capture_default_str();
  sub->add_option("--ignore-label", f.ignore_label,
                  "Label excluded from counting and scoring; negative for none")
      ->check(CLI::Range(-1, 65535))
      ->capture_default_str();
  sub->add_option("--max-class", f.max_class, "Largest valid class id")
      ->check(CLI::Range(0, 65535))
      ->capture_default_str();
  sub->add_option("-o,--output", f.output, "Output path");
  sub->add_option("--threads", f.threads, "Row bands for the PNM kernel")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

struct Size {
  int width = 0;
  int height = 0;
};

Size parse_size(const std::string& text) {
  const auto x = text.find('x');
  Size s;
  if (x != std::string::npos) {
    const char* b = text.data();
    const char* e = b + text.size();
    auto r1 = std::from_chars(b, b + x, s.width);
    auto r2 = std::from_chars(b + x + 1, e, s.height);
    if (r1.ec == std::errc() && r1.ptr == b + x && r2.ec == std::errc() &&
        r2.ptr == e && s.width > 0 && s.height > 0) {
      return s;
    }
  }
  throw Error(ErrorKind::InvalidArgument,
              fmt::format("size must look like WIDTHxHEIGHT, got '{}'", text));
}

std::vector<double> parse_edges(const std::string& text) {
  std::vector<double> edges;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = std::min(text.find(',', pos), text.size());
    std::string item = text.substr(pos, comma - pos);
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item == "inf" || item == "+inf") {
      // The top bin is always open; a trailing infinity is accepted and dropped.
      if (comma != text.size()) {
        throw Error(ErrorKind::InvalidArgument, "'inf' may only be the last edge");
      }
      break;
    }
    double v = 0.0;
    const auto r = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || r.ec != std::errc() || r.ptr != item.data() + item.size()) {
      throw Error(ErrorKind::InvalidArgument,
                  fmt::format("malformed bin edge '{}'", item));
    }
    edges.push_back(v);
    pos = comma + 1;
  }
  check_bin_edges(edges);
  return edges;
}

// Writes through a sibling temporary so a failed run leaves no partial file.
template <typename Fn>
void write_atomically(const fs::path& path, Fn&& fn) {
  fs::path tmp = path;
  tmp += ".partial";
  try {
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw Error(ErrorKind::Io, "cannot create " + path.string());
      fn(out);
      out.close();
      if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
      throw Error(ErrorKind::Io,
                  fmt::format("cannot move output to {}: {}", path.string(),
                              ec.message()));
    }
  } catch (...) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw;
  }
}

LabelMask load_mask(const fs::path& path, const CommonFlags& flags) {
  LabelMask mask = io::read_label_mask(path, flags.read_options());
  const auto check = validate_mask(mask, flags.max_class);
  if (!check) {
    throw Error(ErrorKind::Validation, path.string() + ": " + check.message);
  }
  return mask;
}

void require_output(const CommonFlags& flags) {
  if (flags.output.empty()) {
    throw Error(ErrorKind::InvalidArgument, "--output is required");
  }
}

// weights -------------------------------------------------------------------

struct WeightsArgs {
  CommonFlags flags;
  std::string gt;
  std::string preview;
};

int cmd_weights(const WeightsArgs& a, std::ostream& out) {
  const PnmConfig config = a.flags.config();
  require_output(a.flags);
  const LabelMask gt = load_mask(a.gt, a.flags);
  const WeightMap weights = compute_weights(gt, config, a.flags.threads);
  write_atomically(a.flags.output, [&](std::ostream& s) {
    io::write_weight_map(weights, s);
  });
  if (!a.preview.empty()) {
    write_atomically(a.preview, [&](std::ostream& s) {
      io::write_gray_png(io::weight_preview(weights), s);
    });
  }
  fmt::print(out, "wrote {} ({}x{}, d={}, transform={}, border={}, weights in [{:.6f}, {:.6f}])\n",
             a.flags.output, weights.width(), weights.height(), config.d,
             to_string(config.transform), to_string(config.border),
             weights.weights().minCoeff(), weights.weights().maxCoeff());
  return kOk;
}

// eval ----------------------------------------------------------------------

struct EvalArgs {
  CommonFlags flags;
  std::string pred;
  std::string gt;
  int jobs = 1;
  int zigzag_series = 0;
  std::string size = "1024x1024";
};

bool is_mask_file(const fs::path& p) {
  const auto ext = p.extension().string();
  return ext == ".png" || ext == ".pnml";
}

int eval_directories(const EvalArgs& a, const PnmConfig& config,
                     std::ostream& out, std::ostream& err) {
  std::vector<fs::path> names;
  for (const auto& entry : fs::directory_iterator(a.gt)) {
    if (entry.is_regular_file() && is_mask_file(entry.path())) {
      names.push_back(entry.path().filename());
    }
  }
  std::sort(names.begin(), names.end());
  if (names.empty()) {
    throw Error(ErrorKind::Io, "no .png or .pnml masks in " + a.gt);
  }

  std::vector<io::FileScoreRow> rows(names.size());
  std::vector<std::exception_ptr> failures(names.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < names.size(); i = next++) {
      try {
        const LabelMask gt = load_mask(fs::path(a.gt) / names[i], a.flags);
        const LabelMask pred = load_mask(fs::path(a.pred) / names[i], a.flags);
        const auto report = evaluate(pred, gt, config);
        rows[i] = {names[i].string(), report.miou, report.pnm_iou};
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const int jobs = std::clamp<int>(a.jobs, 1, static_cast<int>(names.size()));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  double miou_sum = 0.0;
  double pnm_sum = 0.0;
  for (const auto& r : rows) {
    miou_sum += r.miou;
    pnm_sum += r.pnm_iou;
  }
  const auto n = static_cast<double>(rows.size());
  if (a.flags.output.empty()) {
    io::write_report(std::span<const io::FileScoreRow>(rows), out);
    fmt::print(err, "files={} mean_miou={:.6f} mean_pnm_iou={:.6f}\n",
               rows.size(), miou_sum / n, pnm_sum / n);
  } else {
    write_atomically(a.flags.output, [&](std::ostream& s) {
      io::write_report(std::span<const io::FileScoreRow>(rows), s);
    });
    fmt::print(out, "files={} mean_miou={:.6f} mean_pnm_iou={:.6f}\n",
               rows.size(), miou_sum / n, pnm_sum / n);
  }
  return kOk;
}

int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  const PnmConfig config = a.flags.config();

  if (a.zigzag_series > 0) {
    const Size size = parse_size(a.size);
    const auto rows = zigzag_series(a.zigzag_series, size.width, size.height,
                                    config, a.flags.threads);
    if (a.flags.output.empty()) {
      io::write_report(std::span<const io::SeriesRow>(rows), out);
    } else {
      write_atomically(a.flags.output, [&](std::ostream& s) {
        io::write_report(std::span<const io::SeriesRow>(rows), s);
      });
      fmt::print(out, "wrote {} ({} images)\n", a.flags.output, rows.size());
    }
    return kOk;
  }

  if (a.pred.empty() || a.gt.empty()) {
    throw Error(ErrorKind::InvalidArgument,
                "eval needs PRED and GT paths (or --zigzag-series)");
  }
  if (fs::is_directory(a.gt) || fs::is_directory(a.pred)) {
    if (!fs::is_directory(a.gt) || !fs::is_directory(a.pred)) {
      throw Error(ErrorKind::InvalidArgument,
                  "PRED and GT must both be files or both be directories");
    }
    return eval_directories(a, config, out, err);
  }

  const LabelMask gt = load_mask(a.gt, a.flags);
  const LabelMask pred = load_mask(a.pred, a.flags);
  const auto report = evaluate(pred, gt, config, a.flags.threads);
  const auto summary =
      fmt::format("miou={:.6f} pnm_iou={:.6f}\n", report.miou, report.pnm_iou);
  if (a.flags.output.empty()) {
    io::write_report(report, out);
    err << summary;
  } else {
    write_atomically(a.flags.output,
                     [&](std::ostream& s) { io::write_report(report, s); });
    out << summary;
  }
  return kOk;
}

// bins ----------------------------------------------------------------------

struct BinsArgs {
  CommonFlags flags;
  std::string pred;
  std::string gt;
  std::string edges;
};

int cmd_bins(const BinsArgs& a, std::ostream& out) {
  const PnmConfig config = a.flags.config();
  const auto edges = a.edges.empty() ? default_bin_edges() : parse_edges(a.edges);
  const LabelMask gt = load_mask(a.gt, a.flags);
  const LabelMask pred = load_mask(a.pred, a.flags);
  const WeightMap weights = compute_weights(gt, config, a.flags.threads);
  const BinReport report = error_rate_bins(pred, gt, weights, edges);
  if (a.flags.output.empty()) {
    io::write_report(report, out);
  } else {
    write_atomically(a.flags.output,
                     [&](std::ostream& s) { io::write_report(report, s); });
    fmt::print(out, "wrote {} ({} bins, {} pixels)\n", a.flags.output,
               report.bins.size(), report.total());
  }
  return kOk;
}

// synth ---------------------------------------------------------------------

struct SynthArgs {
  std::string kind = "zigzag";
  int n = 1;
  std::string size = "1024x1024";
  int class_a = 0;
  int class_b = 1;
  double radius = 50.0;
  int cell = 1;
  int stripe_width = 3;
  int small_side = 3;
  int large_side = 31;
  int margin = 0;
  std::string output;
};

LabelMask synthesize(const SynthArgs& a) {
  const Size s = parse_size(a.size);
  const auto ca = static_cast<ClassId>(a.class_a);
  const auto cb = static_cast<ClassId>(a.class_b);
  if (a.kind == "zigzag") return zigzag_mask({a.n, s.width, s.height, ca, cb});
  if (a.kind == "split") return trivial_split_mask(s.width, s.height, ca, cb);
  if (a.kind == "vertical_split") {
    return fixture(fixtures::VerticalSplit{s.width, s.height, ca, cb});
  }
  if (a.kind == "checkerboard") {
    return fixture(fixtures::Checkerboard{s.width, s.height, a.cell, ca, cb});
  }
  if (a.kind == "disk") {
    fixtures::Disk p;
    p.width = s.width;
    p.height = s.height;
    p.radius = a.radius;
    p.margin = a.margin;
    p.foreground = cb;
    p.background = ca;
    return fixture(p);
  }
  if (a.kind == "stripe") {
    return fixture(fixtures::Stripe{s.width, s.height, a.stripe_width, a.margin, cb, ca});
  }
  fixtures::TwoSquares p;
  p.width = s.width;
  p.height = s.height;
  p.small_side = a.small_side;
  p.large_side = a.large_side;
  p.margin = a.margin;
  p.foreground = cb;
  p.background = ca;
  return fixture(p);
}

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  const LabelMask mask = synthesize(a);
  const bool raw = fs::path(a.output).extension() == ".pnml";
  write_atomically(a.output, [&](std::ostream& s) {
    if (raw) {
      io::write_label_mask_raw(mask, s);
    } else {
      io::write_label_mask_png(mask, s);
    }
  });
  fmt::print(out, "wrote {} ({} {}x{})\n", a.output, a.kind, mask.width(),
             mask.height());
  return kOk;
}

// bench ---------------------------------------------------------------------

struct BenchArgs {
  std::string size = "2048x1024";
  int classes = 19;
  int d = kDefaultLocality;
  int repeat = 1;
  int threads = 1;
  std::uint64_t seed = 1;
};

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  PnmConfig config;
  config.d = a.d;
  config.validate();
  const Size s = parse_size(a.size);

  std::mt19937_64 rng(a.seed);
  std::uniform_int_distribution<int> label(0, a.classes - 1);
  LabelArray labels(s.height, s.width);
  for (Index i = 0; i < labels.size(); ++i) {
    labels.data()[i] = static_cast<ClassId>(label(rng));
  }
  const LabelMask mask(std::move(labels));

  using Clock = std::chrono::steady_clock;
  auto time_ms = [&](auto&& kernel, PnmMap& result) {
    double total = 0.0;
    for (int i = 0; i < a.repeat; ++i) {
      const auto t0 = Clock::now();
      result = kernel();
      total += std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    }
    return total / a.repeat;
  };
  PnmMap naive;
  PnmMap fast;
  const double naive_ms =
      time_ms([&] { return compute_pnm_naive(mask, config); }, naive);
  const double fast_ms =
      time_ms([&] { return compute_pnm_fast(mask, config, a.threads); }, fast);
  const bool identical = naive == fast;

  fmt::print(out, "size={}x{} classes={} d={} repeat={} threads={}\n", s.width,
             s.height, a.classes, a.d, a.repeat, a.threads);
  fmt::print(out, "naive_ms={:.3f} fast_ms={:.3f} speedup={:.1f}x identical={}\n",
             naive_ms, fast_ms, naive_ms / std::max(fast_ms, 1e-9),
             identical ? "yes" : "no");
  if (!identical) {
    err << "error: fast and naive kernels disagree\n";
    return kValidation;
  }
  return kOk;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument:
      return kUsage;
    case ErrorKind::DimensionMismatch:
    case ErrorKind::Validation:
      return kValidation;
    default:
      return kIoError;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Pixel null model weights and PNM IoU evaluation", "pnm"};
  app.require_subcommand(1);

  WeightsArgs weights;
  auto* weights_cmd = app.add_subcommand(
      "weights", "Compute a PNM weight map from a ground-truth mask");
  add_common_flags(weights_cmd, weights.flags);
  weights_cmd->add_option("gt", weights.gt, "Ground-truth mask")->required();
  weights_cmd->add_option("--preview", weights.preview,
                          "8-bit PNG preview, min-max normalized");

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand(
      "eval", "Score predictions with mIoU and PNM IoU (weights from GT)");
  add_common_flags(eval_cmd, eval.flags);
  eval_cmd->add_option("pred", eval.pred, "Prediction mask or directory");
  eval_cmd->add_option("gt", eval.gt, "Ground-truth mask or directory");
  eval_cmd->add_option("--jobs", eval.jobs, "Worker threads for directories")
      ->check(CLI::PositiveNumber);
  eval_cmd->add_option("--zigzag-series", eval.zigzag_series,
                       "Score the trivial split against zigzag images 1..N")
      ->check(CLI::PositiveNumber);
  eval_cmd->add_option("--size", eval.size, "Zigzag image size WxH")
      ->capture_default_str();

  BinsArgs bins;
  auto* bins_cmd = app.add_subcommand(
      "bins", "Error rate of a prediction grouped by pixel weight");
  add_common_flags(bins_cmd, bins.flags);
  bins_cmd->add_option("pred", bins.pred, "Prediction mask")->required();
  bins_cmd->add_option("gt", bins.gt, "Ground-truth mask")->required();
  bins_cmd->add_option("--edges", bins.edges,
                       "Comma-separated ascending bin edges (default 1,1.25,...,5)");

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic label mask");
  synth_cmd->add_option("--kind", synth.kind)
      ->check(CLI::IsMember({"zigzag", "split", "vertical_split", "checkerboard",
                             "disk", "stripe", "two_squares"}))
      ->capture_default_str();
  synth_cmd->add_option("--n", synth.n, "Zigzag series index")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth_cmd->add_option("--size", synth.size, "Canvas WxH")->capture_default_str();
  synth_cmd->add_option("--class-a", synth.class_a)->check(CLI::Range(0, 255));
  synth_cmd->add_option("--class-b", synth.class_b)->check(CLI::Range(0, 255));
  synth_cmd->add_option("--radius", synth.radius, "Disk radius");
  synth_cmd->add_option("--cell", synth.cell, "Checkerboard cell size")
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--stripe-width", synth.stripe_width)
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--small-side", synth.small_side)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--large-side", synth.large_side)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--margin", synth.margin)->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("-o,--output", synth.output, "PNG, or .pnml for the raw sidecar")
      ->required();

  BenchArgs bench;
  auto* bench_cmd =
      app.add_subcommand("bench", "Time the naive and fast PNM kernels");
  bench_cmd->add_option("--size", bench.size)->capture_default_str();
  bench_cmd->add_option("--classes", bench.classes)
      ->check(CLI::Range(1, 65535))
      ->capture_default_str();
  bench_cmd->add_option("--d", bench.d)->capture_default_str();
  bench_cmd->add_option("--repeat", bench.repeat)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_option("--threads", bench.threads)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", bench.seed)->capture_default_str();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    if (weights_cmd->parsed()) return cmd_weights(weights, out);
    if (eval_cmd->parsed()) return cmd_eval(eval, out, err);
    if (bins_cmd->parsed()) return cmd_bins(bins, out);
    if (synth_cmd->parsed()) return cmd_synth(synth, out);
    if (bench_cmd->parsed()) return cmd_bench(bench, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
  return kUsage;
}

}  // namespace pnm::cli
