#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>

#include <fmt/format.h>

#include "commands.hpp"
#include "pnm/io.hpp"
#include "test_support.hpp"

using namespace pnm;
using pnm::testing::TempDir;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result pnm_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "pnm");
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Trailing summary value, e.g. "miou=0.600000 pnm_iou=0.575503".
double field(const std::string& text, const std::string& key) {
  const auto at = text.find(key + "=");
  REQUIRE(at != std::string::npos);
  return std::stod(text.substr(at + key.size() + 1));
}

}  // namespace

TEST_CASE("synth writes the requested masks") {
  TempDir dir;
  auto r = pnm_cli({"synth", "--kind", "zigzag", "--n", "1", "--size", "1024x1024",
                    "-o", dir / "z1.png"});
  REQUIRE(r.code == 0);
  const auto z = io::read_label_mask(std::filesystem::path(dir / "z1.png"));
  const double fraction = static_cast<double>((z.labels() == 0).count()) / z.size();
  CHECK(std::abs(fraction - 0.5) <= 0.001);

  r = pnm_cli({"synth", "--kind", "checkerboard", "--size", "5x5", "-o", dir / "c.png"});
  REQUIRE(r.code == 0);
  const auto c = io::read_label_mask(std::filesystem::path(dir / "c.png"));
  for (Index i = 0; i < 5; ++i)
    for (Index j = 0; j < 5; ++j) CHECK(c(i, j) == (i + j) % 2);

  r = pnm_cli({"synth", "--kind", "zigzag", "--n", "0", "-o", dir / "bad.png"});
  CHECK(r.code == cli::kUsage);
  CHECK_FALSE(std::filesystem::exists(dir / "bad.png"));

  r = pnm_cli({"synth", "--kind", "disk", "--size", "32x32", "--radius", "40",
               "-o", dir / "disk.png"});
  CHECK(r.code == cli::kUsage);
  CHECK_FALSE(std::filesystem::exists(dir / "disk.png"));

  r = pnm_cli({"synth", "--kind", "split", "--size", "8x4", "--class-b", "7",
               "-o", dir / "s.pnml"});
  REQUIRE(r.code == 0);
  CHECK(slurp(dir / "s.pnml").substr(0, 4) == "PNML");
}

TEST_CASE("weights: uniform mask, preview, even d") {
  TempDir dir;
  REQUIRE(pnm_cli({"synth", "--kind", "checkerboard", "--size", "6x4", "--cell", "8",
                   "-o", dir / "u.png"}).code == 0);
  auto r = pnm_cli({"weights", dir / "u.png", "-o", dir / "u.pnmw"});
  REQUIRE(r.code == 0);
  const auto w = io::read_weight_map(std::filesystem::path(dir / "u.pnmw"));
  CHECK((w.weights() == 1.0f).all());

  REQUIRE(pnm_cli({"synth", "--kind", "vertical_split", "--size", "64x16",
                   "-o", dir / "v.png"}).code == 0);
  r = pnm_cli({"weights", dir / "v.png", "--d", "3", "-o", dir / "v.pnmw",
               "--preview", dir / "v_preview.png"});
  REQUIRE(r.code == 0);
  const auto preview = io::read_label_mask(std::filesystem::path(dir / "v_preview.png"),
                                           {.ignore_label = std::nullopt});
  for (Index c = 0; c < 64; ++c) {
    const bool bright = c == 31 || c == 32;
    CHECK((preview.labels().col(c) == (bright ? 255 : 0)).all());
  }

  r = pnm_cli({"weights", dir / "v.png", "--d", "4", "-o", dir / "even.pnmw"});
  CHECK(r.code == cli::kUsage);
  CHECK_FALSE(std::filesystem::exists(dir / "even.pnmw"));

  r = pnm_cli({"weights", dir / "missing.png", "-o", dir / "m.pnmw"});
  CHECK(r.code == cli::kIoError);
  CHECK_FALSE(std::filesystem::exists(dir / "m.pnmw"));
}

TEST_CASE("eval: identical files, zigzag against split, d = 1") {
  TempDir dir;
  REQUIRE(pnm_cli({"synth", "--kind", "zigzag", "--n", "3", "--size", "256x256",
                   "-o", dir / "gt.png"}).code == 0);
  REQUIRE(pnm_cli({"synth", "--kind", "split", "--size", "256x256",
                   "-o", dir / "pred.png"}).code == 0);

  auto r = pnm_cli({"eval", dir / "gt.png", dir / "gt.png"});
  REQUIRE(r.code == 0);
  CHECK(field(r.err, "miou") == 1.0);
  CHECK(field(r.err, "pnm_iou") == 1.0);
  CHECK(r.out.rfind("class,intersection,union,iou,pnm_intersection,pnm_union,pnm_iou\n", 0) == 0);

  r = pnm_cli({"eval", dir / "pred.png", dir / "gt.png", "-o", dir / "report.csv"});
  REQUIRE(r.code == 0);
  CHECK(field(r.out, "miou") == doctest::Approx(0.6).epsilon(0.003));
  CHECK(field(r.out, "pnm_iou") < field(r.out, "miou"));
  CHECK(slurp(dir / "report.csv").find("mean,,,0.600000,,,") != std::string::npos);

  r = pnm_cli({"eval", dir / "pred.png", dir / "gt.png", "--d", "1", "-o", dir / "d1.csv"});
  REQUIRE(r.code == 0);
  CHECK(field(r.out, "pnm_iou") == field(r.out, "miou"));
}

TEST_CASE("eval error statuses") {
  TempDir dir;
  REQUIRE(pnm_cli({"synth", "--kind", "split", "--size", "16x16", "-o", dir / "a.png"}).code == 0);
  REQUIRE(pnm_cli({"synth", "--kind", "split", "--size", "16x8", "-o", dir / "b.png"}).code == 0);
  CHECK(pnm_cli({"eval", dir / "a.png", dir / "b.png"}).code == cli::kValidation);
  CHECK(pnm_cli({"eval", dir / "a.png", dir / "nope.png"}).code == cli::kIoError);
  CHECK(pnm_cli({"eval", dir / "a.png", dir / "a.png", "--max-class", "0"}).code ==
        cli::kValidation);
  CHECK(pnm_cli({"eval", dir / "a.png", dir / "a.png", "--transform", "cubic"}).code ==
        cli::kUsage);
  CHECK(pnm_cli({"eval", dir / "a.png"}).code == cli::kUsage);
  CHECK(pnm_cli({"frobnicate"}).code == cli::kUsage);
  CHECK(pnm_cli({}).code == cli::kUsage);
  CHECK(pnm_cli({"eval", dir / "a.png", dir / "a.png", "-o",
                 dir / "no_such_dir/r.csv"}).code == cli::kIoError);
}

TEST_CASE("eval over directories writes rows in sorted order") {
  TempDir dir;
  std::filesystem::create_directories(dir / "gt");
  std::filesystem::create_directories(dir / "pred");
  for (const char* name : {"c.png", "a.png", "b.png"}) {
    const std::string n = name;
    REQUIRE(pnm_cli({"synth", "--kind", "zigzag", "--n", n == "a.png" ? "1" : "2",
                     "--size", "64x64", "-o", dir / ("gt/" + n)}).code == 0);
    REQUIRE(pnm_cli({"synth", "--kind", "split", "--size", "64x64",
                     "-o", dir / ("pred/" + n)}).code == 0);
  }
  const auto r = pnm_cli({"eval", dir / "pred", dir / "gt", "--jobs", "3", "--d", "5",
                          "-o", dir / "files.csv"});
  REQUIRE(r.code == 0);
  const auto csv = slurp(dir / "files.csv");
  CHECK(csv.rfind("file,miou,pnm_iou\na.png,", 0) == 0);
  CHECK(csv.find("b.png") < csv.find("c.png"));
  CHECK(r.out.find("files=3") != std::string::npos);

  const auto again = pnm_cli({"eval", dir / "pred", dir / "gt", "--jobs", "1", "--d", "5"});
  REQUIRE(again.code == 0);
  CHECK(again.out == csv);
}

TEST_CASE("eval zigzag series") {
  const auto r = pnm_cli({"eval", "--zigzag-series", "3", "--size", "128x128"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("n,miou,pnm_iou\n1,0.600000,", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 4);
}

TEST_CASE("bins: perfect, all wrong, boundary flip, malformed edges") {
  TempDir dir;
  REQUIRE(pnm_cli({"synth", "--kind", "vertical_split", "--size", "64x64",
                   "-o", dir / "gt.png"}).code == 0);
  REQUIRE(pnm_cli({"synth", "--kind", "split", "--size", "64x64", "--class-a", "1",
                   "--class-b", "0", "-o", dir / "wrong.png"}).code == 0);

  auto r = pnm_cli({"bins", dir / "gt.png", dir / "gt.png", "--d", "3"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find(",1.000000\n") == std::string::npos);
  CHECK(r.out.find(",0.000000\n") != std::string::npos);

  r = pnm_cli({"bins", dir / "wrong.png", dir / "gt.png", "--d", "3"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find(",0.000000\n") == std::string::npos);
  CHECK(r.out.find(",1.000000\n") != std::string::npos);

  r = pnm_cli({"bins", dir / "gt.png", dir / "gt.png", "--edges", "1,1.2,inf"});
  REQUIRE(r.code == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 4);

  LabelArray flipped = io::read_label_mask(std::filesystem::path(dir / "gt.png")).labels();
  flipped.col(31).setConstant(1);
  io::write_label_mask_png(LabelMask(flipped), std::filesystem::path(dir / "flip.png"));
  r = pnm_cli({"bins", dir / "flip.png", dir / "gt.png", "--d", "3", "--edges", "1,1.2"});
  REQUIRE(r.code == 0);
  CHECK(r.out ==
        "lower,upper,error_count,total_count,error_rate\n"
        "-inf,1.000000,0,0,\n"
        "1.000000,1.200000,0,3968,0.000000\n"
        "1.200000,inf,64,128,0.500000\n");

  CHECK(pnm_cli({"bins", dir / "gt.png", dir / "gt.png", "--edges", "1,x"}).code ==
        cli::kUsage);
  CHECK(pnm_cli({"bins", dir / "gt.png", dir / "gt.png", "--edges", "2,1"}).code ==
        cli::kUsage);
  CHECK(pnm_cli({"bins", dir / "gt.png", dir / "gt.png", "--edges", "inf,2"}).code ==
        cli::kUsage);
}

TEST_CASE("bench reports agreement and rejects a zero repeat") {
  auto r = pnm_cli({"bench", "--size", "8x8", "--classes", "3", "--d", "3"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("identical=yes") != std::string::npos);
  CHECK(pnm_cli({"bench", "--repeat", "0"}).code == cli::kUsage);
  CHECK(pnm_cli({"bench", "--size", "8by8"}).code == cli::kUsage);
}

TEST_CASE("repeated runs produce byte-identical files") {
  TempDir dir;
  for (const char* tag : {"1", "2"}) {
    const std::string t = tag;
    REQUIRE(pnm_cli({"synth", "--kind", "zigzag", "--n", "2", "--size", "96x64",
                     "-o", dir / ("z" + t + ".png")}).code == 0);
    REQUIRE(pnm_cli({"weights", dir / ("z" + t + ".png"), "--d", "7", "--threads", t,
                     "-o", dir / ("w" + t + ".pnmw"), "--preview",
                     dir / ("p" + t + ".png")}).code == 0);
  }
  CHECK(slurp(dir / "z1.png") == slurp(dir / "z2.png"));
  CHECK(slurp(dir / "w1.pnmw") == slurp(dir / "w2.pnmw"));
  CHECK(slurp(dir / "p1.png") == slurp(dir / "p2.png"));
}

TEST_CASE("evaluation weights ignore the prediction") {
  TempDir dir;
  REQUIRE(pnm_cli({"synth", "--kind", "zigzag", "--n", "2", "--size", "64x64",
                   "-o", dir / "gt.png"}).code == 0);
  REQUIRE(pnm_cli({"synth", "--kind", "split", "--size", "64x64", "-o", dir / "p1.png"}).code == 0);
  REQUIRE(pnm_cli({"synth", "--kind", "checkerboard", "--size", "64x64", "--cell", "4",
                   "-o", dir / "p2.png"}).code == 0);
  REQUIRE(pnm_cli({"eval", dir / "p1.png", dir / "gt.png", "--d", "5", "-o", dir / "r1.csv"}).code == 0);
  REQUIRE(pnm_cli({"eval", dir / "p2.png", dir / "gt.png", "--d", "5", "-o", dir / "r2.csv"}).code == 0);

  // Rebuild both reports from the standalone weight file.
  REQUIRE(pnm_cli({"weights", dir / "gt.png", "--d", "5", "-o", dir / "w.pnmw"}).code == 0);
  const auto w = io::read_weight_map(std::filesystem::path(dir / "w.pnmw"));
  const auto gt = io::read_label_mask(std::filesystem::path(dir / "gt.png"));
  for (const char* p : {"p1.png", "p2.png"}) {
    const auto pred = io::read_label_mask(std::filesystem::path(dir / p));
    const auto report = io::make_eval_report(accumulate(pred, gt), accumulate(pred, gt, w));
    const auto csv = slurp(dir / (std::string(p) == "p1.png" ? "r1.csv" : "r2.csv"));
    CHECK(csv.find(fmt::format("mean,,,{:.6f},,,{:.6f}", report.miou, report.pnm_iou)) !=
          std::string::npos);
  }
}
