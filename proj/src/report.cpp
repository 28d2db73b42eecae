#include <ostream>

#include <fmt/format.h>

#include "pnm/io.hpp"

namespace pnm::io {
namespace {

// fmt ignores the global locale unless asked, so output always uses '.'.
std::string num(double v) { return fmt::format("{:.6f}", v); }

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
  std::string quoted = "\"";
  for (const char ch : text) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + '"';
}

void finish(std::ostream& out) {
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "report write failed");
}

}  // namespace

EvalReport make_eval_report(const WeightedConfusion& unit,
                            const WeightedConfusion& weighted) {
  EvalReport report;
  const auto plain = miou(unit);
  const auto pnm = pnm_iou(weighted);
  report.miou = plain.mean;
  report.pnm_iou = pnm.mean;
  for (std::size_t k = 0; k < unit.union_mass.size(); ++k) {
    if (!plain.per_class[k]) continue;
    ClassScoreRow row;
    row.class_id = static_cast<ClassId>(k);
    row.intersection = unit.intersection[k];
    row.union_mass = unit.union_mass[k];
    row.iou = *plain.per_class[k];
    if (k < weighted.union_mass.size()) {
      row.pnm_intersection = weighted.intersection[k];
      row.pnm_union = weighted.union_mass[k];
      row.pnm_iou = pnm.per_class[k].value_or(0.0);
    }
    report.classes.push_back(row);
  }
  return report;
}

void write_report(const EvalReport& report, std::ostream& out) {
  out << "class,intersection,union,iou,pnm_intersection,pnm_union,pnm_iou\n";
  for (const auto& row : report.classes) {
    out << fmt::format("{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}\n",
                       row.class_id, row.intersection, row.union_mass, row.iou,
                       row.pnm_intersection, row.pnm_union, row.pnm_iou);
  }
  out << fmt::format("mean,,,{:.6f},,,{:.6f}\n", report.miou, report.pnm_iou);
  finish(out);
}

void write_report(const BinReport& report, std::ostream& out) {
  out << "lower,upper,error_count,total_count,error_rate\n";
  for (const auto& bin : report.bins) {
    const auto rate = bin.error_rate();
    out << fmt::format("{:.6f},{:.6f},{},{},{}\n", bin.lower, bin.upper,
                       bin.error_count, bin.total_count,
                       rate ? num(*rate) : std::string());
  }
  finish(out);
}

void write_report(std::span<const SeriesRow> rows, std::ostream& out) {
  out << "n,miou,pnm_iou\n";
  for (const auto& row : rows) {
    out << fmt::format("{},{:.6f},{:.6f}\n", row.n, row.miou, row.pnm_iou);
  }
  finish(out);
}

void write_report(std::span<const FileScoreRow> rows, std::ostream& out) {
  out << "file,miou,pnm_iou\n";
  for (const auto& row : rows) {
    out << fmt::format("{},{:.6f},{:.6f}\n", csv_field(row.file), row.miou, row.pnm_iou);
  }
  finish(out);
}

}  // namespace pnm::io
