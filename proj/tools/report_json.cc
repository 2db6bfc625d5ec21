#include "report_json.h"

#include <charconv>
#include <cstdio>

namespace dsim::tools {

Json SelectionReportToJson(const SelectionReport& report) {
  Json ranked = Json::array();
  for (const auto& r : report.ranked) {
    ranked.push_back({{"category_id", r.category_id},
                      {"similarity", r.similarity},
                      {"distance", r.distance},
                      {"count", r.count}});
  }
  return {{"target_id", report.target_id},
          {"k", report.k},
          {"gamma", report.gamma},
          {"source_categories", report.ranked.size()},
          {"truncated", report.truncated()},
          {"selected", report.selected},
          {"ranked", std::move(ranked)}};
}

Json UnionSelectionToJson(const UnionSelection& selection, double gamma) {
  Json targets = Json::array();
  for (const auto& r : selection.reports) {
    targets.push_back(SelectionReportToJson(r));
  }
  return {{"gamma", gamma},
          {"union_size", selection.category_ids.size()},
          {"union", selection.category_ids},
          {"targets", std::move(targets)}};
}

std::string FormatExact(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string FormatFixed6(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  return buf;
}

}  // namespace dsim::tools
