#include "dsim/selection.h"

#include <algorithm>
#include <set>

#include "dsim/errors.h"
#include "parallel.h"

namespace dsim {

std::vector<RankedCategory> RankSourceCategories(const Domain& source,
                                                 const Domain& target,
                                                 const SimilarityConfig& config,
                                                 unsigned threads) {
  ValidateConfig(config);
  if (source.dim() != target.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "source dim " + std::to_string(source.dim()) +
                    " vs target dim " + std::to_string(target.dim()));
  }
  std::vector<RankedCategory> ranked(source.size());
  internal::ParallelFor(
      source.size(), threads, 64, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
          const CategoryCentroid& s = source[i];
          const double distance = SingletonDistance(s, target);
          ranked[i] = {s.category_id, SimilarityFromDistance(distance, config),
                       distance, s.count};
        }
      });
  std::sort(ranked.begin(), ranked.end(),
            [](const RankedCategory& a, const RankedCategory& b) {
              if (a.distance != b.distance) return a.distance < b.distance;
              return a.category_id < b.category_id;
            });
  return ranked;
}

SelectionReport SelectTopK(const Domain& source, const Domain& target,
                           std::size_t k, const SimilarityConfig& config,
                           std::string target_id) {
  if (k == 0) {
    throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  }
  SelectionReport report;
  report.target_id = std::move(target_id);
  report.k = k;
  report.gamma = config.gamma;
  report.ranked = RankSourceCategories(source, target, config);
  const std::size_t take = std::min(k, report.ranked.size());
  report.selected.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    report.selected.push_back(report.ranked[i].category_id);
  }
  return report;
}

UnionSelection SelectUnion(const Domain& source,
                           std::span<const SelectionTarget> targets,
                           const SimilarityConfig& config) {
  if (targets.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no selection targets");
  }
  UnionSelection out;
  out.reports.reserve(targets.size());
  std::set<std::string> merged;
  for (const SelectionTarget& t : targets) {
    out.reports.push_back(SelectTopK(source, t.domain, t.k, config, t.target_id));
    merged.insert(out.reports.back().selected.begin(),
                  out.reports.back().selected.end());
  }
  out.category_ids.assign(merged.begin(), merged.end());
  return out;
}

}  // namespace dsim
