#ifndef DSIM_SELECTION_H_
#define DSIM_SELECTION_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dsim/domain.h"
#include "dsim/similarity.h"

namespace dsim {

struct RankedCategory {
  std::string category_id;
  double similarity = 0.0;
  // Target-weighted mean distance; similarity = exp(-gamma * distance).
  double distance = 0.0;
  std::uint64_t count = 0;

  friend bool operator==(const RankedCategory&, const RankedCategory&) = default;
};

struct SelectionReport {
  std::string target_id;
  std::size_t k = 0;
  double gamma = kDefaultGamma;
  std::vector<RankedCategory> ranked;
  // First min(k, ranked.size()) ids of `ranked`.
  std::vector<std::string> selected;

  bool truncated() const { return k > ranked.size(); }

  friend bool operator==(const SelectionReport&, const SelectionReport&) = default;
};

// Scores every source category on its own against the target and orders
// them most similar first. The sort key is the singleton distance, which
// exp(-gamma * x) maps monotonically onto similarity, with category_id
// ascending among equal distances.
std::vector<RankedCategory> RankSourceCategories(const Domain& source,
                                                 const Domain& target,
                                                 const SimilarityConfig& config = {},
                                                 unsigned threads = 0);

// Greedy top-k. k larger than the source keeps everything. Throws
// InvalidArgument for k == 0.
SelectionReport SelectTopK(const Domain& source, const Domain& target,
                           std::size_t k, const SimilarityConfig& config = {},
                           std::string target_id = {});

struct SelectionTarget {
  std::string target_id;
  Domain domain;
  std::size_t k = 0;
};

struct UnionSelection {
  // Deduplicated union of every per-target selection, sorted.
  std::vector<std::string> category_ids;
  // One report per target, in input order.
  std::vector<SelectionReport> reports;
};

UnionSelection SelectUnion(const Domain& source,
                           std::span<const SelectionTarget> targets,
                           const SimilarityConfig& config = {});

}  // namespace dsim

#endif  // DSIM_SELECTION_H_
