#ifndef DSIM_REBALANCE_H_
#define DSIM_REBALANCE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dsim {

// Identifies the sampling procedure behind BalancedSubset. Bump it whenever
// the seed derivation or draw changes, since manifests are expected to be
// reproducible from (seed, version).
inline constexpr const char* kSamplerVersion = "dsim-sampler-v1";

// Per-category image frequencies, optionally with the member image ids.
struct CategoryCounts {
  std::map<std::string, std::uint64_t> counts;
  std::optional<std::map<std::string, std::vector<std::string>>> image_ids;

  // Counts are derived from (category_id, image_id) pairs.
  static CategoryCounts FromImages(
      std::span<const std::pair<std::string, std::string>> category_image);
  static CategoryCounts FromCounts(std::map<std::string, std::uint64_t> counts);
};

struct HeadTailSplit {
  std::vector<std::string> head;
  std::vector<std::string> tail;
};

// Categories with at least `threshold` images are head, the rest tail.
// Throws InvalidArgument when threshold is 0.
HeadTailSplit PartitionHeadTail(const CategoryCounts& counts,
                                std::uint64_t threshold);

// Largest over smallest category count. Throws EmptyInput when there are no
// categories and ZeroCount when any count is 0.
double ImbalanceRatio(const CategoryCounts& counts);

struct SubsetManifest {
  // Retained image ids per category, ascending.
  std::map<std::string, std::vector<std::string>> entries;
  std::uint64_t seed = 0;
  std::uint64_t cap = 0;

  friend bool operator==(const SubsetManifest&, const SubsetManifest&) = default;
};

// Keeps min(count, cap) images per category, drawn uniformly without
// replacement. Each category's draw uses its own generator seeded from
// (seed, category_id), so results do not depend on iteration order or on
// which other categories are present. Throws MissingImageIds when only
// counts are known and InvalidArgument when cap is 0.
SubsetManifest BalancedSubset(const CategoryCounts& counts, std::uint64_t cap,
                              std::uint64_t seed);

// Per-category sizes of a manifest.
CategoryCounts RetainedCounts(const SubsetManifest& manifest);

// 64-bit seed for one category's generator.
std::uint64_t CategorySeed(std::uint64_t seed, const std::string& category_id);

}  // namespace dsim

#endif  // DSIM_REBALANCE_H_
