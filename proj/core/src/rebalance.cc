#include "dsim/rebalance.h"

#include <algorithm>
#include <limits>
#include <random>

#include "dsim/errors.h"
#include "parallel.h"

namespace dsim {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t Fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Uniform in [0, bound). std::uniform_int_distribution is not specified
// bit-for-bit across standard libraries, so reject and reduce by hand.
std::uint64_t DrawBelow(std::mt19937_64& engine, std::uint64_t bound) {
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - (max % bound);
  for (;;) {
    const std::uint64_t x = engine();
    if (x < limit) return x % bound;
  }
}

}  // namespace

CategoryCounts CategoryCounts::FromImages(
    std::span<const std::pair<std::string, std::string>> category_image) {
  CategoryCounts out;
  out.image_ids.emplace();
  for (const auto& [category_id, image_id] : category_image) {
    (*out.image_ids)[category_id].push_back(image_id);
    ++out.counts[category_id];
  }
  return out;
}

CategoryCounts CategoryCounts::FromCounts(
    std::map<std::string, std::uint64_t> counts) {
  CategoryCounts out;
  out.counts = std::move(counts);
  return out;
}

HeadTailSplit PartitionHeadTail(const CategoryCounts& counts,
                                std::uint64_t threshold) {
  if (threshold == 0) {
    throw Error(ErrorCode::kInvalidArgument, "threshold must be at least 1");
  }
  HeadTailSplit split;
  for (const auto& [id, count] : counts.counts) {
    (count >= threshold ? split.head : split.tail).push_back(id);
  }
  return split;
}

double ImbalanceRatio(const CategoryCounts& counts) {
  if (counts.counts.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no categories");
  }
  std::uint64_t lo = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t hi = 0;
  for (const auto& [id, count] : counts.counts) {
    if (count == 0) {
      throw Error(ErrorCode::kZeroCount, "category '" + id + "' has no images");
    }
    lo = std::min(lo, count);
    hi = std::max(hi, count);
  }
  return static_cast<double>(hi) / static_cast<double>(lo);
}

std::uint64_t CategorySeed(std::uint64_t seed, const std::string& category_id) {
  return SplitMix64(seed ^ SplitMix64(Fnv1a64(category_id)));
}

SubsetManifest BalancedSubset(const CategoryCounts& counts, std::uint64_t cap,
                              std::uint64_t seed) {
  if (!counts.image_ids.has_value()) {
    throw Error(ErrorCode::kMissingImageIds,
                "balanced subsets need per-category image ids, not just counts");
  }
  if (cap == 0) {
    throw Error(ErrorCode::kInvalidArgument, "cap must be at least 1");
  }
  const auto& lists = *counts.image_ids;
  std::vector<const std::pair<const std::string, std::vector<std::string>>*>
      order;
  order.reserve(lists.size());
  for (const auto& entry : lists) order.push_back(&entry);

  std::vector<std::vector<std::string>> retained(order.size());
  internal::ParallelFor(
      order.size(), 0, 256, [&](std::size_t begin, std::size_t end) {
        for (std::size_t c = begin; c < end; ++c) {
          const auto& [category_id, images] = *order[c];
          std::vector<std::string> pool = images;
          std::sort(pool.begin(), pool.end());
          if (pool.size() > cap) {
            std::mt19937_64 engine(CategorySeed(seed, category_id));
            for (std::size_t i = 0; i < cap; ++i) {
              const std::size_t pick =
                  i + DrawBelow(engine, pool.size() - i);
              std::swap(pool[i], pool[pick]);
            }
            pool.resize(cap);
            std::sort(pool.begin(), pool.end());
          }
          retained[c] = std::move(pool);
        }
      });

  SubsetManifest manifest;
  manifest.seed = seed;
  manifest.cap = cap;
  for (std::size_t c = 0; c < order.size(); ++c) {
    manifest.entries.emplace(order[c]->first, std::move(retained[c]));
  }
  return manifest;
}

CategoryCounts RetainedCounts(const SubsetManifest& manifest) {
  std::map<std::string, std::uint64_t> counts;
  for (const auto& [id, images] : manifest.entries) counts[id] = images.size();
  return CategoryCounts::FromCounts(std::move(counts));
}

}  // namespace dsim
