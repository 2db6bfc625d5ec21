#ifndef DSIM_TESTS_ORACLES_RANDOM_INSTANCES_H_
#define DSIM_TESTS_ORACLES_RANDOM_INSTANCES_H_

// Generators for property-style tests. Everything is driven by an explicit
// std::mt19937_64 so a failing case can be replayed from its seed.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "dsim/domain.h"
#include "dsim/transport.h"
#include "transport_oracle.h"

namespace dsim::testing {

using Rng = std::mt19937_64;

inline std::int64_t UniformInt(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

inline double UniformReal(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// `parts` positive integers summing to `total` (total >= parts).
inline std::vector<std::int64_t> RandomComposition(Rng& rng,
                                                   std::int64_t total,
                                                   std::size_t parts) {
  std::set<std::int64_t> cuts;
  while (cuts.size() + 1 < parts) cuts.insert(UniformInt(rng, 1, total - 1));
  std::vector<std::int64_t> out;
  std::int64_t prev = 0;
  for (std::int64_t c : cuts) {
    out.push_back(c - prev);
    prev = c;
  }
  out.push_back(total - prev);
  return out;
}

// Supply and demand with denominators at most `max_denominator`, expressed
// over their common denominator.
inline oracle::RationalMasses RandomRationalMasses(Rng& rng, std::size_t m,
                                                   std::size_t n,
                                                   std::int64_t max_denominator = 20) {
  const std::int64_t ds = UniformInt(rng, std::int64_t(m), max_denominator);
  const std::int64_t dd = UniformInt(rng, std::int64_t(n), max_denominator);
  oracle::RationalMasses out;
  out.denominator = ds * dd;
  for (auto a : RandomComposition(rng, ds, m)) out.supply.push_back(a * dd);
  for (auto b : RandomComposition(rng, dd, n)) out.demand.push_back(b * ds);
  return out;
}

inline Matrix RandomCost(Rng& rng, std::size_t m, std::size_t n,
                         double max_cost = 10.0) {
  Matrix cost(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) cost(i, j) = UniformReal(rng, 0.0, max_cost);
  }
  return cost;
}

inline std::string CategoryName(const std::string& prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%05zu", i);
  return prefix + buf;
}

inline std::vector<CategoryCentroid> RandomCentroids(
    Rng& rng, std::size_t categories, std::size_t dim,
    const std::string& prefix = "c", double spread = 10.0,
    std::uint64_t max_count = 50) {
  std::vector<CategoryCentroid> out;
  for (std::size_t i = 0; i < categories; ++i) {
    CategoryCentroid c;
    c.category_id = CategoryName(prefix, i);
    c.count = static_cast<std::uint64_t>(UniformInt(rng, 1, std::int64_t(max_count)));
    for (std::size_t k = 0; k < dim; ++k) c.mean.push_back(UniformReal(rng, -spread, spread));
    out.push_back(std::move(c));
  }
  return out;
}

inline Domain RandomDomain(Rng& rng, std::size_t categories, std::size_t dim,
                           const std::string& prefix = "c",
                           double spread = 10.0) {
  return Domain::FromCentroids(RandomCentroids(rng, categories, dim, prefix, spread));
}

inline std::vector<FeatureRecord> RandomRecords(Rng& rng, std::size_t count,
                                                std::size_t categories,
                                                std::size_t dim) {
  std::vector<FeatureRecord> out;
  for (std::size_t r = 0; r < count; ++r) {
    FeatureRecord rec;
    rec.image_id = CategoryName("img", r);
    rec.category_id =
        CategoryName("cat", static_cast<std::size_t>(UniformInt(rng, 0, std::int64_t(categories) - 1)));
    for (std::size_t k = 0; k < dim; ++k) {
      rec.vector.push_back(static_cast<float>(UniformReal(rng, -5.0, 5.0)));
    }
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace dsim::testing

#endif  // DSIM_TESTS_ORACLES_RANDOM_INSTANCES_H_
