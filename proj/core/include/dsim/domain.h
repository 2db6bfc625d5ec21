#ifndef DSIM_DOMAIN_H_
#define DSIM_DOMAIN_H_

#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace dsim {

// Absolute tolerance on the sum of a Domain's weights.
inline constexpr double kWeightSumTolerance = 1e-9;

// One image: identifier, label and embedding.
struct FeatureRecord {
  std::string image_id;
  std::string category_id;
  std::vector<float> vector;

  friend bool operator==(const FeatureRecord&, const FeatureRecord&) = default;
};

// Throws NonFiniteValue / EmptyInput when the record breaks its invariants.
void ValidateRecord(const FeatureRecord& record);

struct CategoryCentroid {
  std::string category_id;
  std::vector<double> mean;
  std::uint64_t count = 0;
  // count / total count of the owning Domain.
  double weight = 0.0;

  friend bool operator==(const CategoryCentroid&,
                         const CategoryCentroid&) = default;
};

// A dataset abstracted as weighted category centroids. Immutable once built.
//
// Centroids are kept sorted by category_id (byte order), ids are unique,
// every count is at least one and weights are count / total count, so they
// sum to one.
class Domain {
 public:
  // Canonicalizes a set of centroids: zero-count entries are dropped (their
  // ids are appended to `dropped_empty` when given), the rest are sorted and
  // their weights recomputed from counts. Incoming weight fields are ignored.
  //
  // Throws EmptyInput when nothing remains, DimensionMismatch for ragged or
  // zero-length means, NonFiniteValue for NaN/inf components and
  // DuplicateCategory for repeated ids.
  static Domain FromCentroids(std::vector<CategoryCentroid> centroids,
                              std::vector<std::string>* dropped_empty = nullptr);

  std::span<const CategoryCentroid> centroids() const { return centroids_; }
  const CategoryCentroid& operator[](std::size_t i) const {
    return centroids_[i];
  }
  std::size_t size() const { return centroids_.size(); }
  std::size_t dim() const { return dim_; }
  std::uint64_t total_count() const { return total_count_; }

  std::vector<double> weights() const;
  std::vector<std::string> category_ids() const;

  // nullptr when absent.
  const CategoryCentroid* Find(const std::string& category_id) const;

  friend bool operator==(const Domain&, const Domain&) = default;

 private:
  Domain(std::vector<CategoryCentroid> centroids, std::size_t dim,
         std::uint64_t total_count)
      : centroids_(std::move(centroids)),
        dim_(dim),
        total_count_(total_count) {}

  std::vector<CategoryCentroid> centroids_;
  std::size_t dim_ = 0;
  std::uint64_t total_count_ = 0;
};

// Groups records by category, averaging member vectors in double precision.
// Members are summed in (image_id, vector) order so the result does not
// depend on the order of `records`.
Domain BuildDomain(std::span<const FeatureRecord> records);

// Union of two domains with disjoint category ids; counts are pooled and
// weights renormalized over the combined total.
Domain MergeDomains(const Domain& a, const Domain& b);

// Keeps only `ids`, renormalizing weights over the retained counts.
Domain SubsetDomain(const Domain& domain, const std::set<std::string>& ids);

}  // namespace dsim

#endif  // DSIM_DOMAIN_H_
