#include "dsim/domain.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "dsim/errors.h"

namespace dsim {
namespace {

bool AllFinite(std::span<const double> values) {
  return std::all_of(values.begin(), values.end(),
                     [](double v) { return std::isfinite(v); });
}

}  // namespace

void ValidateRecord(const FeatureRecord& record) {
  if (record.image_id.empty()) {
    throw Error(ErrorCode::kEmptyInput, "record with empty image_id");
  }
  if (record.category_id.empty()) {
    throw Error(ErrorCode::kEmptyInput,
                "record '" + record.image_id + "' has empty category_id");
  }
  if (record.vector.empty()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "record '" + record.image_id + "' has an empty feature vector");
  }
  for (std::size_t k = 0; k < record.vector.size(); ++k) {
    if (!std::isfinite(record.vector[k])) {
      throw Error(ErrorCode::kNonFiniteValue,
                  "record '" + record.image_id + "' component " +
                      std::to_string(k) + " is not finite");
    }
  }
}

Domain Domain::FromCentroids(std::vector<CategoryCentroid> centroids,
                             std::vector<std::string>* dropped_empty) {
  std::vector<CategoryCentroid> kept;
  kept.reserve(centroids.size());
  for (auto& c : centroids) {
    if (c.count == 0) {
      if (dropped_empty != nullptr) dropped_empty->push_back(c.category_id);
      continue;
    }
    kept.push_back(std::move(c));
  }
  if (kept.empty()) {
    throw Error(ErrorCode::kEmptyInput, "domain has no non-empty categories");
  }

  std::sort(kept.begin(), kept.end(),
            [](const CategoryCentroid& a, const CategoryCentroid& b) {
              return a.category_id < b.category_id;
            });

  const std::size_t dim = kept.front().mean.size();
  if (dim == 0) {
    throw Error(ErrorCode::kDimensionMismatch, "centroid with empty mean");
  }
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const auto& c = kept[i];
    if (c.category_id.empty()) {
      throw Error(ErrorCode::kEmptyInput, "centroid with empty category_id");
    }
    if (i > 0 && kept[i - 1].category_id == c.category_id) {
      throw Error(ErrorCode::kDuplicateCategory,
                  "category '" + c.category_id + "' appears twice");
    }
    if (c.mean.size() != dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "category '" + c.category_id + "' has dim " +
                      std::to_string(c.mean.size()) + ", expected " +
                      std::to_string(dim));
    }
    if (!AllFinite(c.mean)) {
      throw Error(ErrorCode::kNonFiniteValue,
                  "category '" + c.category_id + "' has a non-finite mean");
    }
    total += c.count;
  }

  const double denom = static_cast<double>(total);
  for (auto& c : kept) {
    c.weight = static_cast<double>(c.count) / denom;
  }
  return Domain(std::move(kept), dim, total);
}

std::vector<double> Domain::weights() const {
  std::vector<double> out;
  out.reserve(centroids_.size());
  for (const auto& c : centroids_) out.push_back(c.weight);
  return out;
}

std::vector<std::string> Domain::category_ids() const {
  std::vector<std::string> out;
  out.reserve(centroids_.size());
  for (const auto& c : centroids_) out.push_back(c.category_id);
  return out;
}

const CategoryCentroid* Domain::Find(const std::string& category_id) const {
  auto it = std::lower_bound(
      centroids_.begin(), centroids_.end(), category_id,
      [](const CategoryCentroid& c, const std::string& id) {
        return c.category_id < id;
      });
  if (it == centroids_.end() || it->category_id != category_id) return nullptr;
  return &*it;
}

Domain BuildDomain(std::span<const FeatureRecord> records) {
  if (records.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no feature records");
  }
  const std::size_t dim = records.front().vector.size();
  std::map<std::string, std::vector<const FeatureRecord*>> members;
  for (const auto& r : records) {
    ValidateRecord(r);
    if (r.vector.size() != dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "record '" + r.image_id + "' has dim " +
                      std::to_string(r.vector.size()) + ", expected " +
                      std::to_string(dim));
    }
    members[r.category_id].push_back(&r);
  }

  std::vector<CategoryCentroid> centroids;
  centroids.reserve(members.size());
  for (auto& [category_id, list] : members) {
    std::sort(list.begin(), list.end(),
              [](const FeatureRecord* a, const FeatureRecord* b) {
                if (a->image_id != b->image_id) return a->image_id < b->image_id;
                return a->vector < b->vector;
              });
    std::vector<double> sum(dim, 0.0);
    for (const FeatureRecord* r : list) {
      for (std::size_t k = 0; k < dim; ++k) {
        sum[k] += static_cast<double>(r->vector[k]);
      }
    }
    const double n = static_cast<double>(list.size());
    for (double& v : sum) v /= n;
    centroids.push_back({category_id, std::move(sum), list.size(), 0.0});
  }
  return Domain::FromCentroids(std::move(centroids));
}

Domain MergeDomains(const Domain& a, const Domain& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cannot merge domains of dim " + std::to_string(a.dim()) +
                    " and " + std::to_string(b.dim()));
  }
  std::vector<CategoryCentroid> all;
  all.reserve(a.size() + b.size());
  for (const auto& c : a.centroids()) all.push_back(c);
  for (const auto& c : b.centroids()) {
    if (a.Find(c.category_id) != nullptr) {
      throw Error(ErrorCode::kDuplicateCategory,
                  "category '" + c.category_id + "' present in both domains");
    }
    all.push_back(c);
  }
  return Domain::FromCentroids(std::move(all));
}

Domain SubsetDomain(const Domain& domain, const std::set<std::string>& ids) {
  if (ids.empty()) {
    throw Error(ErrorCode::kEmptyInput, "empty category subset");
  }
  std::vector<CategoryCentroid> kept;
  kept.reserve(ids.size());
  for (const auto& id : ids) {
    const CategoryCentroid* c = domain.Find(id);
    if (c == nullptr) {
      throw Error(ErrorCode::kUnknownCategory,
                  "category '" + id + "' is not in the domain");
    }
    kept.push_back(*c);
  }
  return Domain::FromCentroids(std::move(kept));
}

}  // namespace dsim
