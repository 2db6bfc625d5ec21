#include "dsim/similarity.h"

#include <cmath>
#include <string>

#include "dsim/errors.h"
#include "parallel.h"

namespace dsim {
namespace {

void CheckSameDim(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorCode::kDimensionMismatch,
                "dimensionality " + std::to_string(a) + " vs " +
                    std::to_string(b));
  }
}

}  // namespace

void ValidateConfig(const SimilarityConfig& config) {
  if (!std::isfinite(config.gamma) || config.gamma <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "gamma must be positive and finite, got " +
                    std::to_string(config.gamma));
  }
}

double EuclideanDistance(std::span<const double> a, std::span<const double> b) {
  CheckSameDim(a.size(), b.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    sum += d * d;
  }
  return std::sqrt(sum);
}

double CategoryDistance(const CategoryCentroid& a, const CategoryCentroid& b) {
  return EuclideanDistance(a.mean, b.mean);
}

Matrix CostMatrix(const Domain& source, const Domain& target,
                  unsigned threads) {
  CheckSameDim(source.dim(), target.dim());
  Matrix cost(source.size(), target.size());
  internal::ParallelFor(
      source.size(), threads, std::max<std::size_t>(1, 4096 / target.size()),
      [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
          auto row = cost.row(i);
          for (std::size_t j = 0; j < target.size(); ++j) {
            row[j] = CategoryDistance(source[i], target[j]);
          }
        }
      });
  return cost;
}

TransportProblem MakeTransportProblem(const Domain& source,
                                      const Domain& target, unsigned threads) {
  return {source.weights(), target.weights(),
          CostMatrix(source, target, threads)};
}

DomainComparison CompareDomains(const Domain& source, const Domain& target,
                                unsigned threads) {
  DomainComparison out;
  out.problem = MakeTransportProblem(source, target, threads);
  out.plan = SolveTransport(out.problem);
  out.distance = EmdValue(out.plan);
  return out;
}

double DomainDistance(const Domain& source, const Domain& target) {
  return CompareDomains(source, target).distance;
}

double SimilarityFromDistance(double distance, const SimilarityConfig& config) {
  ValidateConfig(config);
  return std::exp(-config.gamma * distance);
}

double DomainSimilarity(const Domain& source, const Domain& target,
                        const SimilarityConfig& config) {
  ValidateConfig(config);
  return SimilarityFromDistance(DomainDistance(source, target), config);
}

double SingletonDistance(const CategoryCentroid& source, const Domain& target) {
  CheckSameDim(source.mean.size(), target.dim());
  double total = 0.0;
  for (const auto& t : target.centroids()) {
    total += t.weight * EuclideanDistance(source.mean, t.mean);
  }
  return total;
}

double SingletonSimilarity(const CategoryCentroid& source, const Domain& target,
                           const SimilarityConfig& config) {
  ValidateConfig(config);
  return SimilarityFromDistance(SingletonDistance(source, target), config);
}

}  // namespace dsim
