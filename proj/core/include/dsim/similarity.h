#ifndef DSIM_SIMILARITY_H_
#define DSIM_SIMILARITY_H_

#include <span>

#include "dsim/domain.h"
#include "dsim/transport.h"

namespace dsim {

inline constexpr double kDefaultGamma = 0.01;

struct SimilarityConfig {
  double gamma = kDefaultGamma;
};

// Throws InvalidArgument unless gamma is finite and positive.
void ValidateConfig(const SimilarityConfig& config);

double EuclideanDistance(std::span<const double> a, std::span<const double> b);

// Distance between category means.
double CategoryDistance(const CategoryCentroid& a, const CategoryCentroid& b);

// Pairwise centroid distances in each domain's canonical order. `threads` = 0
// uses the hardware concurrency; the result does not depend on it.
Matrix CostMatrix(const Domain& source, const Domain& target,
                  unsigned threads = 0);

TransportProblem MakeTransportProblem(const Domain& source,
                                      const Domain& target,
                                      unsigned threads = 0);

struct DomainComparison {
  TransportProblem problem;
  TransportPlan plan;
  double distance = 0.0;
};

// Solves the transport problem between the domains' weights and keeps the
// plan around for audit output.
DomainComparison CompareDomains(const Domain& source, const Domain& target,
                                unsigned threads = 0);

// Earth Mover's Distance between the two weighted centroid sets.
double DomainDistance(const Domain& source, const Domain& target);

// exp(-gamma * distance).
double SimilarityFromDistance(double distance, const SimilarityConfig& config = {});

double DomainSimilarity(const Domain& source, const Domain& target,
                        const SimilarityConfig& config = {});

// A one-category source of weight 1 has to ship its mass to every target
// category, so its EMD is the target-weighted mean distance. No solver call.
double SingletonDistance(const CategoryCentroid& source, const Domain& target);

double SingletonSimilarity(const CategoryCentroid& source, const Domain& target,
                           const SimilarityConfig& config = {});

}  // namespace dsim

#endif  // DSIM_SIMILARITY_H_
