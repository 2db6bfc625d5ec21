#include "dsim/transport.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dsim/errors.h"
#include "random_instances.h"
#include "transport_oracle.h"

namespace dsim {
namespace {

using testing::RandomCost;
using testing::RandomRationalMasses;
using testing::Rng;
using testing::UniformInt;
using testing::UniformReal;

Matrix FromRows(std::vector<std::vector<double>> rows) {
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

template <typename Fn>
ErrorCode CodeOf(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected dsim::Error";
  return ErrorCode::kIoError;
}

TEST(SolveTransport, ZeroCostPerfectMatching) {
  const TransportProblem p{{0.5, 0.5}, {0.5, 0.5}, FromRows({{0, 1}, {1, 0}})};
  const TransportPlan plan = SolveTransport(p);
  EXPECT_EQ(plan.flow(0, 0), 0.5);
  EXPECT_EQ(plan.flow(1, 1), 0.5);
  EXPECT_EQ(plan.flow(0, 1), 0.0);
  EXPECT_EQ(plan.flow(1, 0), 0.0);
  EXPECT_EQ(plan.objective, 0.0);
}

TEST(SolveTransport, SingleSourceIsForced) {
  const std::vector<double> w = {0.1, 0.2, 0.3, 0.4};
  const TransportProblem p{{1.0}, w, FromRows({{3, 1, 4, 1.5}})};
  const TransportPlan plan = SolveTransport(p);
  double expected = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    EXPECT_NEAR(plan.flow(0, j), w[j], 1e-15);
    expected += w[j] * p.cost(0, j);
  }
  EXPECT_NEAR(plan.objective, expected, 1e-15);
}

// The 2x2 polytope with margins (0.7, 0.3) / (0.4, 0.6) is parametrized by
// x = f11 in [0.1, 0.4]; the remaining flows follow from the margins.
double WorkedObjective(double x) {
  const double f12 = 0.7 - x, f21 = 0.4 - x, f22 = 0.6 - f12;
  return 1 * x + 2 * f12 + 3 * f21 + 1 * f22;
}

TEST(SolveTransport, WorkedTwoByTwoInstance) {
  double best_x = 0.1, best = WorkedObjective(0.1);
  for (int step = 0; step <= 3000; ++step) {
    const double x = 0.1 + 0.3 * step / 3000.0;
    if (WorkedObjective(x) < best) {
      best = WorkedObjective(x);
      best_x = x;
    }
  }
  ASSERT_NEAR(best, 1.3, 1e-12);
  ASSERT_NEAR(best_x, 0.4, 1e-12);

  const TransportProblem p{{0.7, 0.3}, {0.4, 0.6}, FromRows({{1, 2}, {3, 1}})};
  const TransportPlan plan = SolveTransport(p);
  EXPECT_NEAR(plan.objective, 1.3, 1e-12);
  EXPECT_NEAR(plan.flow(0, 0), 0.4, 1e-12);
  EXPECT_NEAR(plan.flow(0, 1), 0.3, 1e-12);
  EXPECT_NEAR(plan.flow(1, 0), 0.0, 1e-12);
  EXPECT_NEAR(plan.flow(1, 1), 0.3, 1e-12);
  EXPECT_NEAR(EmdValue(plan), 1.3, 1e-12);

  const oracle::RationalMasses masses{{7, 3}, {4, 6}, 10};
  EXPECT_NEAR(oracle::BruteForceTransport(masses, p.cost).objective, 1.3, 1e-12);
}

TEST(EmdValue, ZeroCostAndLinearity) {
  Rng rng(1);
  const auto masses = RandomRationalMasses(rng, 3, 4);
  TransportProblem p{masses.SupplyAsDouble(), masses.DemandAsDouble(),
                     Matrix(3, 4, 0.0)};
  EXPECT_EQ(EmdValue(SolveTransport(p)), 0.0);

  p.cost = RandomCost(rng, 3, 4);
  const double base = EmdValue(SolveTransport(p));
  TransportProblem doubled = p;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 4; ++j) doubled.cost(i, j) *= 2.0;
  }
  EXPECT_EQ(EmdValue(SolveTransport(doubled)), 2.0 * base);
}

TEST(EmdValue, NormalizesByTotalFlow) {
  // Masses summing to 2: emd is objective / 2.
  const TransportProblem p{{1.4, 0.6}, {0.8, 1.2}, FromRows({{1, 2}, {3, 1}})};
  const TransportPlan plan = SolveTransport(p);
  EXPECT_NEAR(plan.objective, 2.6, 1e-12);
  EXPECT_NEAR(EmdValue(plan), 1.3, 1e-12);
  EXPECT_NEAR(plan.normalized_cost, 1.3, 1e-12);

  TransportPlan empty;
  empty.flow = Matrix(2, 2, 0.0);
  EXPECT_EQ(CodeOf([&] { EmdValue(empty); }), ErrorCode::kDegeneratePlan);
}

TEST(SolveTransport, RejectsBadProblems) {
  EXPECT_EQ(CodeOf([] {
              SolveTransport({{0.5, 0.5}, {0.6, 0.5}, Matrix(2, 2, 1.0)});
            }),
            ErrorCode::kInfeasibleProblem);
  EXPECT_EQ(CodeOf([] { SolveTransport({{}, {1.0}, Matrix(0, 1)}); }),
            ErrorCode::kInfeasibleProblem);
  EXPECT_EQ(CodeOf([] {
              SolveTransport({{1.5, -0.5}, {1.0}, Matrix(2, 1, 1.0)});
            }),
            ErrorCode::kInfeasibleProblem);
  EXPECT_EQ(CodeOf([] {
              SolveTransport({{1.0}, {1.0}, FromRows({{-1.0}})});
            }),
            ErrorCode::kInvalidCost);
  EXPECT_EQ(CodeOf([] {
              SolveTransport(
                  {{1.0}, {1.0}, FromRows({{std::numeric_limits<double>::infinity()}})});
            }),
            ErrorCode::kInvalidCost);
  EXPECT_EQ(CodeOf([] {
              SolveTransport({{1.0}, {0.5, 0.5}, Matrix(1, 3, 1.0)});
            }),
            ErrorCode::kDimensionMismatch);
}

TEST(SolveTransport, DropsNegligibleMasses) {
  const TransportProblem p{{0.5, 1e-13, 0.5}, {1.0, 0.0},
                           FromRows({{1, 0}, {0, 0}, {2, 0}})};
  const TransportPlan plan = SolveTransport(p);
  EXPECT_EQ(plan.dropped_sources, std::vector<std::size_t>{1});
  EXPECT_EQ(plan.dropped_targets, std::vector<std::size_t>{1});
  EXPECT_NEAR(plan.objective, 1.5, 1e-12);
  EXPECT_TRUE(ValidatePlan(plan, p).feasible);
}

TEST(ValidatePlan, AcceptsOptimalRejectsPerturbed) {
  const TransportProblem p{{0.7, 0.3}, {0.4, 0.6}, FromRows({{1, 2}, {3, 1}})};
  TransportPlan plan = SolveTransport(p);
  const PlanCheck ok = ValidatePlan(plan, p);
  EXPECT_TRUE(ok.feasible);
  EXPECT_LE(ok.max_row_residual, 1e-15);
  EXPECT_GE(ok.min_flow, 0.0);

  plan.flow(1, 1) += 1e-3;
  const PlanCheck bad = ValidatePlan(plan, p);
  EXPECT_FALSE(bad.feasible);
  EXPECT_NEAR(bad.max_row_residual, 1e-3, 1e-12);
  EXPECT_NEAR(bad.max_col_residual, 1e-3, 1e-12);

  TransportPlan wrong_shape;
  wrong_shape.flow = Matrix(3, 2);
  EXPECT_EQ(CodeOf([&] { ValidatePlan(wrong_shape, p); }),
            ErrorCode::kDimensionMismatch);
}

TEST(ValidatePlan, NorthwestCornerIsFeasibleButNotBetter) {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = UniformInt(rng, 1, 8), n = UniformInt(rng, 1, 8);
    const auto masses = RandomRationalMasses(rng, m, n);
    const TransportProblem p{masses.SupplyAsDouble(), masses.DemandAsDouble(),
                             RandomCost(rng, m, n)};
    TransportPlan nw;
    nw.flow = oracle::NorthwestCornerFlow(p.supply, p.demand);
    nw.objective = PlanObjective(nw.flow, p.cost);
    EXPECT_TRUE(ValidatePlan(nw, p).feasible);
    EXPECT_GE(nw.objective, SolveTransport(p).objective - 1e-9);
  }
}

TEST(SolveTransport, MatchesBruteForceOnSmallProblems) {
  Rng rng(20240601);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = UniformInt(rng, 1, 4), n = UniformInt(rng, 1, 4);
    const auto masses = RandomRationalMasses(rng, m, n);
    const TransportProblem p{masses.SupplyAsDouble(), masses.DemandAsDouble(),
                             RandomCost(rng, m, n)};
    const TransportPlan plan = SolveTransport(p);
    const auto oracle_result = oracle::BruteForceTransport(masses, p.cost);
    ASSERT_GT(oracle_result.basic_feasible_solutions, 0u);
    EXPECT_NEAR(plan.objective, oracle_result.objective, 1e-9)
        << "trial " << trial << " m=" << m << " n=" << n;
    EXPECT_TRUE(ValidatePlan(plan, p).feasible);
  }
}

// Random feasible plans: northwest corner under random row/column orders are
// vertices; convex mixtures of them are interior points.
TEST(SolveTransport, DominatesRandomFeasiblePlans) {
  Rng rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t m = UniformInt(rng, 2, 6), n = UniformInt(rng, 2, 6);
    const auto masses = RandomRationalMasses(rng, m, n);
    const TransportProblem p{masses.SupplyAsDouble(), masses.DemandAsDouble(),
                             RandomCost(rng, m, n)};
    const double optimum = SolveTransport(p).objective;

    std::vector<std::size_t> rows(m), cols(n);
    std::iota(rows.begin(), rows.end(), 0);
    std::iota(cols.begin(), cols.end(), 0);
    for (int k = 0; k < 100; ++k) {
      Matrix mixed(m, n, 0.0);
      const double alpha = UniformReal(rng, 0.0, 1.0);
      for (int part = 0; part < 2; ++part) {
        std::shuffle(rows.begin(), rows.end(), rng);
        std::shuffle(cols.begin(), cols.end(), rng);
        std::vector<double> s, d;
        for (auto i : rows) s.push_back(p.supply[i]);
        for (auto j : cols) d.push_back(p.demand[j]);
        const Matrix nw = oracle::NorthwestCornerFlow(s, d);
        const double share = part == 0 ? alpha : 1.0 - alpha;
        for (std::size_t a = 0; a < m; ++a) {
          for (std::size_t b = 0; b < n; ++b) mixed(rows[a], cols[b]) += share * nw(a, b);
        }
      }
      TransportPlan random_plan;
      random_plan.flow = mixed;
      ASSERT_TRUE(ValidatePlan(random_plan, p).feasible);
      EXPECT_LE(optimum, PlanObjective(mixed, p.cost) + 1e-9);
    }
  }
}

TEST(SolveTransport, LargerInstancesHaveNoNegativeResidualCycle) {
  Rng rng(31);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t m = UniformInt(rng, 5, 60), n = UniformInt(rng, 5, 60);
    const auto masses = RandomRationalMasses(rng, m, n, 400);
    const TransportProblem p{masses.SupplyAsDouble(), masses.DemandAsDouble(),
                             RandomCost(rng, m, n)};
    const TransportPlan plan = SolveTransport(p);
    EXPECT_TRUE(ValidatePlan(plan, p).feasible);
    EXPECT_FALSE(oracle::HasNegativeResidualCycle(plan.flow, p.cost))
        << "trial " << trial;
  }
}

TEST(SolveTransport, HeavilyDegenerateInstancesTerminateOptimally) {
  Rng rng(41);
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t size = 10 + 10 * trial;
    const std::vector<double> uniform(size, 1.0 / double(size));
    Matrix cost(size, size);
    for (std::size_t i = 0; i < size; ++i) {
      for (std::size_t j = 0; j < size; ++j) cost(i, j) = double(UniformInt(rng, 0, 2));
    }
    const TransportProblem p{uniform, uniform, cost};
    const TransportPlan plan = SolveTransport(p);
    EXPECT_TRUE(ValidatePlan(plan, p).feasible);
    EXPECT_FALSE(oracle::HasNegativeResidualCycle(plan.flow, p.cost));
  }
}

TEST(SolveTransport, ScaleEquivariance) {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = UniformInt(rng, 1, 7), n = UniformInt(rng, 1, 7);
    const auto masses = RandomRationalMasses(rng, m, n);
    const TransportProblem p{masses.SupplyAsDouble(), masses.DemandAsDouble(),
                             RandomCost(rng, m, n)};
    const double base = EmdValue(SolveTransport(p));
    for (const double lambda : {0.25, 2.0, 8.0, 3.7}) {
      TransportProblem scaled = p;
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) scaled.cost(i, j) *= lambda;
      }
      EXPECT_NEAR(EmdValue(SolveTransport(scaled)), lambda * base,
                  1e-12 * std::max(1.0, lambda * base));
    }
  }
}

TEST(SolveTransport, Deterministic) {
  Rng rng(77);
  const auto masses = RandomRationalMasses(rng, 20, 20, 400);
  const TransportProblem p{masses.SupplyAsDouble(), masses.DemandAsDouble(),
                           RandomCost(rng, 20, 20)};
  const TransportPlan a = SolveTransport(p);
  const TransportPlan b = SolveTransport(p);
  EXPECT_EQ(a.flow, b.flow);
  EXPECT_EQ(a.objective, b.objective);
}

}  // namespace
}  // namespace dsim
