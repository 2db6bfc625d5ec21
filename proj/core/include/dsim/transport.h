#ifndef DSIM_TRANSPORT_H_
#define DSIM_TRANSPORT_H_

#include <cstddef>
#include <span>
#include <vector>

namespace dsim {

// Feasibility and optimality comparisons are absolute.
inline constexpr double kFeasibilityTolerance = 1e-9;
// Supply or demand entries below this are removed before solving.
inline constexpr double kNegligibleMass = 1e-12;

// Row-major dense matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }
  std::span<double> row(std::size_t i) {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> data() const { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Balanced transportation problem: move `supply` onto `demand` at unit
// costs `cost(i, j)`.
struct TransportProblem {
  std::vector<double> supply;
  std::vector<double> demand;
  Matrix cost;
};

// Throws InfeasibleProblem (empty, negative or unbalanced masses),
// InvalidCost (negative or non-finite cost) or DimensionMismatch.
void ValidateProblem(const TransportProblem& problem);

struct TransportPlan {
  Matrix flow;
  std::vector<double> supply;
  std::vector<double> demand;
  // Sum of flow * cost.
  double objective = 0.0;
  // objective / total flow.
  double normalized_cost = 0.0;
  // Indices whose mass fell below kNegligibleMass and was left unrouted.
  std::vector<std::size_t> dropped_sources;
  std::vector<std::size_t> dropped_targets;
  std::size_t pivots = 0;
};

// Exact optimum of the transportation problem by the primal network simplex
// on the bipartite spanning-tree basis. The starting basis is the
// northwest-corner solution; entering arcs are priced by block search and
// the leaving arc is the blocking arc with the lowest (row, column). After a
// run of degenerate pivots the entering rule falls back to lowest index
// (Bland) until progress resumes, which rules out cycling.
TransportPlan SolveTransport(const TransportProblem& problem);

// Total work over total flow. Throws DegeneratePlan when no mass moves.
double EmdValue(const TransportPlan& plan);

double PlanObjective(const Matrix& flow, const Matrix& cost);

struct PlanCheck {
  double max_row_residual = 0.0;
  double max_col_residual = 0.0;
  double min_flow = 0.0;
  bool feasible = false;
};

// Residuals of `plan` against the problem's marginals. Feasible iff both
// residuals are at most kFeasibilityTolerance and no flow is below
// -kFeasibilityTolerance.
PlanCheck ValidatePlan(const TransportPlan& plan,
                       const TransportProblem& problem);

}  // namespace dsim

#endif  // DSIM_TRANSPORT_H_
