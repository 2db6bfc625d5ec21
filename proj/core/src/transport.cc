#include "dsim/transport.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

#include "dsim/errors.h"

namespace dsim {
namespace {

constexpr std::int32_t kNone = -1;
// Pivots with a step below this count as degenerate for anti-cycling.
constexpr double kDegenerateStep = 1e-15;

struct BasicArc {
  std::int32_t row;
  std::int32_t col;
  double flow;
};

// Network simplex over the complete bipartite graph rows x cols. Nodes
// 0..m-1 are rows, m..m+n-1 are columns; a basis is a spanning tree of
// m+n-1 arcs.
class TransportSimplex {
 public:
  TransportSimplex(std::span<const double> supply,
                   std::span<const double> demand, const Matrix& cost,
                   std::span<const std::size_t> rows,
                   std::span<const std::size_t> cols)
      : m_(rows.size()),
        n_(cols.size()),
        cost_(m_, n_),
        basic_(m_ * n_, 0),
        node_count_(m_ + n_) {
    double max_cost = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        cost_(i, j) = cost(rows[i], cols[j]);
        max_cost = std::max(max_cost, cost_(i, j));
      }
    }
    reduced_cost_tolerance_ = 1e-11 * std::max(1.0, max_cost);
    InitNorthwestCorner(supply, demand, rows, cols);
  }

  std::size_t Run() {
    const std::size_t cells = m_ * n_;
    const std::size_t pivot_limit = 100 * (cells + node_count_) + 1000;
    std::size_t pivots = 0;
    std::size_t degenerate_run = 0;
    BuildTree();
    for (;;) {
      const bool bland = degenerate_run > node_count_;
      const std::int64_t entering = bland ? PriceBland() : PriceBlock();
      if (entering == kNone) break;
      const double step = Pivot(static_cast<std::size_t>(entering));
      degenerate_run = step < kDegenerateStep ? degenerate_run + 1 : 0;
      if (++pivots > pivot_limit) {
        throw Error(ErrorCode::kInvalidArgument,
                    "transport simplex exceeded its pivot limit");
      }
    }
    return pivots;
  }

  void WriteFlow(Matrix& flow, std::span<const std::size_t> rows,
                 std::span<const std::size_t> cols) const {
    for (const BasicArc& a : arcs_) {
      flow(rows[a.row], cols[a.col]) = std::max(0.0, a.flow);
    }
  }

 private:
  std::size_t Cell(std::int32_t row, std::int32_t col) const {
    return static_cast<std::size_t>(row) * n_ + static_cast<std::size_t>(col);
  }

  void InitNorthwestCorner(std::span<const double> supply,
                           std::span<const double> demand,
                           std::span<const std::size_t> rows,
                           std::span<const std::size_t> cols) {
    std::vector<double> s(m_), d(n_);
    for (std::size_t i = 0; i < m_; ++i) s[i] = supply[rows[i]];
    for (std::size_t j = 0; j < n_; ++j) d[j] = demand[cols[j]];
    arcs_.reserve(node_count_ - 1);
    std::size_t i = 0, j = 0;
    for (;;) {
      const double x = std::max(0.0, std::min(s[i], d[j]));
      s[i] -= x;
      d[j] -= x;
      arcs_.push_back({static_cast<std::int32_t>(i),
                       static_cast<std::int32_t>(j), x});
      basic_[Cell(arcs_.back().row, arcs_.back().col)] = 1;
      if (i + 1 == m_ && j + 1 == n_) break;
      // Exactly one index advances per step, so the cells form a staircase
      // spanning tree even when a row and column exhaust together.
      if (i + 1 == m_) {
        ++j;
      } else if (j + 1 == n_) {
        ++i;
      } else if (s[i] < d[j]) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  void BuildTree() {
    node_arcs_.assign(node_count_, {});
    for (std::size_t k = 0; k < arcs_.size(); ++k) {
      node_arcs_[arcs_[k].row].push_back(static_cast<std::int32_t>(k));
      node_arcs_[m_ + arcs_[k].col].push_back(static_cast<std::int32_t>(k));
    }
    parent_.assign(node_count_, kNone);
    parent_arc_.assign(node_count_, kNone);
    depth_.assign(node_count_, 0);
    potential_.assign(node_count_, 0.0);
    Hang(0);
  }

  std::int32_t OtherEnd(const BasicArc& a, std::int32_t node) const {
    const std::int32_t col_node = static_cast<std::int32_t>(m_) + a.col;
    return node == col_node ? a.row : col_node;
  }

  // Recomputes parent, depth and potential for every node below `top`,
  // whose own labels must already be set. Labels depend only on the unique
  // root path, so partial relabelling matches a full rebuild exactly.
  void Hang(std::int32_t top) {
    queue_.clear();
    queue_.push_back(top);
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      const std::int32_t node = queue_[head];
      for (const std::int32_t k : node_arcs_[node]) {
        if (k == parent_arc_[node]) continue;
        const BasicArc& a = arcs_[k];
        const std::int32_t other = OtherEnd(a, node);
        parent_[other] = node;
        parent_arc_[other] = k;
        depth_[other] = depth_[node] + 1;
        // u_row + v_col = cost on every basic arc.
        potential_[other] = cost_(a.row, a.col) - potential_[node];
        queue_.push_back(other);
      }
    }
  }

  void Unlink(std::int32_t node, std::int32_t k) {
    auto& list = node_arcs_[node];
    *std::find(list.begin(), list.end(), k) = list.back();
    list.pop_back();
  }

  double ReducedCost(std::size_t cell) const {
    const std::size_t i = cell / n_;
    const std::size_t j = cell % n_;
    return cost_(i, j) - potential_[i] - potential_[m_ + j];
  }

  std::int64_t PriceBlock() {
    const std::size_t cells = m_ * n_;
    const std::size_t block = std::min<std::size_t>(
        cells, std::max<std::size_t>(
                   32, static_cast<std::size_t>(std::sqrt(double(cells)))));
    std::int64_t best = kNone;
    double best_value = -reduced_cost_tolerance_;
    std::size_t in_block = 0;
    std::size_t scanned = 0;
    std::size_t cell = next_cell_;
    while (scanned < cells) {
      if (!basic_[cell]) {
        const double r = ReducedCost(cell);
        if (r < best_value) {
          best_value = r;
          best = static_cast<std::int64_t>(cell);
        }
      }
      ++scanned;
      if (++cell == cells) cell = 0;
      if (++in_block == block) {
        if (best != kNone) break;
        in_block = 0;
      }
    }
    next_cell_ = cell;
    return best;
  }

  std::int64_t PriceBland() const {
    const std::size_t cells = m_ * n_;
    for (std::size_t cell = 0; cell < cells; ++cell) {
      if (!basic_[cell] && ReducedCost(cell) < -reduced_cost_tolerance_) {
        return static_cast<std::int64_t>(cell);
      }
    }
    return kNone;
  }

  // Pushes flow around the cycle closed by `cell`; returns the step size.
  double Pivot(std::size_t cell) {
    const auto row = static_cast<std::int32_t>(cell / n_);
    const auto col = static_cast<std::int32_t>(cell % n_);

    // Walking the tree path from the entering column to the entering row,
    // arcs alternate decrease/increase starting with a decrease; the same
    // holds counting from the row end.
    cycle_minus_.clear();
    cycle_plus_.clear();
    const std::int32_t col_node = static_cast<std::int32_t>(m_) + col;
    std::int32_t x = col_node;
    std::int32_t y = row;
    std::size_t x_steps = 0, y_steps = 0;
    column_side_.clear();
    while (x != y) {
      if (depth_[x] >= depth_[y]) {
        if (x_steps++ % 2 == 0) {
          cycle_minus_.push_back(parent_arc_[x]);
          column_side_.push_back(1);
        } else {
          cycle_plus_.push_back(parent_arc_[x]);
        }
        x = parent_[x];
      } else {
        if (y_steps++ % 2 == 0) {
          cycle_minus_.push_back(parent_arc_[y]);
          column_side_.push_back(0);
        } else {
          cycle_plus_.push_back(parent_arc_[y]);
        }
        y = parent_[y];
      }
    }

    std::int32_t leaving = kNone;
    bool leaving_on_column_side = false;
    double theta = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < cycle_minus_.size(); ++t) {
      const std::int32_t k = cycle_minus_[t];
      const BasicArc& a = arcs_[k];
      if (a.flow < theta ||
          (a.flow == theta &&
           Cell(a.row, a.col) < Cell(arcs_[leaving].row, arcs_[leaving].col))) {
        theta = a.flow;
        leaving = k;
        leaving_on_column_side = column_side_[t] != 0;
      }
    }
    theta = std::max(0.0, theta);

    for (const std::int32_t k : cycle_plus_) arcs_[k].flow += theta;
    for (const std::int32_t k : cycle_minus_) {
      arcs_[k].flow = std::max(0.0, arcs_[k].flow - theta);
    }
    BasicArc& out = arcs_[leaving];
    basic_[Cell(out.row, out.col)] = 0;
    Unlink(out.row, leaving);
    Unlink(static_cast<std::int32_t>(m_) + out.col, leaving);
    out = {row, col, theta};
    basic_[cell] = 1;
    node_arcs_[row].push_back(leaving);
    node_arcs_[col_node].push_back(leaving);

    // The entering endpoint on the leaving arc's side was cut off from the
    // root; hang that piece from the other endpoint.
    const std::int32_t top = leaving_on_column_side ? col_node : row;
    const std::int32_t anchor = leaving_on_column_side ? row : col_node;
    parent_[top] = anchor;
    parent_arc_[top] = leaving;
    depth_[top] = depth_[anchor] + 1;
    potential_[top] = cost_(row, col) - potential_[anchor];
    Hang(top);
    return theta;
  }

  std::size_t m_;
  std::size_t n_;
  Matrix cost_;
  std::vector<char> basic_;
  std::size_t node_count_;
  double reduced_cost_tolerance_ = 0.0;
  std::size_t next_cell_ = 0;

  std::vector<BasicArc> arcs_;
  std::vector<std::vector<std::int32_t>> node_arcs_;
  std::vector<std::int32_t> parent_;
  std::vector<std::int32_t> parent_arc_;
  std::vector<std::int32_t> depth_;
  std::vector<double> potential_;
  std::vector<std::int32_t> queue_;
  std::vector<std::int32_t> cycle_minus_;
  std::vector<std::int32_t> cycle_plus_;
  std::vector<char> column_side_;
};

void CheckMasses(std::span<const double> masses, const char* what) {
  if (masses.empty()) {
    throw Error(ErrorCode::kInfeasibleProblem, std::string("empty ") + what);
  }
  for (std::size_t k = 0; k < masses.size(); ++k) {
    if (!std::isfinite(masses[k]) || masses[k] < 0.0) {
      throw Error(ErrorCode::kInfeasibleProblem,
                  std::string(what) + "[" + std::to_string(k) +
                      "] is negative or not finite");
    }
  }
}

}  // namespace

void ValidateProblem(const TransportProblem& problem) {
  CheckMasses(problem.supply, "supply");
  CheckMasses(problem.demand, "demand");
  if (problem.cost.rows() != problem.supply.size() ||
      problem.cost.cols() != problem.demand.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cost matrix is " + std::to_string(problem.cost.rows()) + "x" +
                    std::to_string(problem.cost.cols()) + " but masses are " +
                    std::to_string(problem.supply.size()) + "x" +
                    std::to_string(problem.demand.size()));
  }
  for (const double c : problem.cost.data()) {
    if (!std::isfinite(c) || c < 0.0) {
      throw Error(ErrorCode::kInvalidCost, "cost entry is negative or not finite");
    }
  }
  const double total_supply =
      std::accumulate(problem.supply.begin(), problem.supply.end(), 0.0);
  const double total_demand =
      std::accumulate(problem.demand.begin(), problem.demand.end(), 0.0);
  if (std::abs(total_supply - total_demand) > kFeasibilityTolerance) {
    throw Error(ErrorCode::kInfeasibleProblem,
                "total supply " + std::to_string(total_supply) +
                    " differs from total demand " +
                    std::to_string(total_demand));
  }
}

TransportPlan SolveTransport(const TransportProblem& problem) {
  ValidateProblem(problem);

  TransportPlan plan;
  plan.supply = problem.supply;
  plan.demand = problem.demand;
  plan.flow = Matrix(problem.supply.size(), problem.demand.size());

  std::vector<std::size_t> rows, cols;
  for (std::size_t i = 0; i < problem.supply.size(); ++i) {
    (problem.supply[i] < kNegligibleMass ? plan.dropped_sources : rows)
        .push_back(i);
  }
  for (std::size_t j = 0; j < problem.demand.size(); ++j) {
    (problem.demand[j] < kNegligibleMass ? plan.dropped_targets : cols)
        .push_back(j);
  }
  if (rows.empty() || cols.empty()) {
    throw Error(ErrorCode::kInfeasibleProblem, "no transportable mass");
  }

  TransportSimplex simplex(problem.supply, problem.demand, problem.cost, rows,
                           cols);
  plan.pivots = simplex.Run();
  simplex.WriteFlow(plan.flow, rows, cols);

  plan.objective = PlanObjective(plan.flow, problem.cost);
  const double total_flow =
      std::accumulate(plan.flow.data().begin(), plan.flow.data().end(), 0.0);
  plan.normalized_cost = total_flow > 0.0 ? plan.objective / total_flow : 0.0;
  return plan;
}

double PlanObjective(const Matrix& flow, const Matrix& cost) {
  if (flow.rows() != cost.rows() || flow.cols() != cost.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "flow and cost shapes differ");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < flow.rows(); ++i) {
    for (std::size_t j = 0; j < flow.cols(); ++j) {
      if (flow(i, j) != 0.0) total += flow(i, j) * cost(i, j);
    }
  }
  return total;
}

double EmdValue(const TransportPlan& plan) {
  const double total_flow =
      std::accumulate(plan.flow.data().begin(), plan.flow.data().end(), 0.0);
  if (!(total_flow > 0.0)) {
    throw Error(ErrorCode::kDegeneratePlan, "plan moves no mass");
  }
  return plan.objective / total_flow;
}

PlanCheck ValidatePlan(const TransportPlan& plan,
                       const TransportProblem& problem) {
  const Matrix& flow = plan.flow;
  if (flow.rows() != problem.supply.size() ||
      flow.cols() != problem.demand.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "plan is " + std::to_string(flow.rows()) + "x" +
                    std::to_string(flow.cols()) + ", problem is " +
                    std::to_string(problem.supply.size()) + "x" +
                    std::to_string(problem.demand.size()));
  }
  PlanCheck check;
  check.min_flow = std::numeric_limits<double>::infinity();
  std::vector<double> col_sums(flow.cols(), 0.0);
  for (std::size_t i = 0; i < flow.rows(); ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < flow.cols(); ++j) {
      const double f = flow(i, j);
      row_sum += f;
      col_sums[j] += f;
      check.min_flow = std::min(check.min_flow, f);
    }
    check.max_row_residual =
        std::max(check.max_row_residual, std::abs(row_sum - problem.supply[i]));
  }
  for (std::size_t j = 0; j < flow.cols(); ++j) {
    check.max_col_residual = std::max(check.max_col_residual,
                                      std::abs(col_sums[j] - problem.demand[j]));
  }
  check.feasible = check.max_row_residual <= kFeasibilityTolerance &&
                   check.max_col_residual <= kFeasibilityTolerance &&
                   check.min_flow >= -kFeasibilityTolerance;
  return check;
}

}  // namespace dsim
