#pragma once

#include <limits>
#include <optional>
#include <vector>

namespace psim::adversary {

/// Marks a pair that may not be matched.
inline constexpr double kInfeasible = std::numeric_limits<double>::infinity();

/// Rectangular matching problem. Every row and every column may stay
/// unmatched at no_match_cost each.
struct AssignmentProblem {
  std::vector<std::vector<double>> cost;  // rows x cols
  double no_match_cost = 50.0;

  std::size_t rows() const { return cost.size(); }
  std::size_t cols() const { return cost.empty() ? 0 : cost.front().size(); }
};

struct Assignment {
  std::vector<std::optional<std::size_t>> row_to_col;
  double total_cost = 0.0;
};

/// Cost of an assignment summed in a fixed order: rows first, then the
/// no-match charge for unmatched columns.
double assignment_cost(const AssignmentProblem& problem,
                       const std::vector<std::optional<std::size_t>>& row_to_col);

/// Enumerates every partial injective matching. Among equal minima the
/// first in lexicographic order wins, where each row prefers lower column
/// indices and "unmatched" sorts last.
Assignment solve_exhaustive(const AssignmentProblem& problem);

/// O(n^3) shortest augmenting path over the (rows + cols) padded square.
Assignment solve_hungarian(const AssignmentProblem& problem);

/// Exhaustive up to six per side, otherwise Hungarian followed by the same
/// lexicographic tie-break while the padded size stays small enough.
Assignment solve_assignment(const AssignmentProblem& problem);

inline constexpr std::size_t kExhaustiveLimit = 6;
inline constexpr std::size_t kTieBreakLimit = 24;

}  // namespace psim::adversary
