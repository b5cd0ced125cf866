#include "psim/adversary/assignment.hpp"

#include <algorithm>
#include <cmath>

namespace psim::adversary {
namespace {

constexpr double kBig = 1e15;

bool strictly_better(double candidate, double best) {
  return candidate < best - 1e-12 * std::max(1.0, std::abs(best));
}

bool feasible(double c) { return std::isfinite(c); }

struct Enumerator {
  const AssignmentProblem& p;
  std::vector<std::optional<std::size_t>> current;
  std::vector<bool> used;
  Assignment best;
  bool have_best = false;

  void run(std::size_t row) {
    if (row == p.rows()) {
      double c = assignment_cost(p, current);
      if (!have_best || strictly_better(c, best.total_cost)) {
        best.row_to_col = current;
        best.total_cost = c;
        have_best = true;
      }
      return;
    }
    for (std::size_t col = 0; col < p.cols(); ++col) {
      if (used[col] || !feasible(p.cost[row][col])) continue;
      used[col] = true;
      current[row] = col;
      run(row + 1);
      used[col] = false;
    }
    current[row] = std::nullopt;
    run(row + 1);
  }
};

// Square matrix, returns column per row. Classic potentials formulation.
std::vector<std::size_t> hungarian_square(const std::vector<std::vector<double>>& a) {
  std::size_t n = a.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      std::size_t i0 = p[j0], j1 = 0;
      double delta = inf;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = a[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n, 0);
  for (std::size_t j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

// forced[r] = column index, or cols for "unmatched"; unset rows are free.
Assignment hungarian_with(const AssignmentProblem& problem,
                          const std::vector<std::optional<std::size_t>>& forced) {
  std::size_t r = problem.rows(), c = problem.cols(), n = r + c;
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i < r && j < c) {
        double x = problem.cost[i][j];
        m[i][j] = feasible(x) ? x : kBig;
      } else if (i < r || j < c) {
        m[i][j] = problem.no_match_cost;
      }
    }
  }
  for (std::size_t i = 0; i < forced.size() && i < r; ++i) {
    if (!forced[i]) continue;
    std::size_t f = *forced[i];
    for (std::size_t j = 0; j < n; ++j) {
      bool allowed = f < c ? j == f : j >= c;
      if (!allowed) m[i][j] = kBig;
    }
    if (f < c) {
      for (std::size_t k = 0; k < n; ++k) {
        if (k != i) m[k][f] = kBig;
      }
    }
  }
  auto sq = hungarian_square(m);
  Assignment out;
  out.row_to_col.assign(r, std::nullopt);
  for (std::size_t i = 0; i < r; ++i) {
    if (sq[i] < c && feasible(problem.cost[i][sq[i]])) out.row_to_col[i] = sq[i];
  }
  out.total_cost = assignment_cost(problem, out.row_to_col);
  return out;
}

}  // namespace

double assignment_cost(const AssignmentProblem& problem,
                       const std::vector<std::optional<std::size_t>>& row_to_col) {
  double total = 0.0;
  std::vector<bool> col_used(problem.cols(), false);
  for (std::size_t i = 0; i < row_to_col.size(); ++i) {
    if (row_to_col[i]) {
      total += problem.cost[i][*row_to_col[i]];
      col_used[*row_to_col[i]] = true;
    } else {
      total += problem.no_match_cost;
    }
  }
  for (bool used : col_used) {
    if (!used) total += problem.no_match_cost;
  }
  return total;
}

Assignment solve_exhaustive(const AssignmentProblem& problem) {
  Enumerator e{problem, std::vector<std::optional<std::size_t>>(problem.rows()),
               std::vector<bool>(problem.cols(), false), {}, false};
  e.run(0);
  return e.best;
}

Assignment solve_hungarian(const AssignmentProblem& problem) {
  if (problem.rows() == 0 || problem.cols() == 0) {
    Assignment out;
    out.row_to_col.assign(problem.rows(), std::nullopt);
    out.total_cost = assignment_cost(problem, out.row_to_col);
    return out;
  }
  return hungarian_with(problem, {});
}

Assignment solve_assignment(const AssignmentProblem& problem) {
  std::size_t r = problem.rows(), c = problem.cols();
  if (r <= kExhaustiveLimit && c <= kExhaustiveLimit) return solve_exhaustive(problem);
  Assignment best = solve_hungarian(problem);
  if (r + c > kTieBreakLimit) return best;
  const double optimum = best.total_cost;
  // Fix rows one at a time to the earliest option that keeps the optimum.
  std::vector<std::optional<std::size_t>> forced(r);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t option = 0; option <= c; ++option) {
      if (option < c && !feasible(problem.cost[i][option])) continue;
      bool taken = false;
      for (std::size_t k = 0; k < i; ++k) {
        if (forced[k] && *forced[k] == option && option < c) taken = true;
      }
      if (taken) continue;
      forced[i] = option;
      Assignment trial = hungarian_with(problem, forced);
      bool consistent = true;
      for (std::size_t k = 0; k <= i; ++k) {
        std::size_t got = trial.row_to_col[k] ? *trial.row_to_col[k] : c;
        if (got != *forced[k]) consistent = false;
      }
      if (consistent && !strictly_better(optimum, trial.total_cost)) {
        best = trial;
        break;
      }
      forced[i].reset();
    }
    if (!forced[i]) {
      std::size_t got = best.row_to_col[i] ? *best.row_to_col[i] : c;
      forced[i] = got;
    }
  }
  return best;
}

}  // namespace psim::adversary
