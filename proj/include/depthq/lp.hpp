#pragma once

// Bounded-variable primal simplex for
//   minimize c'x  subject to  A x = b,  l <= x <= u
// with finite l and possibly infinite u. Columns are stored sparse; the
// basis inverse is kept dense and refactored periodically.

#include <cstddef>
#include <limits>
#include <vector>

namespace depthq {

struct LpEntry {
  std::size_t row;
  double value;
};

class LinearProgram {
 public:
  explicit LinearProgram(std::size_t rows);

  // Returns the variable index.
  std::size_t add_variable(double cost, double lower, double upper,
                           std::vector<LpEntry> column);
  void set_rhs(std::size_t row, double value);

  std::size_t rows() const noexcept { return rhs_.size(); }
  std::size_t variables() const noexcept { return cost_.size(); }

  const std::vector<double>& cost() const noexcept { return cost_; }
  const std::vector<double>& lower() const noexcept { return lower_; }
  const std::vector<double>& upper() const noexcept { return upper_; }
  const std::vector<double>& rhs() const noexcept { return rhs_; }
  const std::vector<LpEntry>& column(std::size_t j) const { return columns_[j]; }

  // Same program with rows renumbered: new row perm[r] holds old row r.
  LinearProgram permuted_rows(const std::vector<std::size_t>& perm) const;

 private:
  std::vector<double> cost_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<std::vector<LpEntry>> columns_;
  std::vector<double> rhs_;
};

struct LpOptions {
  double pivot_tolerance = 1e-9;
  double optimality_tolerance = 1e-9;
  std::size_t refactor_interval = 50;
  // 0 selects a limit proportional to the problem size.
  std::size_t max_iterations = 0;
};

struct LpSolution {
  std::vector<double> x;
  // Simplex multipliers y with y' B = c_B; reduced costs are c - A'y.
  std::vector<double> duals;
  double objective = 0.0;
  // Structural variables in the final basis, in basis order.
  std::vector<std::size_t> basis;
  std::size_t iterations = 0;
};

// Optimal basic solution. Entering and leaving choices follow Bland's rule
// (smallest eligible index), so the result is deterministic. Throws
// ContractViolation when the program is infeasible or unbounded.
LpSolution lp_solve(const LinearProgram& program, const LpOptions& options = {});

}  // namespace depthq
