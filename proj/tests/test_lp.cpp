#include <cmath>
#include <numeric>
#include <vector>

#include "depthq/errors.hpp"
#include "depthq/lp.hpp"
#include "depthq/random.hpp"
#include "doctest.h"
#include "testkit/testkit.hpp"

using namespace depthq;

namespace {

LinearProgram to_program(const testkit::SmallLp& s) {
  LinearProgram lp(s.rows);
  for (std::size_t r = 0; r < s.rows; ++r) lp.set_rhs(r, s.rhs[r]);
  for (std::size_t j = 0; j < s.cost.size(); ++j) {
    std::vector<LpEntry> col;
    for (std::size_t r = 0; r < s.rows; ++r) {
      if (s.columns[j][r] != 0.0) col.push_back({r, s.columns[j][r]});
    }
    lp.add_variable(s.cost[j], s.lower[j], s.upper[j], std::move(col));
  }
  return lp;
}

void check_feasible(const LinearProgram& lp, const LpSolution& sol) {
  std::vector<double> ax(lp.rows(), 0.0);
  for (std::size_t j = 0; j < lp.variables(); ++j) {
    CHECK(sol.x[j] >= lp.lower()[j] - 1e-9);
    CHECK(sol.x[j] <= lp.upper()[j] + 1e-9);
    for (const auto& e : lp.column(j)) ax[e.row] += e.value * sol.x[j];
  }
  for (std::size_t r = 0; r < lp.rows(); ++r) CHECK(ax[r] == doctest::Approx(lp.rhs()[r]).epsilon(1e-9));
}

// Transportation-style program: highly degenerate at most vertices.
testkit::SmallLp degenerate_program(bool duplicate_row) {
  testkit::SmallLp s;
  // Supplies 1, 1 and demands 1, 1 over a 2x2 grid plus two slack arcs.
  const std::vector<std::vector<double>> rows{
      {1, 1, 0, 0, 1, 0},
      {0, 0, 1, 1, 0, 1},
      {1, 0, 1, 0, 0, 0},
      {0, 1, 0, 1, 0, 0},
  };
  std::vector<std::vector<double>> r = rows;
  std::vector<double> rhs{1, 1, 1, 1};
  if (duplicate_row) {
    r.push_back(rows[2]);
    rhs.push_back(1);
  }
  s.rows = r.size();
  s.rhs = rhs;
  s.cost = {1, 1, 1, 1, 0, 0};
  for (std::size_t j = 0; j < 6; ++j) {
    std::vector<double> col(s.rows);
    for (std::size_t i = 0; i < s.rows; ++i) col[i] = r[i][j];
    s.columns.push_back(col);
    s.lower.push_back(0.0);
    s.upper.push_back(INFINITY);
  }
  return s;
}

}  // namespace

TEST_CASE("u + v subject to u - v = 1") {
  LinearProgram lp(1);
  lp.set_rhs(0, 1.0);
  lp.add_variable(1.0, 0.0, INFINITY, {{0, 1.0}});
  lp.add_variable(1.0, 0.0, INFINITY, {{0, -1.0}});
  const auto sol = lp_solve(lp);
  CHECK(sol.x[0] == doctest::Approx(1.0));
  CHECK(sol.x[1] == doctest::Approx(0.0));
  CHECK(sol.objective == doctest::Approx(1.0));
  CHECK(sol.duals[0] == doctest::Approx(1.0));
}

TEST_CASE("quantile regression LP on three points has objective 1/2") {
  // minimize 0.5 sum(u + v) s.t. a + b z_k + u_k - v_k = y_k; a, b free.
  const std::vector<Vec2> pts{{0, 0}, {1, 1}, {2, 0}};
  const auto oracle = testkit::checkloss_line_oracle(pts, 0.5);
  CHECK(oracle.objective == doctest::Approx(0.5));
  LinearProgram lp(3);
  for (std::size_t k = 0; k < 3; ++k) lp.set_rhs(k, pts[k].y);
  // Free variables split into positive and negative parts.
  lp.add_variable(0.0, 0.0, INFINITY, {{0, 1}, {1, 1}, {2, 1}});
  lp.add_variable(0.0, 0.0, INFINITY, {{0, -1}, {1, -1}, {2, -1}});
  lp.add_variable(0.0, 0.0, INFINITY, {{1, 1}, {2, 2}});
  lp.add_variable(0.0, 0.0, INFINITY, {{1, -1}, {2, -2}});
  for (std::size_t k = 0; k < 3; ++k) {
    lp.add_variable(0.5, 0.0, INFINITY, {{k, 1.0}});
    lp.add_variable(0.5, 0.0, INFINITY, {{k, -1.0}});
  }
  const auto sol = lp_solve(lp);
  CHECK(sol.objective == doctest::Approx(oracle.objective).epsilon(1e-12));
  check_feasible(lp, sol);
}

TEST_CASE("degenerate program with a duplicate row matches vertex enumeration") {
  const auto plain = degenerate_program(false);
  const double expect = testkit::lp_vertex_enumeration(plain);
  // Both demands must be met through the unit-cost arcs.
  CHECK(expect == doctest::Approx(2.0));
  const auto dup = to_program(degenerate_program(true));
  const auto sol = lp_solve(dup);
  CHECK(sol.objective == doctest::Approx(expect).epsilon(1e-12));
  check_feasible(dup, sol);
}

TEST_CASE("random small programs match vertex enumeration") {
  Rng rng(99);
  int solved = 0;
  for (int trial = 0; trial < 80; ++trial) {
    testkit::SmallLp s;
    s.rows = 1 + static_cast<std::size_t>(rng.uniform(0, 3));
    const std::size_t nv = s.rows + 1 + static_cast<std::size_t>(rng.uniform(0, 5));
    // A feasible point fixes the right-hand side.
    std::vector<double> x0(nv);
    for (std::size_t j = 0; j < nv; ++j) {
      // Small integers make ties and degeneracy common.
      std::vector<double> col(s.rows);
      for (auto& a : col) a = std::floor(rng.uniform(-2, 3));
      s.columns.push_back(col);
      s.cost.push_back(std::floor(rng.uniform(-1, 4)));
      s.lower.push_back(trial % 2 == 0 ? 0.0 : -1.0);
      s.upper.push_back(rng.uniform() < 0.5 ? 2.0 : INFINITY);
      x0[j] = s.lower.back() + std::floor(rng.uniform(0, 3));
      if (x0[j] > s.upper.back()) x0[j] = s.upper.back();
    }
    s.rhs.assign(s.rows, 0.0);
    for (std::size_t j = 0; j < nv; ++j) {
      for (std::size_t r = 0; r < s.rows; ++r) s.rhs[r] += s.columns[j][r] * x0[j];
    }
    // Keep the program bounded by capping every variable.
    for (auto& u : s.upper) u = std::isfinite(u) ? u : 5.0;
    const double expect = testkit::lp_vertex_enumeration(s);
    if (!std::isfinite(expect)) continue;  // rank-deficient draw
    const auto lp = to_program(s);
    const auto sol = lp_solve(lp);
    CHECK(sol.objective == doctest::Approx(expect).epsilon(1e-9));
    check_feasible(lp, sol);
    ++solved;
  }
  CHECK(solved > 40);
}

TEST_CASE("row permutation does not change the solution") {
  const auto lp = to_program(degenerate_program(false));
  const auto base = lp_solve(lp);
  std::vector<std::size_t> perm{2, 0, 3, 1};
  const auto sol = lp_solve(lp.permuted_rows(perm));
  CHECK(sol.objective == doctest::Approx(base.objective));
  for (std::size_t j = 0; j < lp.variables(); ++j) CHECK(sol.x[j] == doctest::Approx(base.x[j]));
  for (std::size_t r = 0; r < 4; ++r) CHECK(sol.duals[perm[r]] == doctest::Approx(base.duals[r]));
}

TEST_CASE("infeasible and unbounded programs are contract violations") {
  LinearProgram infeasible(1);
  infeasible.set_rhs(0, -1.0);
  infeasible.add_variable(1.0, 0.0, INFINITY, {{0, 1.0}});
  CHECK_THROWS_AS(lp_solve(infeasible), ContractViolation);

  LinearProgram unbounded(1);
  unbounded.set_rhs(0, 0.0);
  unbounded.add_variable(-1.0, 0.0, INFINITY, {{0, 1.0}});
  unbounded.add_variable(0.0, 0.0, INFINITY, {{0, -1.0}});
  CHECK_THROWS_AS(lp_solve(unbounded), ContractViolation);
}

TEST_CASE("refactorization keeps long solves accurate") {
  // Many variables force several refactorizations.
  Rng rng(4);
  const std::size_t m = 30, nv = 200;
  LinearProgram lp(m);
  std::vector<double> rhs(m, 0.0);
  for (std::size_t j = 0; j < nv; ++j) {
    std::vector<LpEntry> col;
    for (std::size_t r = 0; r < m; ++r) {
      const double a = rng.normal();
      col.push_back({r, a});
      rhs[r] += 0.5 * a;
    }
    lp.add_variable(rng.normal(), 0.0, 1.0, std::move(col));
  }
  for (std::size_t r = 0; r < m; ++r) lp.set_rhs(r, rhs[r]);
  const auto sol = lp_solve(lp, {1e-9, 1e-9, 10, 0});
  check_feasible(lp, sol);
  const auto again = lp_solve(lp);
  CHECK(sol.objective == doctest::Approx(again.objective).epsilon(1e-9));
  // Reduced costs certify optimality.
  for (std::size_t j = 0; j < nv; ++j) {
    double d = lp.cost()[j];
    for (const auto& e : lp.column(j)) d -= sol.duals[e.row] * e.value;
    if (sol.x[j] <= 1e-9) CHECK(d >= -1e-7);
    else if (sol.x[j] >= 1.0 - 1e-9) CHECK(d <= 1e-7);
    else CHECK(std::abs(d) <= 1e-7);
  }
}
