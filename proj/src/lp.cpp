#include "depthq/lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "depthq/errors.hpp"

namespace depthq {

LinearProgram::LinearProgram(std::size_t rows) : rhs_(rows, 0.0) {}

std::size_t LinearProgram::add_variable(double cost, double lower, double upper,
                                        std::vector<LpEntry> column) {
  if (!std::isfinite(lower)) throw ContractViolation("LP variables need a finite lower bound");
  if (!(upper >= lower)) throw ContractViolation("LP variable has upper < lower");
  for (const LpEntry& e : column) {
    if (e.row >= rows()) throw ContractViolation("LP column entry outside the row range");
  }
  cost_.push_back(cost);
  lower_.push_back(lower);
  upper_.push_back(upper);
  columns_.push_back(std::move(column));
  return cost_.size() - 1;
}

void LinearProgram::set_rhs(std::size_t row, double value) { rhs_.at(row) = value; }

LinearProgram LinearProgram::permuted_rows(const std::vector<std::size_t>& perm) const {
  if (perm.size() != rows()) throw ContractViolation("row permutation has the wrong size");
  LinearProgram out(rows());
  for (std::size_t r = 0; r < rows(); ++r) out.rhs_[perm[r]] = rhs_[r];
  for (std::size_t j = 0; j < variables(); ++j) {
    std::vector<LpEntry> col = columns_[j];
    for (auto& e : col) e.row = perm[e.row];
    out.add_variable(cost_[j], lower_[j], upper_[j], std::move(col));
  }
  return out;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class State : unsigned char { kBasic, kLower, kUpper };

class Simplex {
 public:
  Simplex(const LinearProgram& lp, const LpOptions& options)
      : lp_(lp),
        opt_(options),
        m_(lp.rows()),
        structural_(lp.variables()),
        total_(structural_ + m_) {
    lower_ = lp.lower();
    upper_ = lp.upper();
    columns_.reserve(total_);
    for (std::size_t j = 0; j < structural_; ++j) columns_.push_back(lp.column(j));
    x_.assign(total_, 0.0);
    state_.assign(total_, State::kLower);
    for (std::size_t j = 0; j < structural_; ++j) x_[j] = lower_[j];

    // Artificial i carries the initial residual of row i with a sign that
    // makes its starting value nonnegative.
    std::vector<double> residual = lp.rhs();
    for (std::size_t j = 0; j < structural_; ++j) {
      for (const LpEntry& e : columns_[j]) residual[e.row] -= e.value * x_[j];
    }
    basis_.resize(m_);
    binv_.assign(m_ * m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      const double sign = residual[i] >= 0.0 ? 1.0 : -1.0;
      columns_.push_back({LpEntry{i, sign}});
      lower_.push_back(0.0);
      upper_.push_back(kInf);
      const std::size_t a = structural_ + i;
      x_[a] = std::abs(residual[i]);
      state_[a] = State::kBasic;
      basis_[i] = a;
      binv_[i * m_ + i] = sign;
      initial_infeasibility_ += std::abs(residual[i]);
    }
    max_iterations_ = opt_.max_iterations > 0 ? opt_.max_iterations
                                              : 50 * (total_ + m_) + 1000;
  }

  LpSolution solve() {
    std::vector<double> phase1(total_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) phase1[structural_ + i] = 1.0;
    run(phase1);
    double infeasibility = 0.0;
    for (std::size_t i = 0; i < m_; ++i) infeasibility += x_[structural_ + i];
    if (infeasibility > 1e-9 * (1.0 + initial_infeasibility_)) {
      throw ContractViolation("linear program is infeasible");
    }
    drive_out_artificials();
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t a = structural_ + i;
      upper_[a] = 0.0;
      if (state_[a] != State::kBasic) {
        x_[a] = 0.0;
        state_[a] = State::kLower;
      }
    }
    refactor();

    std::vector<double> phase2(total_, 0.0);
    std::copy(lp_.cost().begin(), lp_.cost().end(), phase2.begin());
    run(phase2);

    LpSolution sol;
    sol.x.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(structural_));
    sol.duals = multipliers(phase2);
    for (std::size_t j = 0; j < structural_; ++j) sol.objective += lp_.cost()[j] * sol.x[j];
    for (std::size_t b : basis_) {
      if (b < structural_) sol.basis.push_back(b);
    }
    sol.iterations = iterations_;
    return sol;
  }

 private:
  double& binv(std::size_t r, std::size_t c) { return binv_[r * m_ + c]; }

  std::vector<double> multipliers(const std::vector<double>& cost) const {
    std::vector<double> pi(m_, 0.0);
    for (std::size_t k = 0; k < m_; ++k) {
      const double cb = cost[basis_[k]];
      if (cb == 0.0) continue;
      const double* row = &binv_[k * m_];
      for (std::size_t i = 0; i < m_; ++i) pi[i] += cb * row[i];
    }
    return pi;
  }

  std::vector<double> ftran(std::size_t j) const {
    std::vector<double> alpha(m_, 0.0);
    for (const LpEntry& e : columns_[j]) {
      for (std::size_t k = 0; k < m_; ++k) alpha[k] += binv_[k * m_ + e.row] * e.value;
    }
    return alpha;
  }

  // Rebuilds the basis inverse by Gauss-Jordan elimination with partial
  // pivoting and recomputes basic values from the nonbasic ones.
  void refactor() {
    std::vector<double> work(m_ * m_, 0.0);
    for (std::size_t k = 0; k < m_; ++k) {
      for (const LpEntry& e : columns_[basis_[k]]) work[e.row * m_ + k] = e.value;
    }
    std::vector<double> inv(m_ * m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) inv[i * m_ + i] = 1.0;
    for (std::size_t c = 0; c < m_; ++c) {
      std::size_t piv = c;
      for (std::size_t r = c + 1; r < m_; ++r) {
        if (std::abs(work[r * m_ + c]) > std::abs(work[piv * m_ + c])) piv = r;
      }
      const double p = work[piv * m_ + c];
      if (std::abs(p) < 1e-14) throw ContractViolation("simplex basis became singular");
      if (piv != c) {
        for (std::size_t k = 0; k < m_; ++k) {
          std::swap(work[piv * m_ + k], work[c * m_ + k]);
          std::swap(inv[piv * m_ + k], inv[c * m_ + k]);
        }
      }
      const double scale = 1.0 / p;
      for (std::size_t k = 0; k < m_; ++k) {
        work[c * m_ + k] *= scale;
        inv[c * m_ + k] *= scale;
      }
      for (std::size_t r = 0; r < m_; ++r) {
        if (r == c) continue;
        const double f = work[r * m_ + c];
        if (f == 0.0) continue;
        for (std::size_t k = 0; k < m_; ++k) {
          work[r * m_ + k] -= f * work[c * m_ + k];
          inv[r * m_ + k] -= f * inv[c * m_ + k];
        }
      }
    }
    // work reduced B to the identity, so inv = B^{-1} with rows indexed by
    // basis position.
    binv_.swap(inv);

    std::vector<double> residual = lp_.rhs();
    for (std::size_t j = 0; j < total_; ++j) {
      if (state_[j] == State::kBasic || x_[j] == 0.0) continue;
      for (const LpEntry& e : columns_[j]) residual[e.row] -= e.value * x_[j];
    }
    for (std::size_t k = 0; k < m_; ++k) {
      double v = 0.0;
      for (std::size_t i = 0; i < m_; ++i) v += binv_[k * m_ + i] * residual[i];
      x_[basis_[k]] = v;
    }
    since_refactor_ = 0;
  }

  void pivot(std::size_t position, std::size_t entering, const std::vector<double>& alpha) {
    const double ar = alpha[position];
    double* prow = &binv_[position * m_];
    for (std::size_t i = 0; i < m_; ++i) prow[i] /= ar;
    for (std::size_t k = 0; k < m_; ++k) {
      if (k == position || alpha[k] == 0.0) continue;
      const double f = alpha[k];
      double* row = &binv_[k * m_];
      for (std::size_t i = 0; i < m_; ++i) row[i] -= f * prow[i];
    }
    basis_[position] = entering;
    state_[entering] = State::kBasic;
    ++since_refactor_;
  }

  void run(const std::vector<double>& cost) {
    for (;;) {
      if (since_refactor_ >= opt_.refactor_interval) refactor();
      const std::vector<double> pi = multipliers(cost);

      // Bland: first nonbasic variable with an improving reduced cost.
      std::size_t q = total_;
      double direction = 0.0;
      for (std::size_t j = 0; j < total_; ++j) {
        if (state_[j] == State::kBasic || upper_[j] == lower_[j]) continue;
        double d = cost[j];
        for (const LpEntry& e : columns_[j]) d -= pi[e.row] * e.value;
        const double tol = opt_.optimality_tolerance * (1.0 + std::abs(cost[j]));
        if (state_[j] == State::kLower && d < -tol) {
          q = j;
          direction = 1.0;
          break;
        }
        if (state_[j] == State::kUpper && d > tol) {
          q = j;
          direction = -1.0;
          break;
        }
      }
      if (q == total_) return;

      if (++iterations_ > max_iterations_) {
        throw ContractViolation("simplex iteration limit reached");
      }

      const std::vector<double> alpha = ftran(q);
      std::size_t leave = m_;
      double best = kInf;
      bool leave_to_upper = false;
      for (std::size_t k = 0; k < m_; ++k) {
        const double a = alpha[k];
        if (std::abs(a) <= opt_.pivot_tolerance) continue;
        const std::size_t var = basis_[k];
        const double rate = -direction * a;
        double t;
        bool to_upper;
        if (rate < 0.0) {
          t = (x_[var] - lower_[var]) / -rate;
          to_upper = false;
        } else if (std::isfinite(upper_[var])) {
          t = (upper_[var] - x_[var]) / rate;
          to_upper = true;
        } else {
          continue;
        }
        t = std::max(t, 0.0);
        const bool better = t < best || (t == best && leave < m_ && var < basis_[leave]);
        if (better) {
          best = t;
          leave = k;
          leave_to_upper = to_upper;
        }
      }

      const double span = upper_[q] - lower_[q];
      if (leave == m_ && !std::isfinite(span)) throw ContractViolation("linear program is unbounded");
      if (span <= best) {
        // Entering variable reaches its opposite bound first.
        for (std::size_t k = 0; k < m_; ++k) x_[basis_[k]] -= direction * span * alpha[k];
        if (direction > 0.0) {
          x_[q] = upper_[q];
          state_[q] = State::kUpper;
        } else {
          x_[q] = lower_[q];
          state_[q] = State::kLower;
        }
        continue;
      }

      for (std::size_t k = 0; k < m_; ++k) x_[basis_[k]] -= direction * best * alpha[k];
      const std::size_t out = basis_[leave];
      x_[q] += direction * best;
      x_[out] = leave_to_upper ? upper_[out] : lower_[out];
      state_[out] = leave_to_upper ? State::kUpper : State::kLower;
      pivot(leave, q, alpha);
    }
  }

  // Replaces zero-valued basic artificials by structural columns where the
  // row allows it; artificials left in the basis mark redundant rows.
  void drive_out_artificials() {
    for (std::size_t k = 0; k < m_; ++k) {
      if (basis_[k] < structural_) continue;
      for (std::size_t j = 0; j < structural_; ++j) {
        if (state_[j] == State::kBasic) continue;
        double v = 0.0;
        for (const LpEntry& e : columns_[j]) v += binv_[k * m_ + e.row] * e.value;
        if (std::abs(v) <= opt_.pivot_tolerance) continue;
        const std::size_t art = basis_[k];
        const std::vector<double> alpha = ftran(j);
        x_[art] = 0.0;
        state_[art] = State::kLower;
        pivot(k, j, alpha);
        break;
      }
    }
  }

  const LinearProgram& lp_;
  LpOptions opt_;
  std::size_t m_;
  std::size_t structural_;
  std::size_t total_;
  std::vector<std::vector<LpEntry>> columns_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> x_;
  std::vector<State> state_;
  std::vector<std::size_t> basis_;
  std::vector<double> binv_;
  double initial_infeasibility_ = 0.0;
  std::size_t since_refactor_ = 0;
  std::size_t iterations_ = 0;
  std::size_t max_iterations_ = 0;
};

}  // namespace

LpSolution lp_solve(const LinearProgram& program, const LpOptions& options) {
  if (program.rows() == 0) {
    LpSolution sol;
    sol.x = program.lower();
    for (std::size_t j = 0; j < program.variables(); ++j) {
      if (program.cost()[j] < 0.0) {
        if (!std::isfinite(program.upper()[j])) {
          throw ContractViolation("linear program is unbounded");
        }
        sol.x[j] = program.upper()[j];
      }
      sol.objective += program.cost()[j] * sol.x[j];
    }
    return sol;
  }
  return Simplex(program, options).solve();
}

}  // namespace depthq
