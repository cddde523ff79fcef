#include "simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace fcnf::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Loc : std::uint8_t { Basic, AtLower, AtUpper, Free };

// Textbook two-phase bounded-variable simplex on a dense tableau-free
// representation: the basis inverse is kept explicitly and updated by the
// usual elementary row operations, with periodic refactorization through an
// LU decomposition to bound drift. Nonbasic variables sit at a bound (or at
// zero when free); phase 1 minimizes the total artificial value.
class BoundedSimplex {
 public:
  BoundedSimplex(const LpProblem& problem, const SimplexOptions& options)
      : options_(options),
        m_(static_cast<int>(problem.A.rows())),
        n_(static_cast<int>(problem.A.cols())),
        total_(n_ + m_) {
    A_.resize(m_, total_);
    A_.leftCols(n_) = problem.A;
    A_.rightCols(m_).setZero();
    b_ = problem.b;
    lower_.resize(total_);
    upper_.resize(total_);
    lower_.head(n_) = problem.lower;
    upper_.head(n_) = problem.upper;
    true_cost_ = Eigen::VectorXd::Zero(total_);
    true_cost_.head(n_) = problem.c;
    if (options_.bland_after <= 0) options_.bland_after = 200 + 10L * total_;
    if (options_.pivot_limit <= 0) options_.pivot_limit = 20000 + 200L * total_;
  }

  LpSolution run() {
    LpSolution out;
    if (m_ == 0) return solve_bound_only();

    // Nonbasic start: every structural variable at a finite bound.
    x_ = Eigen::VectorXd::Zero(total_);
    loc_.assign(total_, Loc::AtLower);
    for (int j = 0; j < n_; ++j) {
      if (lower_[j] > -kInf) {
        x_[j] = lower_[j];
        loc_[j] = Loc::AtLower;
      } else if (upper_[j] < kInf) {
        x_[j] = upper_[j];
        loc_[j] = Loc::AtUpper;
      } else {
        x_[j] = 0.0;
        loc_[j] = Loc::Free;
      }
    }

    // One artificial per row, signed to start nonnegative, forming the basis.
    Eigen::VectorXd residual = b_;
    for (int j = 0; j < n_; ++j) {
      if (x_[j] != 0.0) residual -= A_.col(j) * x_[j];
    }
    basis_.resize(m_);
    binv_ = Eigen::MatrixXd::Zero(m_, m_);
    for (int i = 0; i < m_; ++i) {
      double sign = residual[i] < 0.0 ? -1.0 : 1.0;
      int j = n_ + i;
      A_(i, j) = sign;
      lower_[j] = 0.0;
      upper_[j] = kInf;
      x_[j] = std::abs(residual[i]);
      loc_[j] = Loc::Basic;
      basis_[i] = j;
      binv_(i, i) = sign;
    }

    Eigen::VectorXd phase1_cost = Eigen::VectorXd::Zero(total_);
    phase1_cost.tail(m_).setOnes();
    LpStatus status = optimize(phase1_cost, /*phase=*/1);
    if (status == LpStatus::PivotLimit) {
      out.status = LpStatus::PivotLimit;
      out.pivots = pivots_;
      return out;
    }
    double infeasibility = phase1_cost.dot(x_);
    if (infeasibility > options_.phase1_tol) {
      out.status = LpStatus::Infeasible;
      out.pivots = pivots_;
      return out;
    }

    drive_out_artificials();
    for (int j = n_; j < total_; ++j) {
      lower_[j] = 0.0;
      upper_[j] = 0.0;
      if (loc_[j] != Loc::Basic) {
        x_[j] = 0.0;
        loc_[j] = Loc::AtLower;
      }
    }

    status = optimize(true_cost_, /*phase=*/2);
    out.status = status;
    out.pivots = pivots_;
    if (status == LpStatus::Optimal) {
      out.objective = true_cost_.dot(x_);
      out.x = x_.head(n_);
    }
    return out;
  }

 private:
  LpSolution solve_bound_only() {
    // No rows: each variable independently sits at its cheapest finite bound.
    LpSolution out;
    out.x = Eigen::VectorXd::Zero(n_);
    for (int j = 0; j < n_; ++j) {
      double c = true_cost_[j];
      if (c > options_.dual_tol) {
        if (lower_[j] == -kInf) {
          out.status = LpStatus::Unbounded;
          return out;
        }
        out.x[j] = lower_[j];
      } else if (c < -options_.dual_tol) {
        if (upper_[j] == kInf) {
          out.status = LpStatus::Unbounded;
          return out;
        }
        out.x[j] = upper_[j];
      } else {
        out.x[j] = lower_[j] > -kInf ? lower_[j] : (upper_[j] < kInf ? upper_[j] : 0.0);
      }
    }
    out.status = LpStatus::Optimal;
    out.objective = true_cost_.head(n_).dot(out.x);
    return out;
  }

  LpStatus optimize(const Eigen::VectorXd& cost, int phase) {
    bool bland = false;
    long no_improve = 0;
    double last_objective = cost.dot(x_);

    while (true) {
      if (pivots_ >= options_.pivot_limit) return LpStatus::PivotLimit;

      Eigen::VectorXd basic_cost(m_);
      for (int i = 0; i < m_; ++i) basic_cost[i] = cost[basis_[i]];
      Eigen::VectorXd y = binv_.transpose() * basic_cost;

      // Price nonbasic columns. Artificials never re-enter the basis.
      int entering = -1;
      double entering_dir = 0.0;
      double best_magnitude = 0.0;
      for (int j = 0; j < total_; ++j) {
        if (loc_[j] == Loc::Basic) continue;
        if (j >= n_) continue;
        double d = cost[j] - y.dot(A_.col(j));
        double dir = 0.0;
        if (loc_[j] == Loc::AtLower && d < -options_.dual_tol) {
          dir = 1.0;
        } else if (loc_[j] == Loc::AtUpper && d > options_.dual_tol) {
          dir = -1.0;
        } else if (loc_[j] == Loc::Free && std::abs(d) > options_.dual_tol) {
          dir = d < 0.0 ? 1.0 : -1.0;
        } else {
          continue;
        }
        if (bland) {
          entering = j;
          entering_dir = dir;
          break;
        }
        if (std::abs(d) > best_magnitude) {
          best_magnitude = std::abs(d);
          entering = j;
          entering_dir = dir;
        }
      }
      if (entering < 0) return LpStatus::Optimal;

      Eigen::VectorXd w = binv_ * A_.col(entering);

      // Ratio test: the entering variable moves by t in direction sigma, each
      // basic variable moves by -sigma * t * w_i, until something hits a bound.
      double step = kInf;
      if (loc_[entering] != Loc::Free && lower_[entering] > -kInf && upper_[entering] < kInf) {
        step = upper_[entering] - lower_[entering];  // bound flip
      }
      int leaving = -1;
      bool leaving_at_upper = false;
      for (int i = 0; i < m_; ++i) {
        double wi = entering_dir * w[i];
        int bj = basis_[i];
        double ratio;
        bool hits_upper;
        if (wi > options_.pivot_tol) {
          if (lower_[bj] == -kInf) continue;
          ratio = (x_[bj] - lower_[bj]) / wi;
          hits_upper = false;
        } else if (wi < -options_.pivot_tol) {
          if (upper_[bj] == kInf) continue;
          ratio = (upper_[bj] - x_[bj]) / (-wi);
          hits_upper = true;
        } else {
          continue;
        }
        if (ratio < 0.0) ratio = 0.0;  // drift from earlier pivots
        bool take = false;
        if (ratio < step - 1e-9) {
          take = true;
        } else if (leaving >= 0 && ratio <= step + 1e-9) {
          take = bland ? basis_[i] < basis_[leaving] : std::abs(w[i]) > std::abs(w[leaving]);
        }
        if (take) {
          step = std::min(step, ratio);
          leaving = i;
          leaving_at_upper = hits_upper;
        }
      }
      if (step == kInf) {
        // Phase 1 is bounded below by zero, so this can only be numerical.
        return phase == 1 ? LpStatus::PivotLimit : LpStatus::Unbounded;
      }

      if (step > 0.0) {
        x_[entering] += entering_dir * step;
        for (int i = 0; i < m_; ++i) x_[basis_[i]] -= entering_dir * step * w[i];
      }
      if (leaving < 0) {
        loc_[entering] = loc_[entering] == Loc::AtLower ? Loc::AtUpper : Loc::AtLower;
        x_[entering] = loc_[entering] == Loc::AtUpper ? upper_[entering] : lower_[entering];
      } else {
        int out_var = basis_[leaving];
        loc_[out_var] = leaving_at_upper ? Loc::AtUpper : Loc::AtLower;
        x_[out_var] = leaving_at_upper ? upper_[out_var] : lower_[out_var];
        basis_[leaving] = entering;
        loc_[entering] = Loc::Basic;
        update_inverse(leaving, w);
        ++pivots_;
        ++since_refactor_;
        if (since_refactor_ >= options_.refactor_every) {
          if (!refactor()) return LpStatus::PivotLimit;
        }
      }

      double objective = cost.dot(x_);
      if (objective < last_objective - 1e-12 * (1.0 + std::abs(last_objective))) {
        last_objective = objective;
        no_improve = 0;
      } else {
        ++no_improve;
      }
      if (!bland && no_improve > options_.bland_after) bland = true;
    }
  }

  void update_inverse(int row, const Eigen::VectorXd& w) {
    double pivot = w[row];
    binv_.row(row) /= pivot;
    for (int i = 0; i < m_; ++i) {
      if (i == row) continue;
      double factor = w[i];
      if (factor != 0.0) binv_.row(i) -= factor * binv_.row(row);
    }
  }

  bool refactor() {
    Eigen::MatrixXd basis_matrix(m_, m_);
    for (int i = 0; i < m_; ++i) basis_matrix.col(i) = A_.col(basis_[i]);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix);
    Eigen::MatrixXd fresh = lu.inverse();
    if (!fresh.allFinite()) return false;
    binv_ = std::move(fresh);
    // Recompute basic values from scratch to clear accumulated drift.
    Eigen::VectorXd rhs = b_;
    for (int j = 0; j < total_; ++j) {
      if (loc_[j] != Loc::Basic && x_[j] != 0.0) rhs -= A_.col(j) * x_[j];
    }
    Eigen::VectorXd xb = binv_ * rhs;
    for (int i = 0; i < m_; ++i) x_[basis_[i]] = xb[i];
    since_refactor_ = 0;
    return true;
  }

  // Degenerate pivots that swap zero-valued artificials for structural
  // columns wherever a usable pivot element exists; rows with none are
  // redundant and keep their artificial pinned at zero.
  void drive_out_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      Eigen::RowVectorXd row = binv_.row(i) * A_.leftCols(n_);
      int best = -1;
      double best_mag = options_.pivot_tol;
      for (int j = 0; j < n_; ++j) {
        if (loc_[j] == Loc::Basic) continue;
        if (std::abs(row[j]) > best_mag) {
          best_mag = std::abs(row[j]);
          best = j;
        }
      }
      if (best < 0) continue;
      Eigen::VectorXd w = binv_ * A_.col(best);
      int out_var = basis_[i];
      loc_[out_var] = Loc::AtLower;
      x_[out_var] = 0.0;
      basis_[i] = best;
      loc_[best] = Loc::Basic;
      update_inverse(i, w);
      ++pivots_;
      ++since_refactor_;
    }
  }

  SimplexOptions options_;
  int m_;
  int n_;
  int total_;
  Eigen::MatrixXd A_;
  Eigen::VectorXd b_;
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
  Eigen::VectorXd true_cost_;
  Eigen::VectorXd x_;
  std::vector<Loc> loc_;
  std::vector<int> basis_;
  Eigen::MatrixXd binv_;
  long pivots_ = 0;
  int since_refactor_ = 0;
};

}  // namespace

LpSolution solve_bounded_lp(const LpProblem& problem, const SimplexOptions& options) {
  return BoundedSimplex(problem, options).run();
}

}  // namespace fcnf::detail
