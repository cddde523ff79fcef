#pragma once

#include <Eigen/Dense>

// Bounded-variable primal simplex used for LP relaxations. Internal to the
// solver; callers go through solve_lp / solve_milp.
namespace fcnf::detail {

// min c·x  subject to  A x = b,  lower <= x <= upper.
// Bound entries may be +/-infinity. Inequality rows must already carry their
// slack columns; phase-1 artificials are added internally.
struct LpProblem {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, PivotLimit };

struct LpSolution {
  LpStatus status = LpStatus::PivotLimit;
  double objective = 0.0;
  Eigen::VectorXd x;
  long pivots = 0;
};

struct SimplexOptions {
  double dual_tol = 1e-9;    // reduced cost below which a column is not attractive
  double pivot_tol = 1e-10;  // smallest pivot element magnitude accepted
  double phase1_tol = 1e-7;  // residual infeasibility accepted after phase 1
  long bland_after = 0;      // non-improving pivots before Bland's rule; 0 = auto
  long pivot_limit = 0;      // hard pivot cap; 0 = auto
  int refactor_every = 64;   // pivots between basis refactorizations
};

LpSolution solve_bounded_lp(const LpProblem& problem, const SimplexOptions& options = {});

}  // namespace fcnf::detail
