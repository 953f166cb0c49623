#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace fsplan::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense : std::uint8_t { Le, Eq, Ge };
enum class Objective : std::uint8_t { Maximize, Minimize };

/// optimize c'x  s.t.  A x (<=,=,>=) b,  lo <= x <= hi (bounds may be infinite).
struct LinearProgram {
  Objective objective = Objective::Maximize;
  Eigen::VectorXd c;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  std::vector<RowSense> senses;
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  int num_vars() const { return static_cast<int>(c.size()); }
  int num_rows() const { return static_cast<int>(A.rows()); }

  /// Empty program over n variables with bounds [0, +inf).
  static LinearProgram with_vars(int n, Objective obj = Objective::Maximize);
  int add_row(const Eigen::RowVectorXd& a, RowSense sense, double rhs);
  void validate() const;

  /// Largest violation of rows and bounds at x (0 when feasible).
  double max_violation(const Eigen::VectorXd& x) const;
};

struct MilpProblem {
  LinearProgram lp;
  std::vector<int> integer_vars;  // binary in practice; bounds must be finite
};

enum class SolveStatus : std::uint8_t { Optimal, Infeasible, Unbounded, IterationLimit };
std::string to_string(SolveStatus s);

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  Eigen::VectorXd x;
  Eigen::VectorXd duals;  // row prices y with reduced costs c - A'y (LP only)
  double objective = 0.0;
  long iterations = 0;  // simplex pivots (summed over nodes for MILPs)
  long nodes = 0;
  double bound = 0.0;   // best remaining relaxation bound (MILP)
};

struct SimplexOptions {
  long max_iterations = 100000;
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-7;
  int refactor_every = 100;
};

/// Dense two-phase primal simplex with bounded variables. Dantzig pricing,
/// switching to Bland's rule while pivots are degenerate.
SolveResult solve_lp(const LinearProgram& lp, const SimplexOptions& opt = {});

struct BranchAndBoundOptions {
  long max_nodes = 10000;
  double integrality_tol = 1e-6;
  // Known bound on the optimum in the problem's own sense (an upper bound when
  // maximizing). The search stops once an incumbent reaches it.
  std::optional<double> known_bound;
  SimplexOptions simplex{};
};

/// Branch and bound on LP relaxations: plunges depth-first (rounding side
/// first) until a leaf, then resumes from the best open bound. Branches on the
/// most fractional integer variable (lowest index on ties). A search stopped
/// by max_nodes reports IterationLimit and still returns its incumbent in x.
SolveResult solve_milp(const MilpProblem& p, const BranchAndBoundOptions& opt = {});

/// Line-oriented text format:
///   fsplan-lp 1
///   objective max|min
///   size <vars> <rows>
///   c <v1> ... <vn>
///   lo <...>            (values may be inf / -inf)
///   hi <...>
///   int <k> <i1> ... <ik>
///   row <le|eq|ge> <rhs> <a1> ... <an>     (one per row)
void write_problem(std::ostream& os, const MilpProblem& p);
MilpProblem read_problem(std::istream& is);

}  // namespace fsplan::lp
