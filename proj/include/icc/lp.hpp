#pragma once

#include <string>
#include <vector>

namespace icc {

// min objective^T v  subject to  sum_j coeffs_j * v_j >= rhs  per row.
// Variables are free; bounds are expressed as rows.
struct LpProblem {
  int num_vars = 0;
  std::vector<double> objective;
  struct Row {
    std::vector<std::pair<int, double>> coeffs;
    double rhs = 0.0;
  };
  std::vector<Row> rows;
};

enum class LpStatus { optimal, infeasible, unbounded, solver_error };
std::string to_string(LpStatus s);

struct LpResult {
  LpStatus status = LpStatus::solver_error;
  std::vector<double> point;
  double objective = 0.0;
  std::string message;
};

// Dense simplex for desk-scale problems (few variables, many rows); works
// on the dual so the basis stays num_vars-sized.
LpResult solve_lp(const LpProblem& lp);

// CPLEX LP text format.
std::string write_lp_format(const LpProblem& lp, const std::vector<std::string>& names);

// Writes the problem to a temp file and runs `solver_cmd input.lp output.json`;
// the output must be {"status": ..., "objective": ..., "values": {name: v}}.
LpResult solve_lp_external(const LpProblem& lp, const std::vector<std::string>& names,
                           const std::string& solver_cmd);

}  // namespace icc
