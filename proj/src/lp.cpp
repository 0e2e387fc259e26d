#include "icc/lp.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace icc {

std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::solver_error: return "solver-error";
  }
  return "?";
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kFeasTol = 1e-7;

// Simplex on the dual  max b^T y  s.t.  A^T y = c, y >= 0  with Big-M
// artificials. The basis is p x p where p = primal variable count, so large
// row counts stay cheap. The primal point is recovered from the simplex
// multipliers.
struct DualSimplex {
  int p;                   // equality constraints = primal vars
  int m;                   // dual structural vars = primal rows
  Eigen::MatrixXd cols;    // p x (m + p): A^T columns then artificial identity
  Eigen::VectorXd obj;     // dual objective per column (maximize)
  Eigen::VectorXd rhs;     // = primal objective c
  std::vector<int> basis;

  LpStatus status = LpStatus::solver_error;
  Eigen::VectorXd multipliers;  // primal candidate
  double dual_objective = 0.0;
};

void run_dual_simplex(DualSimplex& s) {
  const int total = s.m + s.p;
  // sign-flip rows so artificials start feasible
  for (int i = 0; i < s.p; ++i)
    if (s.rhs[i] < 0) {
      s.rhs[i] = -s.rhs[i];
      s.cols.row(i) = -s.cols.row(i);
    }
  s.basis.resize(s.p);
  for (int i = 0; i < s.p; ++i) s.basis[i] = s.m + i;

  double scale = 1.0;
  for (int j = 0; j < s.m; ++j) scale = std::max(scale, std::abs(s.obj[j]));
  const double big_m = 1e7 * scale;
  for (int i = 0; i < s.p; ++i) s.obj[s.m + i] = -big_m;

  const int max_iter = 50000;
  int stall = 0;
  double last_obj = -std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < max_iter; ++iter) {
    Eigen::MatrixXd B(s.p, s.p);
    Eigen::VectorXd cb(s.p);
    for (int i = 0; i < s.p; ++i) {
      B.col(i) = s.cols.col(s.basis[i]);
      cb[i] = s.obj[s.basis[i]];
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
    Eigen::VectorXd xb = lu.solve(s.rhs);
    Eigen::VectorXd pi = lu.transpose().solve(cb);

    double obj_now = cb.dot(xb);
    bool bland = false;
    if (obj_now <= last_obj + 1e-12) {
      if (++stall > 2 * (s.m + s.p)) bland = true;
    } else {
      stall = 0;
      last_obj = obj_now;
    }

    // pricing
    int enter = -1;
    double best = kPivotTol;
    for (int j = 0; j < total; ++j) {
      bool basic = false;
      for (int i = 0; i < s.p; ++i)
        if (s.basis[i] == j) { basic = true; break; }
      if (basic) continue;
      double d = s.obj[j] - pi.dot(s.cols.col(j));
      if (d > kPivotTol) {
        if (bland) { enter = j; break; }
        if (d > best) { best = d; enter = j; }
      }
    }
    if (enter < 0) {
      // optimal for the Big-M program
      double art = 0.0;
      for (int i = 0; i < s.p; ++i)
        if (s.basis[i] >= s.m) art += std::abs(xb[i]);
      if (art > kFeasTol * (1.0 + s.rhs.lpNorm<Eigen::Infinity>())) {
        s.status = LpStatus::infeasible;  // dual infeasible
        return;
      }
      s.status = LpStatus::optimal;
      s.multipliers = pi;
      s.dual_objective = obj_now + big_m * art;
      return;
    }

    Eigen::VectorXd w = lu.solve(s.cols.col(enter));
    int leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < s.p; ++i) {
      if (w[i] > kPivotTol) {
        double ratio = std::max(0.0, xb[i]) / w[i];
        if (ratio < best_ratio - 1e-12 ||
            (bland && ratio < best_ratio + 1e-12 && leave >= 0 && s.basis[i] < s.basis[leave])) {
          best_ratio = ratio;
          leave = i;
        }
      }
    }
    if (leave < 0) {
      s.status = LpStatus::unbounded;  // dual unbounded
      return;
    }
    s.basis[leave] = enter;
  }
  s.status = LpStatus::solver_error;
}

LpResult solve_primal(const LpProblem& lp, bool allow_aux);

// min s  s.t.  Av + 1s >= b, s >= 0 : decides feasibility of Av >= b.
LpResult solve_feasibility_aux(const LpProblem& lp) {
  LpProblem aux;
  aux.num_vars = lp.num_vars + 1;
  aux.objective.assign(aux.num_vars, 0.0);
  aux.objective[lp.num_vars] = 1.0;
  aux.rows = lp.rows;
  for (auto& row : aux.rows) row.coeffs.emplace_back(lp.num_vars, 1.0);
  aux.rows.push_back({{{lp.num_vars, 1.0}}, 0.0});
  return solve_primal(aux, false);
}

LpResult solve_primal(const LpProblem& lp, bool allow_aux) {
  LpResult res;
  if (lp.num_vars <= 0) {
    res.status = LpStatus::solver_error;
    res.message = "no variables";
    return res;
  }
  DualSimplex s;
  s.p = lp.num_vars;
  s.m = static_cast<int>(lp.rows.size());
  s.cols = Eigen::MatrixXd::Zero(s.p, s.m + s.p);
  s.obj = Eigen::VectorXd::Zero(s.m + s.p);
  s.rhs = Eigen::VectorXd::Zero(s.p);
  for (int i = 0; i < s.p; ++i) s.rhs[i] = lp.objective[i];
  for (int j = 0; j < s.m; ++j) {
    for (const auto& [var, coef] : lp.rows[j].coeffs) {
      if (var < 0 || var >= s.p) throw std::invalid_argument("row references unknown variable");
      s.cols(var, j) += coef;
    }
    s.obj[j] = lp.rows[j].rhs;
  }
  for (int i = 0; i < s.p; ++i) s.cols(i, s.m + i) = 1.0;

  run_dual_simplex(s);

  if (s.status == LpStatus::optimal) {
    res.status = LpStatus::optimal;
    res.point.assign(s.multipliers.data(), s.multipliers.data() + s.p);
    double obj = 0.0;
    for (int i = 0; i < s.p; ++i) obj += lp.objective[i] * res.point[i];
    res.objective = obj;
    // sanity: the recovered point must satisfy every primal row
    double worst = 0.0;
    for (const auto& row : lp.rows) {
      double v = -row.rhs;
      for (const auto& [var, coef] : row.coeffs) v += coef * res.point[var];
      worst = std::min(worst, v);
    }
    if (worst < -1e-5) {
      res.status = LpStatus::solver_error;
      res.message = "recovered point violates constraints by " + std::to_string(-worst);
    }
    return res;
  }
  if (s.status == LpStatus::unbounded) {
    // dual unbounded => primal infeasible
    res.status = LpStatus::infeasible;
    return res;
  }
  if (s.status == LpStatus::infeasible) {
    // dual infeasible => primal unbounded or infeasible
    if (!allow_aux) {
      res.status = LpStatus::solver_error;
      res.message = "auxiliary problem unexpectedly lacks an optimum";
      return res;
    }
    LpResult aux = solve_feasibility_aux(lp);
    if (aux.status == LpStatus::optimal && aux.objective <= kFeasTol) {
      res.status = LpStatus::unbounded;
    } else if (aux.status == LpStatus::optimal) {
      res.status = LpStatus::infeasible;
    } else {
      res.status = LpStatus::solver_error;
      res.message = "feasibility probe failed: " + aux.message;
    }
    return res;
  }
  res.status = LpStatus::solver_error;
  res.message = "iteration limit reached";
  return res;
}

}  // namespace

LpResult solve_lp(const LpProblem& lp) { return solve_primal(lp, true); }

std::string write_lp_format(const LpProblem& lp, const std::vector<std::string>& names) {
  if (static_cast<int>(names.size()) != lp.num_vars)
    throw std::invalid_argument("name count mismatch");
  std::ostringstream os;
  os.precision(17);
  os << "Minimize\n obj:";
  bool any = false;
  for (int j = 0; j < lp.num_vars; ++j) {
    if (lp.objective[j] == 0.0) continue;
    os << (lp.objective[j] >= 0 ? " + " : " - ") << std::abs(lp.objective[j]) << " " << names[j];
    any = true;
  }
  if (!any) os << " 0 " << names[0];
  os << "\nSubject To\n";
  for (size_t r = 0; r < lp.rows.size(); ++r) {
    os << " r" << r << ":";
    for (const auto& [var, coef] : lp.rows[r].coeffs)
      os << (coef >= 0 ? " + " : " - ") << std::abs(coef) << " " << names[var];
    os << " >= " << lp.rows[r].rhs << "\n";
  }
  os << "Bounds\n";
  for (int j = 0; j < lp.num_vars; ++j) os << " " << names[j] << " free\n";
  os << "End\n";
  return os.str();
}

LpResult solve_lp_external(const LpProblem& lp, const std::vector<std::string>& names,
                           const std::string& solver_cmd) {
  LpResult res;
  std::string dir = "/tmp";
  if (const char* t = std::getenv("TMPDIR")) dir = t;
  std::string in_path = dir + "/icc_lp_in_" + std::to_string(::getpid()) + ".lp";
  std::string out_path = dir + "/icc_lp_out_" + std::to_string(::getpid()) + ".json";
  {
    std::ofstream out(in_path);
    out << write_lp_format(lp, names);
  }
  std::string cmd = solver_cmd + " " + in_path + " " + out_path;
  int rc = std::system(cmd.c_str());
  if (rc != 0) {
    res.status = LpStatus::solver_error;
    res.message = "external solver exited with code " + std::to_string(rc);
    return res;
  }
  std::ifstream in(out_path);
  if (!in) {
    res.status = LpStatus::solver_error;
    res.message = "external solver produced no output file";
    return res;
  }
  try {
    nlohmann::json j;
    in >> j;
    std::string st = j.at("status").get<std::string>();
    if (st == "optimal") {
      res.status = LpStatus::optimal;
      res.point.assign(lp.num_vars, 0.0);
      const auto& vals = j.at("values");
      for (int v = 0; v < lp.num_vars; ++v)
        if (vals.contains(names[v])) res.point[v] = vals[names[v]].get<double>();
      res.objective = j.value("objective", 0.0);
    } else if (st == "infeasible") {
      res.status = LpStatus::infeasible;
    } else if (st == "unbounded") {
      res.status = LpStatus::unbounded;
    } else {
      res.status = LpStatus::solver_error;
      res.message = "external solver status: " + st;
    }
  } catch (const std::exception& e) {
    res.status = LpStatus::solver_error;
    res.message = std::string("bad solver output: ") + e.what();
  }
  std::remove(in_path.c_str());
  std::remove(out_path.c_str());
  return res;
}

}  // namespace icc
