#pragma once

#include <optional>
#include <string>
#include <vector>

#include "icc/certificate.hpp"
#include "icc/checker.hpp"
#include "icc/lp.hpp"

namespace icc {

struct Template {
  int k = 0;
  int degree = 2;
  std::vector<std::vector<int>> basis;  // over 2n variables; generated from degree when empty
};

std::vector<std::vector<int>> monomials_up_to(int arity, int degree);

// Which certificate function a coefficient block belongs to.
struct FunctionKey {
  int i = 0;
  int q = -1;  // automaton indices, -1 outside ltl
  int p = -1;
  bool operator==(const FunctionKey&) const = default;
};

// Residual family expressed linearly in the unknown certificate
// coefficients: value = const(pt) + eta_coeff * eta + sum_s c_s * psi_s(pt).
struct SymbolicResidual {
  std::string name;
  std::vector<Box> factors;
  Polynomial constant;
  double eta_coeff = 0.0;
  std::vector<std::pair<int, Polynomial>> coeff_terms;  // flat symbol index -> psi
};

std::vector<SymbolicResidual> symbolic_residuals(const System& sys, const ProductSystem* prod,
                                                 SpecKind kind, const Template& tmpl,
                                                 const Hyperparameters& hp_fixed);

struct ScenarioProgram {
  SpecKind kind = SpecKind::safety;
  int n = 0;
  std::vector<std::vector<int>> basis;
  std::vector<FunctionKey> functions;
  Hyperparameters hp;  // gamma/rho fixed; eta entry unused (decision variable)
  double epsilon = 0.0;
  double coeff_bound = 10.0;
  double eta_min = 1e-3;

  LpProblem lp;  // variables: coefficients, then delta, then eta
  std::vector<std::string> var_names;
  int delta_index = 0;
  int eta_index = 0;

  std::vector<SymbolicResidual> residuals;
  std::vector<double> family_epsilon;            // effective epsilon per residual family
  std::vector<std::vector<double>> family_beta;  // per family: Lipschitz bound of each psi
  std::vector<int> row_family;                   // family index per sample row, -1 for bound rows
};

ScenarioProgram build_sp(const System& sys, const ProductSystem* prod, SpecKind kind,
                         const Template& tmpl, const Hyperparameters& hp_fixed, double epsilon);

struct LpSolution {
  LpStatus status = LpStatus::solver_error;
  std::vector<double> coefficients;
  double delta_star = 0.0;
  double eta_star = 0.0;
  double objective = 0.0;
  std::string message;
};

// solver_cmd empty selects the built-in simplex; otherwise the external
// contract of solve_lp_external is used.
LpSolution solve(const ScenarioProgram& sp, const std::string& solver_cmd = "");

struct SynthesisResult {
  LpStatus status = LpStatus::solver_error;
  double delta_star = 0.0;
  double eta_star = 0.0;
  bool refined = false;  // margin-aware second stage succeeded
  std::optional<Certificate> certificate;
  CheckReport report;
  std::string message;
};

// Solves the scenario program, then retargets the coefficients so every
// sampled residual clears its own Lipschitz margin (the per-family
// soundness gate). Falls back to the plain optimum when the margin-aware
// stage is infeasible; the report records the gate outcome either way.
SynthesisResult synthesize(const System& sys, const ProductSystem* prod, SpecKind kind,
                           const Template& tmpl, const Hyperparameters& hp_fixed, double epsilon,
                           const std::string& solver_cmd = "");

Certificate certificate_from_coefficients(const ScenarioProgram& sp,
                                          const std::vector<double>& coeffs, double eta);

}  // namespace icc
