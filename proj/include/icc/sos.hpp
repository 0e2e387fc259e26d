#pragma once

#include <string>
#include <vector>

#include "icc/scenario.hpp"

namespace icc {

// Expression affine in the unknown certificate coefficients.
struct LinExpr {
  Polynomial constant;
  std::vector<std::pair<int, Polynomial>> terms;  // symbol index -> coefficient polynomial
};

struct GramBlock {
  std::vector<std::vector<int>> basis;  // monomial exponents over the constraint's variables
  int size() const { return static_cast<int>(basis.size()); }
};

// expression - sum_j lambda_j * g_j - z^T Q z == 0 with every Gram PSD.
struct SosConstraint {
  std::string name;
  int arity = 0;
  LinExpr expression;
  std::vector<Polynomial> domain;      // inequalities g_j >= 0
  std::vector<GramBlock> multipliers;  // Gram basis of lambda_j, aligned with domain
  GramBlock gram;                      // Gram basis of the expression itself
};

struct SosProgram {
  std::vector<std::string> symbols;  // certificate coefficient names
  std::vector<SosConstraint> constraints;
};

inline constexpr int kGramBasisCap = 2000;

SosProgram sos_compile(SpecKind kind, const System& sys, const ProductSystem* prod,
                       const Template& tmpl, const Hyperparameters& hp);

// Sparse SDPA export plus a sidecar mapping file (path + ".map.json") so
// solver output can be re-imported. The program is encoded on the SDPA dual
// side: find block-diagonal Y >= 0 with tr(F_i Y) = c_i.
void export_sdp(const SosProgram& program, const std::string& path);

struct SosWitness {
  std::vector<double> coefficients;
  // per constraint: expression Gram first, then one Gram per multiplier;
  // matrices are dense row-major
  std::vector<std::vector<std::vector<double>>> grams;
};

struct WitnessReport {
  struct ConstraintMargin {
    std::string name;
    double min_eigenvalue = 0.0;       // over all Grams of the constraint
    double identity_residual = 0.0;    // max abs coefficient of the mismatch
    bool pass = false;
  };
  std::vector<ConstraintMargin> constraints;
  bool pass = false;
};

// tol_psd < 0 selects the default 1e-8 * ||Q||.
WitnessReport verify_witness(const SosProgram& program, const SosWitness& witness,
                             double tol_psd = -1.0, double tol_id = 1e-6);

// Evaluates expression(coefficients) as a plain polynomial.
Polynomial instantiate_expression(const SosConstraint& c, const std::vector<double>& coefficients);

}  // namespace icc
