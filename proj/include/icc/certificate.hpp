#pragma once

#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "icc/automaton.hpp"
#include "icc/geometry.hpp"
#include "icc/poly.hpp"
#include "icc/system.hpp"

namespace icc {

enum class SpecKind { safety, persistence, ltl };

std::string to_string(SpecKind kind);
SpecKind spec_kind_from_string(const std::string& s);

struct Hyperparameters {
  int k = 0;
  double eta = 1e-3;
  std::vector<double> gamma;  // size k+1
  double rho1 = 1.0;
  double rho2 = 1.0;

  void validate() const;
};

// Chain of pair functions T_0..T_k over (x, y); for omega-regular specs the
// chain is additionally indexed by an automaton state pair (q, p).
struct Certificate {
  SpecKind kind = SpecKind::safety;
  int k = 0;
  int n = 0;
  Hyperparameters hp;
  std::vector<std::vector<int>> basis;  // exponent vectors over 2n variables

  std::vector<Polynomial> T;                                 // safety / persistence
  std::map<std::tuple<int, int, int>, Polynomial> T_pair;    // (i, q, p) -> polynomial

  // Missing (i,q,p) entries resolve to zero; each miss is reported once.
  const Polynomial& pair_function(int i, int q, int p) const;

  void validate() const;

 private:
  mutable Polynomial zero_;
  mutable std::vector<std::tuple<int, int, int>> warned_;
};

// One reportable family of pointwise inequalities: poly >= 0 on the product
// of the factor boxes.
struct Residual {
  std::string name;
  Polynomial poly;
  std::vector<Box> factors;
};

struct ResidualSet {
  std::vector<Residual> items;
};

ResidualSet safety_residuals(const System& sys, const Certificate& cert);
ResidualSet persistence_residuals(const System& sys, const Certificate& cert);
ResidualSet ltl_residuals(const ProductSystem& prod, const Certificate& cert);

// Dispatch on cert.kind; for ltl a product system is required.
ResidualSet residuals_for(const System& sys, const ProductSystem* prod, const Certificate& cert);

// Piecewise evaluators from inductive barrier chains:
// T_i(x,y) is 0 when some barrier level excludes the pair, -eta otherwise.
using PairFn = std::function<double(std::span<const double>, std::span<const double>)>;
std::vector<PairFn> ibc_to_icc(const std::vector<Polynomial>& ibc, double eta);

// Lift an arity-2n pair polynomial into an arity-m context, sending its two
// argument blocks to the given variable offsets.
Polynomial lift_pair(const Polynomial& p, int n, int out_arity, int first_offset,
                     int second_offset);

}  // namespace icc
