#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace icc {

// Closed interval [lo, hi] used for range enclosures.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double max_abs() const;

  Interval operator+(const Interval& o) const;
  Interval operator*(const Interval& o) const;
};

// x^e for an interval x, exact for even powers (range never dips below 0).
Interval interval_pow(const Interval& x, int e);

struct Term {
  double coeff;
  std::vector<int> exps;
};

// Sparse multivariate polynomial with a fixed arity. Terms are kept in
// graded-lex order with merged exponent vectors; coefficients below 1e-15
// in magnitude are dropped so that exact cancellations stay exact.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(int arity);
  Polynomial(int arity, std::vector<Term> terms);

  static Polynomial constant(int arity, double c);
  static Polynomial variable(int arity, int index);

  int arity() const { return arity_; }
  int degree() const;  // 0 for the zero polynomial
  bool is_zero() const { return terms_.empty(); }
  const std::vector<Term>& terms() const { return terms_; }

  double evaluate(std::span<const double> point) const;

  Polynomial operator+(const Polynomial& q) const;
  Polynomial operator-(const Polynomial& q) const;
  Polynomial operator*(const Polynomial& q) const;
  Polynomial scaled(double s) const;

  // Substitutes substitutions[j] for variable j. All substitutions must
  // share one arity, which becomes the arity of the result.
  Polynomial compose(const std::vector<Polynomial>& substitutions) const;

  std::vector<Polynomial> gradient() const;
  Polynomial partial(int var) const;

  // Sound enclosure of the range over the box (one interval per variable).
  Interval interval_bound(std::span<const Interval> box) const;

  // Upper bound on sup of the l1 norm of the gradient over the box; this
  // bounds the Lipschitz constant w.r.t. the max norm.
  double lipschitz_bound(std::span<const Interval> box) const;

  std::string str() const;

  bool operator==(const Polynomial& o) const;

 private:
  void canonicalize();

  int arity_ = 0;
  std::vector<Term> terms_;
};

}  // namespace icc
