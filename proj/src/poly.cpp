#include "icc/poly.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace icc {

namespace {

constexpr double kCoeffDropTol = 1e-15;

int term_degree(const std::vector<int>& e) {
  int d = 0;
  for (int x : e) d += x;
  return d;
}

// graded lexicographic: lower total degree first, ties broken lexicographically
bool graded_lex_less(const std::vector<int>& a, const std::vector<int>& b) {
  int da = term_degree(a), db = term_degree(b);
  if (da != db) return da < db;
  return a < b;
}

}  // namespace

double Interval::max_abs() const { return std::max(std::abs(lo), std::abs(hi)); }

Interval Interval::operator+(const Interval& o) const { return {lo + o.lo, hi + o.hi}; }

Interval Interval::operator*(const Interval& o) const {
  double p1 = lo * o.lo, p2 = lo * o.hi, p3 = hi * o.lo, p4 = hi * o.hi;
  return {std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4})};
}

Interval interval_pow(const Interval& x, int e) {
  if (e == 0) return {1.0, 1.0};
  if (e == 1) return x;
  double plo = std::pow(x.lo, e), phi = std::pow(x.hi, e);
  if (e % 2 == 1) return {plo, phi};
  // even power: minimum is 0 when the interval straddles 0
  double hi = std::max(plo, phi);
  double lo = (x.lo <= 0.0 && x.hi >= 0.0) ? 0.0 : std::min(plo, phi);
  return {lo, hi};
}

Polynomial::Polynomial(int arity) : arity_(arity) {
  if (arity < 0) throw std::invalid_argument("negative arity");
}

Polynomial::Polynomial(int arity, std::vector<Term> terms) : arity_(arity), terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (static_cast<int>(t.exps.size()) != arity_)
      throw std::invalid_argument("term exponent length does not match arity");
    for (int e : t.exps)
      if (e < 0) throw std::invalid_argument("negative exponent");
  }
  canonicalize();
}

Polynomial Polynomial::constant(int arity, double c) {
  return Polynomial(arity, {{c, std::vector<int>(arity, 0)}});
}

Polynomial Polynomial::variable(int arity, int index) {
  if (index < 0 || index >= arity) throw std::invalid_argument("variable index out of range");
  std::vector<int> e(arity, 0);
  e[index] = 1;
  return Polynomial(arity, {{1.0, e}});
}

void Polynomial::canonicalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return graded_lex_less(a.exps, b.exps); });
  std::vector<Term> out;
  for (auto& t : terms_) {
    if (!out.empty() && out.back().exps == t.exps)
      out.back().coeff += t.coeff;
    else
      out.push_back(std::move(t));
  }
  std::erase_if(out, [](const Term& t) { return std::abs(t.coeff) < kCoeffDropTol; });
  terms_ = std::move(out);
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, term_degree(t.exps));
  return d;
}

double Polynomial::evaluate(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != arity_)
    throw std::invalid_argument("point dimension does not match arity");
  // Kahan summation in canonical term order for determinism.
  double sum = 0.0, comp = 0.0;
  for (const auto& t : terms_) {
    double v = t.coeff;
    for (int j = 0; j < arity_; ++j) {
      int e = t.exps[j];
      double p = point[j];
      while (e-- > 0) v *= p;
    }
    double y = v - comp;
    double s = sum + y;
    comp = (s - sum) - y;
    sum = s;
  }
  return sum;
}

Polynomial Polynomial::operator+(const Polynomial& q) const {
  if (arity_ != q.arity_) throw std::invalid_argument("arity mismatch in add");
  std::vector<Term> terms = terms_;
  terms.insert(terms.end(), q.terms_.begin(), q.terms_.end());
  return Polynomial(arity_, std::move(terms));
}

Polynomial Polynomial::operator-(const Polynomial& q) const { return *this + q.scaled(-1.0); }

Polynomial Polynomial::scaled(double s) const {
  std::vector<Term> terms = terms_;
  for (auto& t : terms) t.coeff *= s;
  return Polynomial(arity_, std::move(terms));
}

Polynomial Polynomial::operator*(const Polynomial& q) const {
  if (arity_ != q.arity_) throw std::invalid_argument("arity mismatch in multiply");
  std::map<std::vector<int>, double> acc;
  for (const auto& a : terms_)
    for (const auto& b : q.terms_) {
      std::vector<int> e(arity_);
      for (int j = 0; j < arity_; ++j) e[j] = a.exps[j] + b.exps[j];
      acc[std::move(e)] += a.coeff * b.coeff;
    }
  std::vector<Term> terms;
  terms.reserve(acc.size());
  for (auto& [e, c] : acc) terms.push_back({c, e});
  return Polynomial(arity_, std::move(terms));
}

Polynomial Polynomial::compose(const std::vector<Polynomial>& substitutions) const {
  if (static_cast<int>(substitutions.size()) != arity_)
    throw std::invalid_argument("substitution count does not match arity");
  int out_arity = substitutions.empty() ? 0 : substitutions[0].arity();
  for (const auto& s : substitutions)
    if (s.arity() != out_arity) throw std::invalid_argument("substitutions disagree on arity");

  // memoized powers of each substitution
  std::vector<std::vector<Polynomial>> powers(arity_);
  auto power = [&](int j, int e) -> const Polynomial& {
    auto& cache = powers[j];
    if (cache.empty()) cache.push_back(Polynomial::constant(out_arity, 1.0));
    while (static_cast<int>(cache.size()) <= e) cache.push_back(cache.back() * substitutions[j]);
    return cache[e];
  };

  Polynomial result(out_arity);
  for (const auto& t : terms_) {
    Polynomial prod = Polynomial::constant(out_arity, t.coeff);
    for (int j = 0; j < arity_; ++j)
      if (t.exps[j] > 0) prod = prod * power(j, t.exps[j]);
    result = result + prod;
  }
  return result;
}

Polynomial Polynomial::partial(int var) const {
  if (var < 0 || var >= arity_) throw std::invalid_argument("variable index out of range");
  std::vector<Term> terms;
  for (const auto& t : terms_) {
    if (t.exps[var] == 0) continue;
    Term d = t;
    d.coeff *= t.exps[var];
    d.exps[var] -= 1;
    terms.push_back(std::move(d));
  }
  return Polynomial(arity_, std::move(terms));
}

std::vector<Polynomial> Polynomial::gradient() const {
  std::vector<Polynomial> g;
  g.reserve(arity_);
  for (int j = 0; j < arity_; ++j) g.push_back(partial(j));
  return g;
}

Interval Polynomial::interval_bound(std::span<const Interval> box) const {
  if (static_cast<int>(box.size()) != arity_)
    throw std::invalid_argument("box dimension does not match arity");
  for (const auto& iv : box)
    if (iv.lo > iv.hi) throw std::invalid_argument("empty box");
  Interval total{0.0, 0.0};
  for (const auto& t : terms_) {
    Interval term{t.coeff, t.coeff};
    for (int j = 0; j < arity_; ++j)
      if (t.exps[j] > 0) term = term * interval_pow(box[j], t.exps[j]);
    total = total + term;
  }
  return total;
}

double Polynomial::lipschitz_bound(std::span<const Interval> box) const {
  double bound = 0.0;
  for (int j = 0; j < arity_; ++j) bound += partial(j).interval_bound(box).max_abs();
  return bound;
}

std::string Polynomial::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) os << (t.coeff < 0 ? " - " : " + ");
    else if (t.coeff < 0) os << "-";
    first = false;
    os << std::abs(t.coeff);
    for (int j = 0; j < arity_; ++j) {
      if (t.exps[j] == 0) continue;
      os << "*v" << j;
      if (t.exps[j] > 1) os << "^" << t.exps[j];
    }
  }
  return os.str();
}

bool Polynomial::operator==(const Polynomial& o) const {
  if (arity_ != o.arity_ || terms_.size() != o.terms_.size()) return false;
  for (size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].exps != o.terms_[i].exps || terms_[i].coeff != o.terms_[i].coeff) return false;
  return true;
}

}  // namespace icc
